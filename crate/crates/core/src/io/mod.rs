//! Configuration, serialization and the command-line entry point.

pub mod cli;
pub mod config;
pub mod plot;
pub mod table;

pub use config::{parse_config, Format, RunConfig, Selection};
pub use plot::emit_plot;
pub use table::{emit_sweep, emit_table, parse_csv_table, parse_json_table};

/// Version string embedded in every output file.
pub const CODE_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));
