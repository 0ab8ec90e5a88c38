//! Exact entanglement dynamics of two classically driven qubits moving
//! through a common zero-temperature Lorentzian reservoir.
//!
//! The single-excitation amplitudes follow from a Laplace-domain solution
//! ([`analytic`]) and, independently, from direct integration of the
//! memory-kernel equations ([`oracle`]). [`scenarios`] packages the standard
//! parameter regimes and sweeps; [`io`] holds configuration, serialization
//! and the command-line entry point.

pub mod analytic;
pub mod error;
pub mod integrator;
pub mod io;
pub mod model;
pub mod oracle;
pub mod scenarios;
pub mod trajectory;

pub use error::{Error, Result};
pub use model::{dressed_frame, kernel_params, DressedFrame, KernelParams, Model, ModelParams};
pub use trajectory::{uniform_grid, Source, Trajectory};
