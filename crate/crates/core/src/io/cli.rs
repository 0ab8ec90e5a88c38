//! `entdyn` command-line interface.
//!
//! Exit codes: 0 on success, 1 on runtime or validation failure, 2 on
//! usage and parameter errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::{parse_config, Format, RunConfig, Selection, WindowOverride, SCHEMA_HELP};
use super::{emit_plot, emit_sweep, emit_table};
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::OracleConfig;
use crate::scenarios::{
    builtin_presets_with, compare_engines, find_preset, format_value, run_preset, run_single,
    run_sweep, CurveSet, Engine, Param, Reducer, SweepAxis,
};

#[derive(Parser, Debug)]
#[command(
    name = "entdyn",
    version,
    about = "Entanglement dynamics of two driven qubits moving through a common Lorentzian reservoir",
    after_help = SCHEMA_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one parameter set.
    Solve(SolveArgs),
    /// Reproduce one of the built-in figure presets.
    Figure(FigureArgs),
    /// Reduce concurrence over a one- or two-parameter grid.
    Sweep(SweepArgs),
    /// Compare the analytic engine against the oracle on every preset.
    Validate(ValidateArgs),
    /// List the built-in presets.
    Presets(PresetsArgs),
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    /// Qubit transition frequency (units of γ)
    #[arg(long)]
    omega0: Option<f64>,
    /// Reservoir coupling rate
    #[arg(long)]
    gamma: Option<f64>,
    /// Reservoir spectral width
    #[arg(long)]
    lambda: Option<f64>,
    /// Qubit-cavity detuning
    #[arg(long, allow_negative_numbers = true)]
    delta: Option<f64>,
    /// Classical drive amplitude Ω
    #[arg(long = "omega-drive", alias = "omega")]
    omega_drive: Option<f64>,
    /// Qubit velocity ratio v/c
    #[arg(long)]
    beta: Option<f64>,
    /// Relative coupling of qubit 1
    #[arg(long)]
    r1: Option<f64>,
    /// Initial mixing angle
    #[arg(long)]
    eta: Option<f64>,
    /// Initial relative phase
    #[arg(long)]
    phi: Option<f64>,
}

impl ModelArgs {
    fn apply(&self, p: &mut ModelParams) {
        let pairs = [
            (Param::Omega0, self.omega0),
            (Param::Gamma, self.gamma),
            (Param::Lambda, self.lambda),
            (Param::Delta, self.delta),
            (Param::OmegaDrive, self.omega_drive),
            (Param::Beta, self.beta),
            (Param::R1, self.r1),
            (Param::Eta, self.eta),
            (Param::Phi, self.phi),
        ];
        for (param, value) in pairs {
            if let Some(v) = value {
                param.set(p, v);
            }
        }
    }
}

#[derive(Args, Debug, Default)]
struct WindowArgs {
    /// First output time γt
    #[arg(long, allow_negative_numbers = true)]
    t_start: Option<f64>,
    /// Last output time γt
    #[arg(long, allow_negative_numbers = true)]
    t_end: Option<f64>,
    /// Number of output samples
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct SolverArgs {
    /// Relative tolerance of the adaptive integrators
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Absolute tolerance of the adaptive integrators
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Largest integrator step (γt)
    #[arg(long)]
    max_step: Option<f64>,
}

impl SolverArgs {
    fn apply(&self, c: &mut OracleConfig) {
        if let Some(v) = self.rel_tol {
            c.rel_tol = v;
        }
        if let Some(v) = self.abs_tol {
            c.abs_tol = v;
        }
        if self.max_step.is_some() {
            c.max_step = self.max_step;
        }
    }
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// JSON configuration file; flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Computation engine: analytic or oracle
    #[arg(long)]
    engine: Option<Engine>,
    /// Output formats, comma separated: csv, json, svg
    #[arg(long)]
    format: Option<String>,
    /// Output directory (default ./out/<run id>/)
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct FigureArgs {
    /// Preset name (fig2a ... fig5d); may come from the configuration file
    name: Option<String>,
    /// Detuning values used by fig5a..fig5d, comma separated
    #[arg(long, allow_negative_numbers = true)]
    detunings: Option<String>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Sweep axis as `param=v1,v2,...`; give once or twice
    #[arg(long, allow_negative_numbers = true)]
    axis: Vec<String>,
    /// Reduction: min, final or time_average
    #[arg(long)]
    reduce: Option<Reducer>,
    #[command(flatten)]
    common: CommonArgs,
    #[command(flatten)]
    model: ModelArgs,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Largest accepted sup-norm concurrence gap
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Detuning values used by fig5a..fig5d, comma separated
    #[arg(long, allow_negative_numbers = true)]
    detunings: Option<String>,
    #[command(flatten)]
    solver: SolverArgs,
}

#[derive(Args, Debug)]
struct PresetsArgs {
    /// Detuning values used by fig5a..fig5d, comma separated
    #[arg(long, allow_negative_numbers = true)]
    detunings: Option<String>,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter { .. }
        | Error::NonFinite(_)
        | Error::Config(_)
        | Error::TimeWindow(_) => 2,
        _ => 1,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if matches!(e, Error::Config(_)) {
                eprintln!("\n{SCHEMA_HELP}");
            }
            code
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Solve(a) => solve(a),
        Command::Figure(a) => figure(a),
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => validate(a),
        Command::Presets(a) => presets(a),
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<f64>()
                .map_err(|_| Error::Config(format!("{what}: `{x}` is not a number")))
        })
        .collect()
}

fn parse_axis(s: &str) -> Result<SweepAxis> {
    let (name, values) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("--axis `{s}`: expected param=v1,v2,...")))?;
    Ok(SweepAxis {
        param: name.trim().parse()?,
        values: parse_list(values, "--axis")?,
    })
}

fn load_config(common: &CommonArgs) -> Result<RunConfig> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            parse_config(&text).map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
                other => other,
            })?
        }
        None => RunConfig::default(),
    };
    if let Some(engine) = common.engine {
        cfg.engine = engine;
    }
    if let Some(f) = &common.format {
        cfg.formats = Format::parse_list(f)?;
    }
    if common.out.is_some() {
        cfg.output_dir = common.out.clone();
    }
    let w = &common.window;
    cfg.window = WindowOverride {
        start: w.t_start.or(cfg.window.start),
        end: w.t_end.or(cfg.window.end),
        samples: w.samples.or(cfg.window.samples),
    };
    common.solver.apply(&mut cfg.solver);
    Ok(cfg)
}

fn mode_conflict(cfg: &RunConfig, expected: &str) -> Error {
    let found = match &cfg.selection {
        Selection::Single => "a single run".to_string(),
        Selection::Preset { name } => format!("preset `{name}` (use `entdyn figure`)"),
        Selection::Sweep { .. } => "a sweep (use `entdyn sweep`)".to_string(),
    };
    Error::Config(format!(
        "configuration selects {found}; `{expected}` cannot run it"
    ))
}

/// Short content hash identifying a run in the default output path.
fn run_id(prefix: &str, cfg: &RunConfig) -> Result<String> {
    #[derive(Serialize)]
    struct Key<'a> {
        model: &'a ModelParams,
        selection: &'a Selection,
        engine: Engine,
        window: crate::scenarios::TimeWindow,
        solver: &'a OracleConfig,
    }
    let bytes = serde_json::to_vec(&Key {
        model: &cfg.model,
        selection: &cfg.selection,
        engine: cfg.engine,
        window: cfg.time_window(),
        solver: &cfg.solver,
    })?;
    let digest = Sha256::digest(&bytes);
    let hex: String = digest.iter().take(6).map(|b| format!("{b:02x}")).collect();
    Ok(format!("{prefix}-{hex}"))
}

fn output_dir(cfg: &RunConfig, id: &str) -> PathBuf {
    cfg.output_dir
        .clone()
        .unwrap_or_else(|| Path::new("out").join(id))
}

fn write_file(dir: &Path, stem: &str, format: Format, bytes: &[u8]) -> Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    fs::write(&path, bytes)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn write_curves(set: &CurveSet, cfg: &RunConfig, dir: &Path, stem: &str) -> Result<i32> {
    for f in &set.failures {
        eprintln!("warning: curve {} failed: {}", f.label, f.reason);
    }
    for c in &set.curves {
        let last = c.concurrence.last().copied().unwrap_or(f64::NAN);
        let min = c.concurrence.iter().copied().fold(f64::INFINITY, f64::min);
        println!(
            "{:<16} C(end) = {:.6e}   min C = {:.6e}   [{}]",
            c.label,
            last,
            min,
            set.engine.name()
        );
    }
    for &format in &cfg.formats {
        let bytes = match format {
            Format::Svg => emit_plot(set)?.into_bytes(),
            _ => emit_table(set, format)?,
        };
        write_file(dir, stem, format, &bytes)?;
    }
    Ok(if set.failures.is_empty() { 0 } else { 1 })
}

fn solve(a: SolveArgs) -> Result<i32> {
    let mut cfg = load_config(&a.common)?;
    if cfg.selection != Selection::Single {
        return Err(mode_conflict(&cfg, "solve"));
    }
    a.model.apply(&mut cfg.model);
    cfg.model.validate()?;
    cfg.validate()?;
    let id = run_id("solve", &cfg)?;
    let window = cfg.time_window();
    let set = run_single(&id, &cfg.model, &window, cfg.engine, &cfg.solver);
    if let Some(f) = set.failures.first() {
        return Err(Error::Numeric(f.reason.clone()));
    }
    write_curves(&set, &cfg, &output_dir(&cfg, &id), &id)
}

fn figure(a: FigureArgs) -> Result<i32> {
    let mut cfg = load_config(&a.common)?;
    if let Some(d) = &a.detunings {
        cfg.detunings = parse_list(d, "--detunings")?;
    }
    let name = match (&a.name, &cfg.selection) {
        (Some(n), Selection::Preset { name }) if n != name => {
            return Err(Error::Config(format!(
                "preset `{n}` given but the configuration selects `{name}`"
            )))
        }
        (Some(n), Selection::Single | Selection::Preset { .. }) => n.clone(),
        (None, Selection::Preset { name }) => name.clone(),
        (None, Selection::Single) => {
            return Err(Error::Config("figure: no preset name given".into()))
        }
        (_, Selection::Sweep { .. }) => return Err(mode_conflict(&cfg, "figure")),
    };
    cfg.selection = Selection::Preset { name: name.clone() };
    cfg.validate()?;
    let mut preset = find_preset(&name, &cfg.detunings)
        .ok_or_else(|| Error::Config(format!("unknown preset `{name}`")))?;
    preset.t_window = cfg.time_window();
    let set = run_preset(&preset, cfg.engine, &cfg.solver);
    write_curves(&set, &cfg, &output_dir(&cfg, &name), &name)
}

fn sweep(a: SweepArgs) -> Result<i32> {
    let mut cfg = load_config(&a.common)?;
    let (cfg_axes, cfg_reduce) = match &cfg.selection {
        Selection::Sweep { axes, reduce } => (axes.clone(), *reduce),
        Selection::Single => (Vec::new(), Reducer::Min),
        Selection::Preset { .. } => return Err(mode_conflict(&cfg, "sweep")),
    };
    let axes = if a.axis.is_empty() {
        cfg_axes
    } else {
        a.axis
            .iter()
            .map(|s| parse_axis(s))
            .collect::<Result<_>>()?
    };
    if axes.is_empty() {
        return Err(Error::Config(
            "sweep: give at least one --axis param=v1,v2,...".into(),
        ));
    }
    cfg.selection = Selection::Sweep {
        axes,
        reduce: a.reduce.unwrap_or(cfg_reduce),
    };
    a.model.apply(&mut cfg.model);
    cfg.model.validate()?;
    cfg.validate()?;
    let spec = cfg.sweep_spec().expect("sweep selection");
    let id = run_id("sweep", &cfg)?;
    let table = run_sweep(&spec, &cfg.model, &cfg.solver)?;
    let failed = table.rows.iter().filter(|r| r.error.is_some()).count();
    for row in &table.rows {
        let coords: Vec<String> = table
            .axes
            .iter()
            .zip(&row.coords)
            .map(|(p, &v)| format!("{}={}", p.name(), format_value(v)))
            .collect();
        match (&row.value, &row.error) {
            (Some(v), _) => println!("{:<32} {} = {v:.6e}", coords.join(" "), spec.reduce.name()),
            (None, Some(e)) => println!("{:<32} failed: {e}", coords.join(" ")),
            (None, None) => {}
        }
    }
    if failed > 0 {
        eprintln!(
            "warning: {failed} of {} sweep points failed",
            table.rows.len()
        );
    }
    let dir = output_dir(&cfg, &id);
    for &format in &cfg.formats {
        if format == Format::Svg {
            eprintln!("note: sweep results are tabular; svg output skipped");
            continue;
        }
        write_file(&dir, &id, format, &emit_sweep(&table, format)?)?;
    }
    Ok(0)
}

fn validate(a: ValidateArgs) -> Result<i32> {
    if !(a.tol.is_finite() && a.tol > 0.0) {
        return Err(Error::Config(format!("--tol {}: must be positive", a.tol)));
    }
    let detunings = match &a.detunings {
        Some(d) => parse_list(d, "--detunings")?,
        None => crate::scenarios::DEFAULT_DETUNINGS.to_vec(),
    };
    let mut config = OracleConfig::default();
    a.solver.apply(&mut config);
    config.validate()?;
    let mut ok = true;
    for preset in builtin_presets_with(&detunings) {
        preset.validate()?;
        let cmp = compare_engines(&preset, &config);
        let failed: Vec<&str> = cmp
            .curves
            .iter()
            .filter(|g| g.gap.is_none())
            .map(|g| g.label.as_str())
            .collect();
        let gap = cmp.max_gap();
        let pass = failed.is_empty() && gap < a.tol;
        ok &= pass;
        println!(
            "{:<6} max |C_analytic - C_oracle| = {gap:.3e}  {}",
            preset.name,
            if pass { "ok" } else { "FAIL" }
        );
        for label in failed {
            println!("       curve {label}: engine failure");
        }
    }
    println!(
        "{} (tolerance {:e})",
        if ok {
            "all presets agree"
        } else {
            "validation failed"
        },
        a.tol
    );
    Ok(if ok { 0 } else { 1 })
}

fn presets(a: PresetsArgs) -> Result<i32> {
    let detunings = match &a.detunings {
        Some(d) => parse_list(d, "--detunings")?,
        None => crate::scenarios::DEFAULT_DETUNINGS.to_vec(),
    };
    for p in builtin_presets_with(&detunings) {
        let values: Vec<String> = p.varied.values.iter().map(|&v| format_value(v)).collect();
        println!(
            "{:<6} {}  [{} in {{{}}}; γt in [{}, {}], {} samples]",
            p.name,
            p.description,
            p.varied.param.name(),
            values.join(", "),
            p.t_window.start,
            p.t_window.end,
            p.t_window.samples
        );
    }
    Ok(0)
}
