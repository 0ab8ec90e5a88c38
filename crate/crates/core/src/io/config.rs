//! JSON run configuration.
//!
//! ```json
//! {
//!   "model":  { "omega0": 1.5e9, "gamma": 1, "lambda": 4, "delta": 0,
//!               "omega_drive": 0, "beta": 0, "r1": 0.7071, "eta": 1.5708, "phi": 0 },
//!   "run":    { "mode": "preset", "preset": "fig2a", "engine": "analytic",
//!               "t_start": 0, "t_end": 50, "samples": 2001, "detunings": [0, 1, 2] },
//!   "sweep":  { "axes": [ { "param": "omega_drive", "values": [0, 1.6, 4] } ],
//!               "reduce": "min" },
//!   "output": { "dir": "out/fig2a", "formats": ["csv", "json", "svg"] },
//!   "solver": { "rel_tol": 1e-9, "abs_tol": 1e-12 }
//! }
//! ```
//!
//! Every section and key is optional; unknown keys are rejected.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::OracleConfig;
use crate::scenarios::{
    find_preset, Engine, Reducer, SweepAxis, SweepSpec, TimeWindow, DEFAULT_DETUNINGS, PRESET_NAMES,
};

pub const SCHEMA_HELP: &str = r#"Configuration file (JSON), all keys optional:
  model:  omega0, gamma, lambda, delta, omega_drive, beta, r1, eta, phi   (rates in units of gamma)
  run:    mode ("single" | "preset" | "sweep"), preset (fig2a..fig5d),
          engine ("analytic" | "oracle"), t_start, t_end, samples,
          detunings (list used by fig5a..fig5d)
  sweep:  axes [{param, values}] (1 or 2 axes), reduce ("min" | "final" | "time_average")
  output: dir, formats (subset of "csv", "json", "svg")
  solver: rel_tol, abs_tol, max_step, method, fill_epsilon
Exactly one of single run, preset and sweep may be selected."#;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }

    /// Comma-separated list, e.g. `csv,svg`; order and duplicates are
    /// normalized.
    pub fn parse_list(s: &str) -> Result<Vec<Format>> {
        let mut out: Vec<Format> = s
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        out.sort();
        out.dedup();
        if out.is_empty() {
            return Err(Error::Config("no output format given".into()));
        }
        Ok(out)
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "svg" => Ok(Format::Svg),
            other => Err(Error::Config(format!(
                "unknown output format `{other}` (expected csv, json or svg)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Single,
    Preset,
    Sweep,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    model: ModelParams,
    #[serde(default)]
    run: RawRun,
    sweep: Option<RawSweep>,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    solver: OracleConfig,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    mode: Option<Mode>,
    preset: Option<String>,
    engine: Option<Engine>,
    t_start: Option<f64>,
    t_end: Option<f64>,
    samples: Option<usize>,
    detunings: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axes: Vec<SweepAxis>,
    reduce: Reducer,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
    formats: Option<Vec<Format>>,
}

/// Partial time window; unset fields come from the selection's default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct WindowOverride {
    pub start: Option<f64>,
    pub end: Option<f64>,
    pub samples: Option<usize>,
}

impl WindowOverride {
    pub fn resolve(&self, default: TimeWindow) -> TimeWindow {
        TimeWindow {
            start: self.start.unwrap_or(default.start),
            end: self.end.unwrap_or(default.end),
            samples: self.samples.unwrap_or(default.samples),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Selection {
    Single,
    Preset {
        name: String,
    },
    Sweep {
        axes: Vec<SweepAxis>,
        reduce: Reducer,
    },
}

/// A validated run description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelParams,
    pub selection: Selection,
    pub engine: Engine,
    pub window: WindowOverride,
    pub detunings: Vec<f64>,
    pub output_dir: Option<PathBuf>,
    pub formats: Vec<Format>,
    pub solver: OracleConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelParams::default(),
            selection: Selection::Single,
            engine: Engine::Analytic,
            window: WindowOverride::default(),
            detunings: DEFAULT_DETUNINGS.to_vec(),
            output_dir: None,
            formats: vec![Format::Csv, Format::Svg],
            solver: OracleConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn mode(&self) -> Mode {
        match self.selection {
            Selection::Single => Mode::Single,
            Selection::Preset { .. } => Mode::Preset,
            Selection::Sweep { .. } => Mode::Sweep,
        }
    }

    /// Time window after applying overrides to the selection's default.
    pub fn time_window(&self) -> TimeWindow {
        let default = match &self.selection {
            Selection::Preset { name } => find_preset(name, &self.detunings)
                .map(|p| p.t_window)
                .unwrap_or_default(),
            _ => TimeWindow::default(),
        };
        self.window.resolve(default)
    }

    pub fn sweep_spec(&self) -> Option<SweepSpec> {
        match &self.selection {
            Selection::Sweep { axes, reduce } => Some(SweepSpec {
                axes: axes.clone(),
                reduce: *reduce,
                t_window: self.time_window(),
                engine: self.engine,
            }),
            _ => None,
        }
    }

    /// Checks every cross-field constraint; messages name the offending key.
    pub fn validate(&self) -> Result<()> {
        self.model.validate().map_err(|e| prefix("model", e))?;
        self.solver.validate().map_err(|e| prefix("solver", e))?;
        if let Selection::Preset { name } = &self.selection {
            if !PRESET_NAMES.contains(&name.as_str()) {
                return Err(Error::Config(format!(
                    "run.preset: unknown preset `{name}` (expected one of {})",
                    PRESET_NAMES.join(", ")
                )));
            }
        }
        if self.detunings.is_empty() || self.detunings.iter().any(|d| !d.is_finite()) {
            return Err(Error::Config(
                "run.detunings: must be a non-empty list of finite values".into(),
            ));
        }
        for (i, d) in self.detunings.iter().enumerate() {
            if self.detunings[..i].contains(d) {
                return Err(Error::Config(format!("run.detunings: duplicate value {d}")));
            }
        }
        self.time_window()
            .validate()
            .map_err(|e| Error::Config(format!("run: {e}")))?;
        if let Some(spec) = self.sweep_spec() {
            spec.validate().map_err(|e| prefix("sweep", e))?;
        }
        if self.formats.is_empty() {
            return Err(Error::Config(
                "output.formats: at least one format required".into(),
            ));
        }
        Ok(())
    }
}

fn prefix(section: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter {
            name,
            value,
            constraint,
        } => Error::Config(format!(
            "{section}.{name} = {value}: must satisfy {constraint}"
        )),
        Error::NonFinite(name) => Error::Config(format!("{section}.{name}: must be finite")),
        Error::Config(msg) => Error::Config(format!("{section}: {msg}")),
        other => Error::Config(format!("{section}: {other}")),
    }
}

/// Parses and validates a JSON configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| Error::Config(format!("syntax: {e}")))?;

    let selection = match (raw.run.mode, raw.run.preset, raw.sweep) {
        (_, Some(_), Some(_)) => {
            return Err(Error::Config(
                "run.preset and sweep are mutually exclusive; select one".into(),
            ))
        }
        (None | Some(Mode::Preset), Some(name), None) => Selection::Preset { name },
        (None | Some(Mode::Sweep), None, Some(s)) => Selection::Sweep {
            axes: s.axes,
            reduce: s.reduce,
        },
        (None | Some(Mode::Single), None, None) => Selection::Single,
        (Some(Mode::Preset), None, _) => {
            return Err(Error::Config(
                "run.mode is \"preset\" but run.preset is missing".into(),
            ))
        }
        (Some(Mode::Sweep), _, None) => {
            return Err(Error::Config(
                "run.mode is \"sweep\" but the sweep section is missing".into(),
            ))
        }
        (Some(mode), _, _) => {
            return Err(Error::Config(format!(
                "run.mode {mode:?} conflicts with the selected preset or sweep"
            )))
        }
    };

    let mut formats = raw
        .output
        .formats
        .unwrap_or_else(|| vec![Format::Csv, Format::Svg]);
    formats.sort();
    formats.dedup();

    let config = RunConfig {
        model: raw.model,
        selection,
        engine: raw.run.engine.unwrap_or(Engine::Analytic),
        window: WindowOverride {
            start: raw.run.t_start,
            end: raw.run.t_end,
            samples: raw.run.samples,
        },
        detunings: raw
            .run
            .detunings
            .unwrap_or_else(|| DEFAULT_DETUNINGS.to_vec()),
        output_dir: raw.output.dir,
        formats,
        solver: raw.solver,
    };
    config.validate()?;
    Ok(config)
}
