//! Named parameter regimes, engine dispatch and parameter sweeps.
//!
//! Preset names (`fig2a` ... `fig5d`) are a stable public contract.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic;
use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::oracle::{self, OracleConfig};
use crate::trajectory::{uniform_grid, Trajectory};

/// Detuning values used by the detuning presets unless overridden.
pub const DEFAULT_DETUNINGS: [f64; 3] = [0.0, 1.0, 2.0];

pub const PRESET_NAMES: [&str; 10] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig5c", "fig5d",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Omega0,
    Gamma,
    Lambda,
    Delta,
    OmegaDrive,
    Beta,
    R1,
    Eta,
    Phi,
}

impl Param {
    pub const ALL: [Param; 9] = [
        Param::Omega0,
        Param::Gamma,
        Param::Lambda,
        Param::Delta,
        Param::OmegaDrive,
        Param::Beta,
        Param::R1,
        Param::Eta,
        Param::Phi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Param::Omega0 => "omega0",
            Param::Gamma => "gamma",
            Param::Lambda => "lambda",
            Param::Delta => "delta",
            Param::OmegaDrive => "omega_drive",
            Param::Beta => "beta",
            Param::R1 => "r1",
            Param::Eta => "eta",
            Param::Phi => "phi",
        }
    }

    pub fn get(self, p: &ModelParams) -> f64 {
        match self {
            Param::Omega0 => p.omega0,
            Param::Gamma => p.gamma,
            Param::Lambda => p.lambda,
            Param::Delta => p.delta,
            Param::OmegaDrive => p.omega_drive,
            Param::Beta => p.beta,
            Param::R1 => p.r1,
            Param::Eta => p.eta,
            Param::Phi => p.phi,
        }
    }

    pub fn set(self, p: &mut ModelParams, value: f64) {
        let slot = match self {
            Param::Omega0 => &mut p.omega0,
            Param::Gamma => &mut p.gamma,
            Param::Lambda => &mut p.lambda,
            Param::Delta => &mut p.delta,
            Param::OmegaDrive => &mut p.omega_drive,
            Param::Beta => &mut p.beta,
            Param::R1 => &mut p.r1,
            Param::Eta => &mut p.eta,
            Param::Phi => &mut p.phi,
        };
        *slot = value;
    }

    pub fn with(self, p: &ModelParams, value: f64) -> ModelParams {
        let mut out = *p;
        self.set(&mut out, value);
        out
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown parameter `{s}`")))
    }
}

/// Compact label value: four decimals with trailing zeros trimmed, and
/// scientific notation for small non-zero magnitudes.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() < 1e-3 {
        return format!("{v:e}");
    }
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn curve_label(param: Param, value: f64) -> String {
    format!("{}={}", param.name(), format_value(value))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeWindow {
    pub start: f64,
    pub end: f64,
    pub samples: usize,
}

impl TimeWindow {
    pub const fn new(start: f64, end: f64, samples: usize) -> Self {
        Self {
            start,
            end,
            samples,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.end.is_finite()) {
            return Err(Error::TimeWindow("bounds must be finite".into()));
        }
        if self.start < 0.0 {
            return Err(Error::TimeWindow(format!("start {} < 0", self.start)));
        }
        if self.samples == 0 {
            return Err(Error::TimeWindow("samples must be >= 1".into()));
        }
        if self.end < self.start || (self.samples > 1 && self.end == self.start) {
            return Err(Error::TimeWindow(format!(
                "empty window [{}, {}] with {} samples",
                self.start, self.end, self.samples
            )));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(self.start, self.end, self.samples)
    }
}

impl Default for TimeWindow {
    fn default() -> Self {
        Self::new(0.0, 50.0, 2001)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Laplace-domain residue solution.
    Analytic,
    /// Direct integration of the memory-kernel equations.
    Oracle,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Oracle => "oracle",
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "oracle" => Ok(Engine::Oracle),
            other => Err(Error::Config(format!(
                "unknown engine `{other}` (expected analytic or oracle)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Varied {
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preset {
    pub name: String,
    pub description: String,
    pub base: ModelParams,
    pub varied: Varied,
    pub t_window: TimeWindow,
}

impl Preset {
    /// Parameter set for every varied value, in order.
    pub fn members(&self) -> Vec<ModelParams> {
        self.varied
            .values
            .iter()
            .map(|&v| self.varied.param.with(&self.base, v))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        self.t_window.validate()?;
        let vals = &self.varied.values;
        for (i, a) in vals.iter().enumerate() {
            if vals[..i].contains(a) {
                return Err(Error::Config(format!(
                    "preset {}: duplicate {} value {a}",
                    self.name, self.varied.param
                )));
            }
        }
        self.members().iter().try_for_each(ModelParams::validate)
    }
}

pub fn builtin_presets() -> Vec<Preset> {
    builtin_presets_with(&DEFAULT_DETUNINGS)
}

/// All built-in presets, with the detuning presets using `detunings`.
pub fn builtin_presets_with(detunings: &[f64]) -> Vec<Preset> {
    let base = ModelParams {
        beta: 0.0,
        omega_drive: 0.0,
        delta: 0.0,
        ..ModelParams::default()
    };
    let short = TimeWindow::new(0.0, 50.0, 2001);
    let long = TimeWindow::new(0.0, 100.0, 4001);
    let velocities = vec![0.0, 1e-9, 3e-9];

    let mut out = Vec::with_capacity(PRESET_NAMES.len());
    let mut push =
        |name: &str, description: String, base: ModelParams, varied: Varied, t_window| {
            out.push(Preset {
                name: name.into(),
                description,
                base,
                varied,
                t_window,
            })
        };

    let couplings = Varied {
        param: Param::R1,
        values: vec![FRAC_1_SQRT_2, 0.5, 0.0],
    };
    for (name, lambda, window) in [("fig2a", 4.0, short), ("fig2b", 0.04, long)] {
        push(
            name,
            format!("static undriven pair, lambda = {lambda}; relative coupling r1 varied"),
            ModelParams { lambda, ..base },
            couplings.clone(),
            window,
        );
    }

    for (name, lambda, omega, window) in [
        ("fig3a", 4.0, 0.0, short),
        ("fig3b", 4.0, 1.6, short),
        ("fig4a", 0.1, 0.0, long),
        ("fig4b", 0.1, 4.0, long),
    ] {
        push(
            name,
            format!("lambda = {lambda}, Omega = {omega}, r1 = 0.5; velocity ratio beta varied"),
            ModelParams {
                lambda,
                omega_drive: omega,
                r1: 0.5,
                ..base
            },
            Varied {
                param: Param::Beta,
                values: velocities.clone(),
            },
            window,
        );
    }

    for (name, omega, beta) in [
        ("fig5a", 0.5, 0.0),
        ("fig5b", 1.6, 0.0),
        ("fig5c", 0.5, 1e-9),
        ("fig5d", 4.0, 1e-9),
    ] {
        push(
            name,
            format!(
                "lambda = 0.1, Omega = {omega}, beta = {}, r1 = 0.5; detuning varied",
                format_value(beta)
            ),
            ModelParams {
                lambda: 0.1,
                omega_drive: omega,
                beta,
                r1: 0.5,
                ..base
            },
            Varied {
                param: Param::Delta,
                values: detunings.to_vec(),
            },
            long,
        );
    }
    out
}

pub fn find_preset(name: &str, detunings: &[f64]) -> Option<Preset> {
    builtin_presets_with(detunings)
        .into_iter()
        .find(|p| p.name == name)
}

/// One trajectory on `window`. The dynamics always start at `t = 0`; a
/// window starting later is sampled from that run.
pub fn run_curve(
    params: &ModelParams,
    window: &TimeWindow,
    engine: Engine,
    config: &OracleConfig,
) -> Result<Trajectory> {
    window.validate()?;
    params.validate()?;
    let grid = window.grid();
    let shifted = grid[0] != 0.0;
    let full: Vec<f64> = if shifted {
        std::iter::once(0.0).chain(grid.iter().copied()).collect()
    } else {
        grid
    };
    let mut traj = match engine {
        Engine::Analytic => analytic::amplitudes(&full, params, &config.tolerances(params))?,
        Engine::Oracle => oracle::integrate_volterra(params, &full, config)?,
    };
    if shifted {
        traj.times.remove(0);
        traj.c1.remove(0);
        traj.c2.remove(0);
        if let Some(eps) = traj.eps.as_mut() {
            eps.remove(0);
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    /// Value of the varied parameter, if any.
    pub value: Option<f64>,
    pub params: ModelParams,
    pub trajectory: Trajectory,
    pub concurrence: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFailure {
    pub label: String,
    pub value: Option<f64>,
    pub params: ModelParams,
    pub reason: String,
}

/// Curves sharing one time grid, computed by a single engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSet {
    pub name: String,
    pub description: String,
    pub engine: Engine,
    pub varied: Option<Param>,
    pub t_window: TimeWindow,
    pub times: Vec<f64>,
    pub solver: OracleConfig,
    pub curves: Vec<Curve>,
    pub failures: Vec<CurveFailure>,
}

impl CurveSet {
    pub fn curve(&self, label: &str) -> Option<&Curve> {
        self.curves.iter().find(|c| c.label == label)
    }
}

fn assemble(
    name: &str,
    description: &str,
    varied: Option<Param>,
    window: &TimeWindow,
    engine: Engine,
    config: &OracleConfig,
    members: Vec<(String, Option<f64>, ModelParams)>,
) -> CurveSet {
    let results: Vec<_> = members
        .into_par_iter()
        .map(|(label, value, params)| {
            let res = run_curve(&params, window, engine, config);
            (label, value, params, res)
        })
        .collect();
    let mut curves = Vec::new();
    let mut failures = Vec::new();
    for (label, value, params, res) in results {
        match res {
            Ok(trajectory) => curves.push(Curve {
                concurrence: trajectory.concurrence(),
                label,
                value,
                params,
                trajectory,
            }),
            Err(e) => failures.push(CurveFailure {
                label,
                value,
                params,
                reason: e.to_string(),
            }),
        }
    }
    CurveSet {
        name: name.into(),
        description: description.into(),
        engine,
        varied,
        t_window: *window,
        times: window.grid(),
        solver: *config,
        curves,
        failures,
    }
}

/// One concurrence curve per varied value, in preset order. Failures are
/// recorded per curve and do not abort the others.
pub fn run_preset(preset: &Preset, engine: Engine, config: &OracleConfig) -> CurveSet {
    let param = preset.varied.param;
    let members = preset
        .members()
        .into_iter()
        .zip(&preset.varied.values)
        .map(|(p, &v)| (curve_label(param, v), Some(v), p))
        .collect();
    assemble(
        &preset.name,
        &preset.description,
        Some(param),
        &preset.t_window,
        engine,
        config,
        members,
    )
}

/// A single parameter set as a one-curve set.
pub fn run_single(
    name: &str,
    params: &ModelParams,
    window: &TimeWindow,
    engine: Engine,
    config: &OracleConfig,
) -> CurveSet {
    assemble(
        name,
        "single parameter set",
        None,
        window,
        engine,
        config,
        vec![(name.to_string(), None, *params)],
    )
}

pub fn sup_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineGap {
    pub label: String,
    /// Sup-norm concurrence gap, `None` if either engine failed.
    pub gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EngineComparison {
    pub preset: String,
    pub curves: Vec<EngineGap>,
}

impl EngineComparison {
    /// Largest gap; infinite if any curve failed on either engine.
    pub fn max_gap(&self) -> f64 {
        self.curves
            .iter()
            .map(|c| c.gap.unwrap_or(f64::INFINITY))
            .fold(0.0, f64::max)
    }
}

/// Runs a preset on both engines and measures the concurrence gap per curve.
pub fn compare_engines(preset: &Preset, config: &OracleConfig) -> EngineComparison {
    let (analytic, oracle) = rayon::join(
        || run_preset(preset, Engine::Analytic, config),
        || run_preset(preset, Engine::Oracle, config),
    );
    let curves = preset
        .varied
        .values
        .iter()
        .map(|&v| {
            let label = curve_label(preset.varied.param, v);
            let gap = match (analytic.curve(&label), oracle.curve(&label)) {
                (Some(a), Some(o)) => Some(sup_gap(&a.concurrence, &o.concurrence)),
                _ => None,
            };
            EngineGap { label, gap }
        })
        .collect();
    EngineComparison {
        preset: preset.name.clone(),
        curves,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reducer {
    Min,
    Final,
    TimeAverage,
}

impl Reducer {
    pub fn name(self) -> &'static str {
        match self {
            Reducer::Min => "min",
            Reducer::Final => "final",
            Reducer::TimeAverage => "time_average",
        }
    }

    /// Summary of a concurrence series; the time average uses the trapezoid
    /// rule over the window.
    pub fn apply(self, times: &[f64], values: &[f64]) -> f64 {
        match self {
            Reducer::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            Reducer::Final => values.last().copied().unwrap_or(f64::NAN),
            Reducer::TimeAverage => {
                if values.len() < 2 {
                    return values.first().copied().unwrap_or(f64::NAN);
                }
                let area: f64 = times
                    .windows(2)
                    .zip(values.windows(2))
                    .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
                    .sum();
                area / (times[times.len() - 1] - times[0])
            }
        }
    }
}

impl FromStr for Reducer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" => Ok(Reducer::Min),
            "final" => Ok(Reducer::Final),
            "time_average" | "mean" => Ok(Reducer::TimeAverage),
            other => Err(Error::Config(format!(
                "unknown reducer `{other}` (expected min, final or time_average)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub param: Param,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub reduce: Reducer,
    pub t_window: TimeWindow,
    pub engine: Engine,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Config(format!(
                "a sweep takes 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 && self.axes[0].param == self.axes[1].param {
            return Err(Error::Config(format!(
                "sweep axes must differ (both are {})",
                self.axes[0].param
            )));
        }
        for axis in &self.axes {
            if axis.values.is_empty() {
                return Err(Error::Config(format!(
                    "sweep axis {} has no values",
                    axis.param
                )));
            }
        }
        self.t_window.validate()
    }

    /// Grid points in lexicographic order (first axis outermost).
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points: Vec<Vec<f64>> = vec![Vec::new()];
        for axis in &self.axes {
            points = points
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        points
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub coords: Vec<f64>,
    pub value: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub axes: Vec<Param>,
    pub reduce: Reducer,
    pub engine: Engine,
    pub t_window: TimeWindow,
    pub base: ModelParams,
    pub solver: OracleConfig,
    pub rows: Vec<SweepRow>,
}

/// Reduced concurrence at every grid point of the sweep. Points that fail
/// (invalid parameters, solver errors) become rows with a reason.
pub fn run_sweep(
    spec: &SweepSpec,
    base: &ModelParams,
    config: &OracleConfig,
) -> Result<SweepTable> {
    spec.validate()?;
    let rows = spec
        .points()
        .into_par_iter()
        .map(|coords| {
            let mut params = *base;
            for (axis, &v) in spec.axes.iter().zip(&coords) {
                axis.param.set(&mut params, v);
            }
            match run_curve(&params, &spec.t_window, spec.engine, config) {
                Ok(traj) => SweepRow {
                    value: Some(spec.reduce.apply(&traj.times, &traj.concurrence())),
                    error: None,
                    coords,
                },
                Err(e) => SweepRow {
                    value: None,
                    error: Some(e.to_string()),
                    coords,
                },
            }
        })
        .collect();
    Ok(SweepTable {
        axes: spec.axes.iter().map(|a| a.param).collect(),
        reduce: spec.reduce,
        engine: spec.engine,
        t_window: spec.t_window,
        base: *base,
        solver: *config,
        rows,
    })
}

#[cfg(test)]
mod tests;
