//! Direct numerical solution of the coupled memory-kernel equations
//!
//! ```text
//! c_j'(t) = -g_fac * r_j * ∫_0^t F(t - s) (r1 c1(s) + r2 c2(s)) ds
//! F(s)    = (gamma lambda / 8) (exp(V+ s) + exp(V- s))
//! ```
//!
//! Nothing here touches the Laplace solution. Because the kernel is a sum of
//! two exponentials, the memory integral is carried exactly by two auxiliary
//! states `z± = ∫_0^t exp(V± (t - s)) w(s) ds` obeying `z±' = V± z± + w`.

mod quadrature;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use quadrature::{volterra_quadrature, volterra_quadrature_extrapolated};

use crate::error::{Error, Result};
use crate::integrator::{self, StepStats, Tolerances};
use crate::model::{Model, ModelParams};
use crate::trajectory::{Source, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegratorMethod {
    /// Dormand-Prince 5(4)
    Dopri5,
}

impl IntegratorMethod {
    pub fn order(self) -> u32 {
        match self {
            IntegratorMethod::Dopri5 => 5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Step cap in units of `1/gamma`; `None` uses `0.1 / (1 + omega0 beta)`.
    pub max_step: Option<f64>,
    pub method: IntegratorMethod,
    /// Also integrate the collective amplitude `eps` (one extra run with the
    /// whole coupling on qubit 1).
    pub fill_epsilon: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: None,
            method: IntegratorMethod::Dopri5,
            fill_epsilon: true,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_step.is_none_or(|h| h > 0.0 && h.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "oracle tolerances and max_step must be positive: {self:?}"
            )))
        }
    }

    pub fn tolerances(&self, params: &ModelParams) -> Tolerances {
        let auto = 0.1 / (1.0 + (params.omega0 * params.beta).abs());
        Tolerances {
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            max_step: self.max_step.unwrap_or(auto),
        }
    }
}

fn check_grid(t_grid: &[f64]) -> Result<()> {
    match t_grid.first() {
        Some(&t0) if t0 != 0.0 => Err(Error::TimeWindow(format!(
            "oracle grid must start at 0, got {t0}"
        ))),
        _ => Ok(()),
    }
}

type Rhs = Box<dyn Fn(f64, &[Complex64; 4]) -> [Complex64; 4] + Send + Sync>;

/// Right-hand side of the augmented system `(c1, c2, z+, z-)`.
fn augmented_rhs(model: &Model) -> Rhs {
    let weight = model.frame.g_fac * model.kernel.prefactor;
    let (r1, r2) = (model.params.r1, model.params.r2());
    let (vp, vm) = (model.kernel.v_plus, model.kernel.v_minus);
    Box::new(move |_, s| {
        let w = r1 * s[0] + r2 * s[1];
        let memory = -weight * (s[2] + s[3]);
        [r1 * memory, r2 * memory, vp * s[2] + w, vm * s[3] + w]
    })
}

fn initial_state(params: &ModelParams) -> [Complex64; 4] {
    let (a, b) = params.initial_amplitudes();
    let zero = Complex64::new(0.0, 0.0);
    [a, b, zero, zero]
}

fn run(
    params: &ModelParams,
    t_grid: &[f64],
    tol: &Tolerances,
) -> Result<(Vec<[Complex64; 4]>, StepStats)> {
    let model = Model::new(*params)?;
    integrator::integrate(augmented_rhs(&model), initial_state(params), t_grid, tol)
}

/// Amplitudes `c1, c2` on `t_grid` (which must start at 0).
pub fn integrate_volterra(
    params: &ModelParams,
    t_grid: &[f64],
    config: &OracleConfig,
) -> Result<Trajectory> {
    config.validate()?;
    check_grid(t_grid)?;
    let tol = config.tolerances(params);
    let (states, _) = run(params, t_grid, &tol)?;
    let (c1, c2) = states.iter().map(|s| (s[0], s[1])).unzip();
    let eps = if config.fill_epsilon {
        // all coupling on qubit 1, all excitation on qubit 1: c1 == eps
        let reduced = ModelParams {
            r1: 1.0,
            eta: 0.0,
            phi: 0.0,
            ..*params
        };
        let (states, _) = run(&reduced, t_grid, &tol)?;
        Some(states.iter().map(|s| s[0]).collect())
    } else {
        None
    };
    Ok(Trajectory {
        times: t_grid.to_vec(),
        eps,
        c1,
        c2,
        source: Source::Volterra,
    })
}

/// Step-refinement report of [`richardson_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RichardsonReport {
    pub samples: usize,
    /// Step cap of the reference run.
    pub max_step: f64,
    /// Sup deviation of `c1, c2` over the grid between the adaptive run and a
    /// rerun with halved step cap and tolerances scaled down by `2^order`.
    pub adaptive_deviation: f64,
    /// Sup of `|c_j(h) - c_j(h/2)|` for the method without error control,
    /// sampled at multiples of `h = max_step`.
    pub fixed_step_deviation: f64,
    /// Same, between steps `h/2` and `h/4`.
    pub fixed_step_deviation_refined: f64,
    /// `log2` of the ratio of the two fixed-step deviations.
    pub observed_order: f64,
    /// Largest step the error controller accepted when free of output-grid
    /// constraints.
    pub controller_max_step: f64,
    /// The error controller never reached `max_step`: the dynamics need a
    /// smaller cap than the configured one.
    pub needs_smaller_step: bool,
    pub suggested_max_step: f64,
    pub adaptive_stats: StepStats,
}

fn sup_gap(a: &[[Complex64; 4]], b: &[[Complex64; 4]]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| [(x[0] - y[0]).norm(), (x[1] - y[1]).norm()])
        .fold(0.0, f64::max)
}

/// Re-integrates with halved steps and reports how far the amplitudes move,
/// whether the error scales with the method order, and whether the step cap
/// is adequate for this parameter set.
pub fn richardson_check(
    params: &ModelParams,
    t_grid: &[f64],
    config: &OracleConfig,
) -> Result<RichardsonReport> {
    config.validate()?;
    check_grid(t_grid)?;
    let tol = config.tolerances(params);
    let order = config.method.order();
    if t_grid.is_empty() {
        return Ok(RichardsonReport {
            samples: 0,
            max_step: tol.max_step,
            adaptive_deviation: 0.0,
            fixed_step_deviation: 0.0,
            fixed_step_deviation_refined: 0.0,
            observed_order: f64::NAN,
            controller_max_step: tol.max_step,
            needs_smaller_step: false,
            suggested_max_step: tol.max_step,
            adaptive_stats: StepStats::default(),
        });
    }
    let model = Model::new(*params)?;
    let y0 = initial_state(params);
    let shrink = 2f64.powi(order as i32);

    let (coarse, stats) = integrator::integrate(augmented_rhs(&model), y0, t_grid, &tol)?;
    let fine_tol = Tolerances {
        rel_tol: tol.rel_tol / shrink,
        abs_tol: tol.abs_tol / shrink,
        max_step: tol.max_step / 2.0,
    };
    let (fine, _) = integrator::integrate(augmented_rhs(&model), y0, t_grid, &fine_tol)?;
    let adaptive_deviation = sup_gap(&coarse, &fine);

    let h = tol.max_step;
    let t_end = *t_grid.last().expect("non-empty grid");
    let (_, free) = integrator::integrate(augmented_rhs(&model), y0, &[0.0, t_end], &tol)?;
    let controller_max_step = free.max_step;
    let needs_smaller_step = t_end > h && controller_max_step < 0.999 * h;

    // multiples of h, so a dense output grid cannot shorten the fixed steps
    let probe_grid: Vec<f64> = (0..=(t_end / h).ceil() as usize)
        .map(|k| (k as f64 * h).min(t_end))
        .collect();
    let f1 = integrator::integrate_fixed(augmented_rhs(&model), y0, &probe_grid, h)?;
    let f2 = integrator::integrate_fixed(augmented_rhs(&model), y0, &probe_grid, h / 2.0)?;
    let f4 = integrator::integrate_fixed(augmented_rhs(&model), y0, &probe_grid, h / 4.0)?;
    let d1 = sup_gap(&f1, &f2);
    let d2 = sup_gap(&f2, &f4);

    Ok(RichardsonReport {
        samples: t_grid.len(),
        max_step: h,
        adaptive_deviation,
        fixed_step_deviation: d1,
        fixed_step_deviation_refined: d2,
        observed_order: (d1 / d2).log2(),
        controller_max_step,
        needs_smaller_step,
        suggested_max_step: if needs_smaller_step {
            controller_max_step
        } else {
            h
        },
        adaptive_stats: stats,
    })
}
