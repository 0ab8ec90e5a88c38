//! The collective decay amplitude `eps(t)`.
//!
//! `eps` is the inverse Laplace transform of
//! `(s - V+)(s - V-) / (s (s - V+)(s - V-) + 2 W (s + y))` with
//! `W = g_fac * gamma * lambda / 8`. Substituting `s = q y` turns the
//! denominator into `y^3` times the characteristic cubic, so
//! `eps(t) = sum_i (q_i - y+)(q_i - y-) / prod_{j != i}(q_i - q_j) * exp(q_i y t)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cubic::{characteristic_cubic, solve_cubic, CubicSolution};
use crate::error::{Error, Result};
use crate::integrator::{self, Tolerances};
use crate::model::{KernelParams, Model};

/// Relative root separation below which residues are not trusted.
pub const DEGENERACY_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsilonMethod {
    Residues,
    Ode,
}

fn ensure_solved(cubic: &CubicSolution) -> Result<CubicSolution> {
    match cubic.roots {
        Some(_) => Ok(*cubic),
        None => solve_cubic(cubic),
    }
}

/// Residues of the partial-fraction expansion, in root order.
pub fn residues(cubic: &CubicSolution, kernel: &KernelParams) -> Result<[Complex64; 3]> {
    let cubic = ensure_solved(cubic)?;
    if cubic.min_separation.is_nan() || cubic.min_separation < DEGENERACY_THRESHOLD {
        return Err(Error::DegenerateRoots {
            min_separation: cubic.min_separation,
        });
    }
    let roots = cubic.roots.expect("solved cubic has roots");
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (i, &q) in roots.iter().enumerate() {
        let denom: Complex64 = roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &other)| q - other)
            .product();
        out[i] = (q - kernel.y_plus) * (q - kernel.y_minus) / denom;
    }
    Ok(out)
}

/// `eps(t)` from the residue sum; exponents are `q_i * y * t`.
pub fn epsilon_residues(t: f64, cubic: &CubicSolution, kernel: &KernelParams) -> Result<Complex64> {
    let cubic = ensure_solved(cubic)?;
    let res = residues(&cubic, kernel)?;
    let roots = cubic.roots.expect("solved cubic has roots");
    Ok(sum_modes(t, &res, &roots, kernel.y))
}

fn sum_modes(t: f64, res: &[Complex64; 3], roots: &[Complex64; 3], y: Complex64) -> Complex64 {
    res.iter()
        .zip(roots)
        .map(|(r, q)| r * (q * y * t).exp())
        .sum()
}

/// Integrates the memoryless equivalent of the collective amplitude equation,
/// `eps' = -W (z+ + z-)`, `z±' = V± z± + eps`, with `eps(0) = 1`, `z±(0) = 0`.
pub fn epsilon_ode(
    t_grid: &[f64],
    kernel: &KernelParams,
    g_fac: f64,
    tol: &Tolerances,
) -> Result<Vec<Complex64>> {
    if let Some(&t0) = t_grid.first() {
        if t0 != 0.0 {
            return Err(Error::TimeWindow(format!("grid must start at 0, got {t0}")));
        }
    }
    let weight = kernel.prefactor * g_fac;
    let (vp, vm) = (kernel.v_plus, kernel.v_minus);
    let rhs = move |_: f64, s: &[Complex64; 3]| {
        [-weight * (s[1] + s[2]), vp * s[1] + s[0], vm * s[2] + s[0]]
    };
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (states, _) = integrator::integrate(rhs, [one, zero, zero], t_grid, tol)?;
    Ok(states.into_iter().map(|s| s[0]).collect())
}

/// Default step cap for a kernel: resolves the velocity-induced splitting
/// `omega0 * beta` of the two kernel exponents.
pub fn default_max_step(model: &Model) -> f64 {
    0.1 / (1.0 + (model.params.omega0 * model.params.beta).abs())
}

/// `eps` on a grid, by residues when the roots are well separated and by
/// integration otherwise.
pub fn epsilon_series(
    model: &Model,
    t_grid: &[f64],
    tol: &Tolerances,
) -> Result<(Vec<Complex64>, EpsilonMethod)> {
    let cubic = solve_cubic(&characteristic_cubic(model));
    match cubic.and_then(|c| residues(&c, &model.kernel).map(|r| (c, r))) {
        Ok((cubic, res)) => {
            let roots = cubic.roots.expect("solved");
            let eps = t_grid
                .iter()
                .map(|&t| sum_modes(t, &res, &roots, model.kernel.y))
                .collect();
            Ok((eps, EpsilonMethod::Residues))
        }
        Err(Error::DegenerateRoots { .. }) | Err(Error::IllConditioned { .. }) => {
            let eps = epsilon_ode(t_grid, &model.kernel, model.frame.g_fac, tol)?;
            Ok((eps, EpsilonMethod::Ode))
        }
        Err(e) => Err(e),
    }
}
