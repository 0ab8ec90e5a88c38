//! The characteristic cubic of the Laplace-domain collective amplitude and a
//! closed-form complex root finder.

use std::cmp::Ordering;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Model;

/// Monic cubic `q^3 + a2 q^2 + a1 q + a0` with (once solved) its roots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicSolution {
    /// `[1, a2, a1, a0]`
    pub coeffs: [Complex64; 4],
    pub roots: Option<[Complex64; 3]>,
    /// Smallest pairwise root distance relative to `max(1, max |q|)`.
    pub min_separation: f64,
}

impl CubicSolution {
    pub fn monic(a2: Complex64, a1: Complex64, a0: Complex64) -> Self {
        Self {
            coeffs: [Complex64::new(1.0, 0.0), a2, a1, a0],
            roots: None,
            min_separation: f64::NAN,
        }
    }

    pub fn eval(&self, q: Complex64) -> Complex64 {
        let [a3, a2, a1, a0] = self.coeffs;
        ((a3 * q + a2) * q + a1) * q + a0
    }

    fn derivative(&self, q: Complex64) -> Complex64 {
        let [a3, a2, a1, _] = self.coeffs;
        (3.0 * a3 * q + 2.0 * a2) * q + a1
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Coefficients `(1, 2, y+ y- + K, K)` with
/// `K = gamma lambda cos^4(theta/2) / (4 y^2)`.
pub fn characteristic_cubic(model: &Model) -> CubicSolution {
    let k = model.kernel;
    let coupling = model.params.gamma * model.params.lambda * model.frame.g_fac / (4.0 * k.y * k.y);
    CubicSolution::monic(
        -(k.y_plus + k.y_minus),
        k.y_plus * k.y_minus + coupling,
        coupling,
    )
}

/// Cardano's formula on the depressed cubic, one Newton polish per root,
/// roots sorted by descending real part (ties: descending imaginary part).
pub fn solve_cubic(cubic: &CubicSolution) -> Result<CubicSolution> {
    let [lead, b2, b1, b0] = cubic.coeffs;
    let a2 = b2 / lead;
    let a1 = b1 / lead;
    let a0 = b0 / lead;
    let normalized = CubicSolution::monic(a2, a1, a0);

    // q = x - a2/3  =>  x^3 + p x + r = 0
    let shift = a2 / 3.0;
    let p = a1 - a2 * shift;
    let r = a0 - a1 * shift + 2.0 * shift * shift * shift;

    let disc = (r * 0.5).powi(2) + (p / 3.0).powi(3);
    let s = disc.sqrt();
    let plus = -r * 0.5 + s;
    let minus = -r * 0.5 - s;
    let w = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    };

    let mut roots = if w.norm() == 0.0 {
        [-shift; 3]
    } else {
        let u = w.powf(1.0 / 3.0);
        let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let mut rot = Complex64::new(1.0, 0.0);
        for root in &mut out {
            let uk = u * rot;
            *root = uk - p / (3.0 * uk) - shift;
            rot *= omega;
        }
        out
    };

    for q in &mut roots {
        let d = normalized.derivative(*q);
        if d.norm() > 0.0 {
            let step = normalized.eval(*q) / d;
            let polished = *q - step;
            if normalized.eval(polished).norm() <= normalized.eval(*q).norm() {
                *q = polished;
            }
        }
    }

    roots.sort_by(|x, y| match y.re.total_cmp(&x.re) {
        Ordering::Equal => y.im.total_cmp(&x.im),
        o => o,
    });

    let bound = 1e-8 * normalized.max_coeff();
    for q in &roots {
        let residual = normalized.eval(*q).norm();
        if residual.is_nan() || residual > bound {
            return Err(Error::IllConditioned { residual, bound });
        }
    }

    let scale = roots.iter().map(|q| q.norm()).fold(1.0, f64::max);
    let min_separation = [(0, 1), (0, 2), (1, 2)]
        .iter()
        .map(|&(i, j)| (roots[i] - roots[j]).norm())
        .fold(f64::INFINITY, f64::min)
        / scale;

    Ok(CubicSolution {
        coeffs: normalized.coeffs,
        roots: Some(roots),
        min_separation,
    })
}
