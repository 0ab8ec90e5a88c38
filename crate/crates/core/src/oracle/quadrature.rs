//! Product-trapezoid discretization of the memory-kernel equations, using
//! the kernel directly and storing the full history. Second order in the
//! step; slow (quadratic in the number of steps) and only meant for
//! cross-checking the augmented-state integration on short windows.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{Model, ModelParams};
use crate::trajectory::{Source, Trajectory};

/// Solution at `t = k * step`, `k = 0..=n`, with `n = round(t_end / step)`.
pub fn volterra_quadrature(params: &ModelParams, t_end: f64, step: f64) -> Result<Trajectory> {
    if !(step > 0.0 && t_end >= 0.0) {
        return Err(Error::TimeWindow(format!(
            "quadrature needs step > 0 and t_end >= 0 (step {step}, t_end {t_end})"
        )));
    }
    let model = Model::new(*params)?;
    let n = (t_end / step).round() as usize;
    let h = step;
    let weight = model.frame.g_fac * model.kernel.prefactor;
    let (vp, vm) = (model.kernel.v_plus, model.kernel.v_minus);
    let (r1, r2) = (params.r1, params.r2());

    // F(k h) / (gamma lambda / 8), scaled by g_fac * gamma * lambda / 8
    let kernel: Vec<Complex64> = (0..=n)
        .map(|k| {
            let s = k as f64 * h;
            weight * ((vp * s).exp() + (vm * s).exp())
        })
        .collect();

    let (a, b) = params.initial_amplitudes();
    let mut w = Vec::with_capacity(n + 1); // collective amplitude r1 c1 + r2 c2
    let mut c1 = Vec::with_capacity(n + 1);
    let mut c2 = Vec::with_capacity(n + 1);
    c1.push(a);
    c2.push(b);
    w.push(r1 * a + r2 * b);

    // d/dt c_j = -r_j * m(t), m(t) = ∫ K(t - s) w(s) ds
    let mut m_prev = Complex64::new(0.0, 0.0);
    for step_idx in 0..n {
        let next = step_idx + 1;
        // trapezoid for m(t_next) without the unknown endpoint
        let mut partial = 0.5 * kernel[next] * w[0];
        for k in 1..next {
            partial += kernel[next - k] * w[k];
        }
        partial *= h;
        let diag = 0.5 * h * kernel[0];
        // c_next = c + h/2 (-r m_prev) + h/2 (-r (partial + diag w_next))
        // contract with r: w_next (1 + h/2 diag) = w - h/2 (m_prev + partial)
        let w_next = (w[step_idx] - 0.5 * h * (m_prev + partial)) / (1.0 + 0.5 * h * diag);
        let m_next = partial + diag * w_next;
        let incr = -0.5 * h * (m_prev + m_next);
        c1.push(c1[step_idx] + r1 * incr);
        c2.push(c2[step_idx] + r2 * incr);
        w.push(w_next);
        m_prev = m_next;
    }
    let times = (0..=n).map(|k| k as f64 * h).collect();
    Ok(Trajectory {
        times,
        eps: None,
        c1,
        c2,
        source: Source::Volterra,
    })
}

/// Richardson extrapolation `(4 x(h/2) - x(h)) / 3` of the quadrature,
/// sampled on the coarse grid.
pub fn volterra_quadrature_extrapolated(
    params: &ModelParams,
    t_end: f64,
    step: f64,
) -> Result<Trajectory> {
    let coarse = volterra_quadrature(params, t_end, step)?;
    let fine = volterra_quadrature(params, t_end, step / 2.0)?;
    let pick = |c: &[Complex64], f: &[Complex64]| -> Vec<Complex64> {
        c.iter()
            .enumerate()
            .map(|(k, x)| (4.0 * f[2 * k] - x) / 3.0)
            .collect()
    };
    Ok(Trajectory {
        c1: pick(&coarse.c1, &fine.c1),
        c2: pick(&coarse.c2, &fine.c2),
        ..coarse
    })
}
