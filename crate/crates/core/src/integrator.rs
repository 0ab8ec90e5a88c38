//! Dormand-Prince 5(4) stepping for small complex-valued ODE systems.
//!
//! The integrator lands exactly on every requested output time, so sampled
//! trajectories carry no interpolation error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: 0.1,
        }
    }
}

const MAX_STEPS: usize = 50_000_000;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus embedded 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State<const N: usize> = [Complex64; N];

fn combine<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (coef, k) in terms {
        let c = h * coef;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += ki * c;
        }
    }
    out
}

struct Step<const N: usize> {
    y: State<N>,
    err: State<N>,
    k_last: State<N>,
}

fn dopri_step<const N: usize, F>(f: &F, t: f64, y: &State<N>, k1: &State<N>, h: f64) -> Step<N>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let k2 = f(t + C2 * h, &combine(y, h, &[(A21, k1)]));
    let k3 = f(t + C3 * h, &combine(y, h, &[(A31, k1), (A32, &k2)]));
    let k4 = f(
        t + C4 * h,
        &combine(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]),
    );
    let k5 = f(
        t + C5 * h,
        &combine(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
    );
    let k6 = f(
        t + h,
        &combine(
            y,
            h,
            &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ),
    );
    let y_new = combine(
        y,
        h,
        &[(B1, k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
    );
    let k7 = f(t + h, &y_new);
    let zero = [Complex64::new(0.0, 0.0); N];
    let err = combine(
        &zero,
        h,
        &[
            (E1, k1),
            (E3, &k3),
            (E4, &k4),
            (E5, &k5),
            (E6, &k6),
            (E7, &k7),
        ],
    );
    Step {
        y: y_new,
        err,
        k_last: k7,
    }
}

fn error_norm<const N: usize>(
    y0: &State<N>,
    y1: &State<N>,
    err: &State<N>,
    tol: &Tolerances,
) -> f64 {
    let mut acc = 0.0;
    for i in 0..N {
        let scale = tol.abs_tol + tol.rel_tol * y0[i].norm().max(y1[i].norm());
        acc += (err[i].norm() / scale).powi(2);
    }
    (acc / N as f64).sqrt()
}

/// Statistics of one adaptive integration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub min_step: f64,
    pub max_step: f64,
}

/// Integrates `y' = f(t, y)` from `times[0]` and returns the state at every
/// entry of `times`, which must be non-decreasing.
pub fn integrate<const N: usize, F>(
    f: F,
    y0: State<N>,
    times: &[f64],
    tol: &Tolerances,
) -> Result<(Vec<State<N>>, StepStats)>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    let mut out = Vec::with_capacity(times.len());
    let mut stats = StepStats {
        min_step: f64::INFINITY,
        ..StepStats::default()
    };
    let Some(&t0) = times.first() else {
        return Ok((out, stats));
    };
    if !(tol.rel_tol > 0.0 && tol.abs_tol > 0.0 && tol.max_step > 0.0) {
        return Err(Error::Config(format!(
            "invalid integrator tolerances {tol:?}"
        )));
    }
    out.push(y0);

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&y, &k1, tol);

    for &target in &times[1..] {
        if target < t {
            return Err(Error::TimeWindow(format!(
                "output times must be non-decreasing ({target} after {t})"
            )));
        }
        while t < target {
            if stats.accepted + stats.rejected >= MAX_STEPS {
                return Err(Error::TooManySteps(MAX_STEPS));
            }
            let remaining = target - t;
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            if step <= f64::EPSILON * t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { t, h: step });
            }
            let trial = dopri_step(&f, t, &y, &k1, step);
            let err = error_norm(&y, &trial.y, &trial.err, tol);
            if err <= 1.0 {
                t = if last { target } else { t + step };
                y = trial.y;
                k1 = trial.k_last;
                stats.accepted += 1;
                stats.min_step = stats.min_step.min(step);
                stats.max_step = stats.max_step.max(step);
                let factor = if err == 0.0 {
                    MAX_FACTOR
                } else {
                    (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                };
                // A step shortened to hit an output time says nothing about
                // the admissible step size.
                if !last || step >= h {
                    h = (step * factor).min(tol.max_step);
                }
            } else {
                stats.rejected += 1;
                h = step * (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, 1.0);
                if h <= f64::EPSILON * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t, h });
                }
            }
        }
        out.push(y);
    }
    if stats.accepted == 0 {
        stats.min_step = 0.0;
    }
    Ok((out, stats))
}

/// Classical fixed-step fifth-order propagation (the Dormand-Prince
/// solution without error control), landing on every output time.
pub fn integrate_fixed<const N: usize, F>(
    f: F,
    y0: State<N>,
    times: &[f64],
    step: f64,
) -> Result<Vec<State<N>>>
where
    F: Fn(f64, &State<N>) -> State<N>,
{
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Config(format!(
            "fixed step must be positive, got {step}"
        )));
    }
    let mut out = Vec::with_capacity(times.len());
    let Some(&t0) = times.first() else {
        return Ok(out);
    };
    out.push(y0);
    let mut t = t0;
    let mut y = y0;
    for &target in &times[1..] {
        let span = target - t;
        if span < 0.0 {
            return Err(Error::TimeWindow(format!(
                "output times must be non-decreasing ({target} after {t})"
            )));
        }
        let n = (span / step).ceil().max(if span > 0.0 { 1.0 } else { 0.0 }) as usize;
        if n > 0 {
            let h = span / n as f64;
            for i in 0..n {
                let ti = t + i as f64 * h;
                let k1 = f(ti, &y);
                y = dopri_step(&f, ti, &y, &k1, h).y;
            }
        }
        t = target;
        out.push(y);
    }
    Ok(out)
}

fn initial_step<const N: usize>(y: &State<N>, dy: &State<N>, tol: &Tolerances) -> f64 {
    let mut d0: f64 = 0.0;
    let mut d1: f64 = 0.0;
    for i in 0..N {
        let scale = tol.abs_tol + tol.rel_tol * y[i].norm();
        d0 = d0.max(y[i].norm() / scale);
        d1 = d1.max(dy[i].norm() / scale);
    }
    let h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h.min(tol.max_step)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_exponential() {
        let rate = c(-0.3, 2.0);
        let times: Vec<f64> = (0..=40).map(|i| i as f64 * 0.25).collect();
        let (ys, stats) = integrate(
            |_, y: &[Complex64; 1]| [rate * y[0]],
            [c(1.0, 0.0)],
            &times,
            &Tolerances::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            let exact = (rate * t).exp();
            assert!((y[0] - exact).norm() < 1e-8, "t={t}");
        }
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_pair() {
        // x'' = -x as a first-order pair
        let times = [0.0, 1.0, 2.0, 3.0];
        let (ys, _) = integrate(
            |_, y: &[Complex64; 2]| [y[1], -y[0]],
            [c(1.0, 0.0), c(0.0, 0.0)],
            &times,
            &Tolerances::default(),
        )
        .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0].re - t.cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_and_single_grid() {
        let f = |_: f64, y: &[Complex64; 1]| [-y[0]];
        let (ys, _) = integrate(f, [c(1.0, 0.0)], &[], &Tolerances::default()).unwrap();
        assert!(ys.is_empty());
        let (ys, _) = integrate(f, [c(1.0, 0.0)], &[0.0], &Tolerances::default()).unwrap();
        assert_eq!(ys, vec![[c(1.0, 0.0)]]);
    }

    #[test]
    fn decreasing_grid_rejected() {
        let f = |_: f64, y: &[Complex64; 1]| [-y[0]];
        let res = integrate(f, [c(1.0, 0.0)], &[0.0, 1.0, 0.5], &Tolerances::default());
        assert!(matches!(res, Err(Error::TimeWindow(_))));
    }

    #[test]
    fn fixed_step_converges_at_fifth_order() {
        let rate = c(-1.0, 3.0);
        let f = move |_: f64, y: &[Complex64; 1]| [rate * y[0]];
        let times = [0.0, 2.0];
        let exact = (rate * 2.0).exp();
        let e1 = (integrate_fixed(f, [c(1.0, 0.0)], &times, 0.1).unwrap()[1][0] - exact).norm();
        let e2 = (integrate_fixed(f, [c(1.0, 0.0)], &times, 0.05).unwrap()[1][0] - exact).norm();
        let order = (e1 / e2).log2();
        assert!((order - 5.0).abs() < 0.5, "observed order {order}");
    }
}
