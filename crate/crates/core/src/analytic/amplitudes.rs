use num_complex::Complex64;

use super::epsilon::{default_max_step, epsilon_series, EpsilonMethod};
use crate::error::Result;
use crate::integrator::Tolerances;
use crate::model::{Model, ModelParams};
use crate::trajectory::{Source, Trajectory};

/// `c1 = p1 + q1 eps`, `c2 = p2 + q2 eps`.
///
/// `(p1, p2)` is the part of the initial state orthogonal to the collective
/// coupling `(r1, r2)`; it never decays.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeCoefficients {
    pub p1: Complex64,
    pub q1: Complex64,
    pub p2: Complex64,
    pub q2: Complex64,
}

impl AmplitudeCoefficients {
    pub fn at(&self, eps: Complex64) -> (Complex64, Complex64) {
        (self.p1 + self.q1 * eps, self.p2 + self.q2 * eps)
    }
}

pub fn amplitude_coefficients(params: &ModelParams) -> AmplitudeCoefficients {
    let r1 = params.r1;
    let r2 = params.r2();
    let (a, b) = params.initial_amplitudes();
    AmplitudeCoefficients {
        p1: r2 * r2 * a - r1 * r2 * b,
        q1: r1 * r1 * a + r1 * r2 * b,
        p2: r1 * r1 * b - r1 * r2 * a,
        q2: r2 * r2 * b + r1 * r2 * a,
    }
}

/// Amplitudes on `t_grid`. Falls back to integrating `eps` when the
/// characteristic roots are too close for the residue sum. `tol.max_step`
/// is tightened to the kernel's default cap if larger.
pub fn amplitudes(t_grid: &[f64], params: &ModelParams, tol: &Tolerances) -> Result<Trajectory> {
    let model = Model::new(*params)?;
    let tol = Tolerances {
        max_step: tol.max_step.min(default_max_step(&model)),
        ..*tol
    };
    let (eps, method) = epsilon_series(&model, t_grid, &tol)?;
    let coeffs = amplitude_coefficients(params);
    let (c1, c2) = eps.iter().map(|&e| coeffs.at(e)).unzip();
    Ok(Trajectory {
        times: t_grid.to_vec(),
        eps: Some(eps),
        c1,
        c2,
        source: match method {
            EpsilonMethod::Residues => Source::Residues,
            EpsilonMethod::Ode => Source::EpsilonOde,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::concurrence_x;
    use crate::trajectory::uniform_grid;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

    #[test]
    fn initial_condition() {
        let p = ModelParams::default();
        let traj = amplitudes(&[0.0], &p, &Tolerances::default()).unwrap();
        assert!((traj.c1[0] - FRAC_1_SQRT_2).norm() < 1e-12);
        assert!((traj.c2[0] - FRAC_1_SQRT_2).norm() < 1e-12);
    }

    #[test]
    fn decoupled_qubit_is_frozen() {
        let p = ModelParams {
            r1: 0.0,
            eta: 1.1,
            lambda: 0.04,
            ..ModelParams::default()
        };
        let traj = amplitudes(&uniform_grid(0.0, 30.0, 61), &p, &Tolerances::default()).unwrap();
        for c in &traj.c1 {
            assert!((c - (0.55f64).cos()).norm() < 1e-15);
        }
    }

    #[test]
    fn stationary_limit() {
        let p = ModelParams {
            r1: 0.5,
            ..ModelParams::default()
        };
        let k = amplitude_coefficients(&p);
        let s3 = 3f64.sqrt();
        let d = 4.0 * 2f64.sqrt();
        assert!((k.p1 - (3.0 - s3) / d).norm() < 1e-15);
        assert!((k.p2 - (1.0 - s3) / d).norm() < 1e-15);
        let c = concurrence_x(k.p1, k.p2);
        assert!((c - (4.0 * s3 - 6.0) / 16.0).abs() < 1e-15);
        assert!((c - 0.05802).abs() < 1e-5);
    }

    #[test]
    fn equal_coupling_cancels_stationary_part() {
        let k = amplitude_coefficients(&ModelParams::default());
        assert!(k.p1.norm() < 1e-16 && k.p2.norm() < 1e-16);
    }

    proptest! {
        #[test]
        fn population_bounded(
            lambda in 0.02f64..6.0,
            omega in 0.0f64..5.0,
            delta in -2.0f64..2.0,
            beta in prop_oneof![Just(0.0), 0.0f64..4e-9],
            r1 in 0.0f64..=1.0,
            eta in 0.0f64..=PI,
            phi in 0.0f64..std::f64::consts::TAU,
        ) {
            let p = ModelParams { lambda, omega_drive: omega, delta, beta, r1, eta, phi, ..ModelParams::default() };
            let traj = amplitudes(&uniform_grid(0.0, 40.0, 161), &p, &Tolerances::default()).unwrap();
            for n in traj.qubit_population() {
                prop_assert!(n <= 1.0 + 1e-9, "population {}", n);
            }
            let eps0 = traj.eps.as_ref().unwrap()[0];
            prop_assert!((eps0 - 1.0).norm() < 1e-9);
        }

        #[test]
        fn coupling_swap_symmetry(r1 in 0.0f64..=1.0, eta in 0.0f64..=PI, lambda in 0.05f64..5.0) {
            let grid = uniform_grid(0.0, 20.0, 41);
            let p = ModelParams { r1, eta, lambda, ..ModelParams::default() };
            let q = ModelParams { r1: p.r2(), eta: PI - eta, ..p };
            let a = amplitudes(&grid, &p, &Tolerances::default()).unwrap();
            let b = amplitudes(&grid, &q, &Tolerances::default()).unwrap();
            for i in 0..grid.len() {
                prop_assert!((a.c1[i] - b.c2[i]).norm() < 1e-12);
                prop_assert!((a.c2[i] - b.c1[i]).norm() < 1e-12);
            }
        }

        #[test]
        fn decoupled_concurrence_tracks_eps(
            lambda in 0.02f64..6.0,
            omega in 0.0f64..5.0,
            beta in prop_oneof![Just(0.0), 0.0f64..4e-9],
        ) {
            let p = ModelParams { r1: 0.0, eta: FRAC_PI_2, lambda, omega_drive: omega, beta, ..ModelParams::default() };
            let traj = amplitudes(&uniform_grid(0.0, 30.0, 61), &p, &Tolerances::default()).unwrap();
            let eps = traj.eps.as_ref().unwrap();
            for (c, e) in traj.concurrence().iter().zip(eps) {
                prop_assert!((c - e.norm()).abs() < 1e-12);
            }
        }
    }
}
