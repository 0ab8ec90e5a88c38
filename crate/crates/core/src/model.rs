//! Physical parameters, the dressed frame of a driven qubit, and the
//! constants of the infinite-cavity reservoir kernel.
//!
//! All rates are measured in units of the reservoir coupling `gamma`
//! (times are reported as `gamma * t`). The overall coupling constant of the
//! pair is folded into `gamma`; only the relative coupling `r1` is free, with
//! `r2 = sqrt(1 - r1^2)`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bare qubit frequency used by every built-in scenario.
pub const DEFAULT_OMEGA0: f64 = 1.5e9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    /// Bare transition frequency.
    pub omega0: f64,
    /// Reservoir coupling rate; sets the unit.
    pub gamma: f64,
    /// Lorentzian spectral width.
    pub lambda: f64,
    /// Detuning between qubit and classical drive, `omega0 - omega_L`.
    pub delta: f64,
    /// Classical driving strength.
    pub omega_drive: f64,
    /// Velocity ratio `v / c`, shared by both qubits.
    pub beta: f64,
    /// Relative coupling of qubit 1.
    pub r1: f64,
    /// Initial-state mixing angle.
    pub eta: f64,
    /// Initial-state relative phase.
    pub phi: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            omega0: DEFAULT_OMEGA0,
            gamma: 1.0,
            lambda: 4.0,
            delta: 0.0,
            omega_drive: 0.0,
            beta: 0.0,
            r1: FRAC_1_SQRT_2,
            eta: FRAC_PI_2,
            phi: 0.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega0", self.omega0),
            ("gamma", self.gamma),
            ("lambda", self.lambda),
            ("delta", self.delta),
            ("omega_drive", self.omega_drive),
            ("beta", self.beta),
            ("r1", self.r1),
            ("eta", self.eta),
            ("phi", self.phi),
        ];
        for (name, value) in fields {
            if !value.is_finite() {
                return Err(Error::NonFinite(name));
            }
        }
        check("omega0", self.omega0, self.omega0 > 0.0, "omega0 > 0")?;
        check("gamma", self.gamma, self.gamma > 0.0, "gamma > 0")?;
        check("lambda", self.lambda, self.lambda > 0.0, "lambda > 0")?;
        check(
            "omega_drive",
            self.omega_drive,
            self.omega_drive >= 0.0,
            "omega_drive >= 0",
        )?;
        check(
            "beta",
            self.beta,
            (0.0..1.0).contains(&self.beta),
            "0 <= beta < 1",
        )?;
        check(
            "r1",
            self.r1,
            (0.0..=1.0).contains(&self.r1),
            "0 <= r1 <= 1",
        )?;
        check(
            "eta",
            self.eta,
            (0.0..=PI).contains(&self.eta),
            "0 <= eta <= pi",
        )?;
        check(
            "phi",
            self.phi,
            (0.0..2.0 * PI).contains(&self.phi),
            "0 <= phi < 2 pi",
        )?;
        Ok(())
    }

    /// Relative coupling of qubit 2.
    pub fn r2(&self) -> f64 {
        (1.0 - self.r1 * self.r1).max(0.0).sqrt()
    }

    /// Initial dressed-basis amplitudes `(cos(eta/2), sin(eta/2) e^{i phi})`.
    pub fn initial_amplitudes(&self) -> (Complex64, Complex64) {
        let half = 0.5 * self.eta;
        (
            Complex64::new(half.cos(), 0.0),
            Complex64::from_polar(half.sin(), self.phi),
        )
    }
}

fn check(name: &'static str, value: f64, ok: bool, constraint: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}

/// Dressed-state quantities of a single driven qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DressedFrame {
    pub omega_d: f64,
    pub theta: f64,
    /// Coupling suppression `cos^4(theta / 2)`.
    pub g_fac: f64,
}

/// Dressed frequency `sqrt(delta^2 + 4 Omega^2)` and mixing angle
/// `atan2(2 Omega, delta)`. Without driving the dressed basis is the bare
/// basis, so `theta = 0` whenever `omega_drive == 0`.
pub fn dressed_frame(params: &ModelParams) -> Result<DressedFrame> {
    for (name, value) in [("delta", params.delta), ("omega_drive", params.omega_drive)] {
        if !value.is_finite() {
            return Err(Error::NonFinite(name));
        }
    }
    let two_omega = 2.0 * params.omega_drive.abs();
    let omega_d = params.delta.hypot(two_omega);
    let theta = if two_omega == 0.0 {
        0.0
    } else {
        two_omega.atan2(params.delta)
    };
    let g_fac = (0.5 * theta).cos().powi(4);
    Ok(DressedFrame {
        omega_d,
        theta,
        g_fac,
    })
}

/// Constants of the infinite-cavity memory kernel
/// `F(s) = (gamma lambda / 8) (exp(V+ s) + exp(V- s))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    /// `lambda + i (delta - omega_D)`
    pub y: Complex64,
    /// `lambda + i omega0`
    pub mu: Complex64,
    /// `-y + mu beta`
    pub v_plus: Complex64,
    /// `-y - mu beta`
    pub v_minus: Complex64,
    pub y_plus: Complex64,
    pub y_minus: Complex64,
    /// `gamma lambda / 8`
    pub prefactor: f64,
}

pub fn kernel_params(params: &ModelParams, frame: &DressedFrame) -> KernelParams {
    let y = Complex64::new(params.lambda, params.delta - frame.omega_d);
    let mu = Complex64::new(params.lambda, params.omega0);
    let shift = mu * params.beta;
    let v_plus = -y + shift;
    let v_minus = -y - shift;
    KernelParams {
        y,
        mu,
        v_plus,
        v_minus,
        y_plus: v_plus / y,
        y_minus: v_minus / y,
        prefactor: params.gamma * params.lambda / 8.0,
    }
}

/// Validated parameters together with their derived frame and kernel.
#[derive(Debug, Clone, Copy)]
pub struct Model {
    pub params: ModelParams,
    pub frame: DressedFrame,
    pub kernel: KernelParams,
}

impl Model {
    pub fn new(params: ModelParams) -> Result<Self> {
        params.validate()?;
        let frame = dressed_frame(&params)?;
        let kernel = kernel_params(&params, &frame);
        Ok(Self {
            params,
            frame,
            kernel,
        })
    }

    /// Effective memory-kernel amplitude `g_fac * gamma * lambda / 8`.
    pub fn kernel_weight(&self) -> f64 {
        self.frame.g_fac * self.kernel.prefactor
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn with(f: impl FnOnce(&mut ModelParams)) -> ModelParams {
        let mut p = ModelParams::default();
        f(&mut p);
        p
    }

    #[test]
    fn resonant_drive() {
        let p = with(|p| p.omega_drive = 1.6);
        let fr = dressed_frame(&p).unwrap();
        assert!((fr.omega_d - 3.2).abs() < 1e-12);
        assert!((fr.theta - FRAC_PI_2).abs() < 1e-12);
        assert!((fr.g_fac - 0.25).abs() < 1e-12);
    }

    #[test]
    fn undriven_frame_is_bare() {
        let p = with(|p| p.delta = 2.0);
        let fr = dressed_frame(&p).unwrap();
        assert_eq!(fr.omega_d, 2.0);
        assert_eq!(fr.theta, 0.0);
        assert_eq!(fr.g_fac, 1.0);

        // atan2(0, 0) convention
        let fr = dressed_frame(&ModelParams::default()).unwrap();
        assert_eq!(fr.theta, 0.0);
        assert_eq!(fr.g_fac, 1.0);
    }

    #[test]
    fn three_four_five() {
        let p = with(|p| {
            p.delta = 3.0;
            p.omega_drive = 2.0;
        });
        let fr = dressed_frame(&p).unwrap();
        assert!((fr.omega_d - 5.0).abs() < 1e-12);
        assert!((fr.theta - (4.0f64 / 3.0).atan()).abs() < 1e-12);
        assert!((fr.theta - 0.92730).abs() < 1e-5);
    }

    #[test]
    fn non_finite_rejected() {
        let p = with(|p| p.delta = f64::NAN);
        assert!(matches!(dressed_frame(&p), Err(Error::NonFinite("delta"))));
        assert!(matches!(p.validate(), Err(Error::NonFinite("delta"))));
    }

    #[test]
    fn kernel_static_undriven() {
        let m = Model::new(ModelParams::default()).unwrap();
        let k = m.kernel;
        assert_eq!(k.y, Complex64::new(4.0, 0.0));
        assert_eq!(k.v_plus, Complex64::new(-4.0, 0.0));
        assert_eq!(k.v_minus, Complex64::new(-4.0, 0.0));
        assert_eq!(k.y_plus, Complex64::new(-1.0, 0.0));
        assert_eq!(k.y_minus, Complex64::new(-1.0, 0.0));
        assert_eq!(k.prefactor, 0.5);
    }

    #[test]
    fn kernel_driven() {
        let p = with(|p| p.omega_drive = 1.6);
        let k = Model::new(p).unwrap().kernel;
        assert!((k.y - Complex64::new(4.0, -3.2)).norm() < 1e-12);
    }

    #[test]
    fn kernel_moving() {
        let p = with(|p| {
            p.lambda = 0.1;
            p.omega_drive = 4.0;
            p.beta = 1e-9;
        });
        let k = Model::new(p).unwrap().kernel;
        let expected = -k.y + Complex64::new(0.1, 1.5e9) * 1e-9;
        assert!((k.v_plus - expected).norm() < 1e-12);
        assert!((k.v_plus - k.v_minus - Complex64::new(2e-10, 3.0)).norm() < 1e-9);
    }

    #[test]
    fn validation_messages() {
        let err = with(|p| p.beta = 1.5).validate().unwrap_err();
        assert!(err.to_string().contains("0 <= beta < 1"), "{err}");
        assert!(with(|p| p.lambda = 0.0).validate().is_err());
        assert!(with(|p| p.r1 = 1.01).validate().is_err());
        assert!(with(|p| p.phi = 2.0 * PI).validate().is_err());
        assert!(with(|p| p.eta = -0.1).validate().is_err());
        assert!(with(|p| p.omega_drive = -1.0).validate().is_err());
    }

    fn arb_params() -> impl Strategy<Value = ModelParams> {
        (
            0.01f64..10.0,
            -5.0f64..5.0,
            0.0f64..10.0,
            0.0f64..1e-8,
            0.0f64..=1.0,
            1e6f64..1e10,
        )
            .prop_map(
                |(lambda, delta, omega_drive, beta, r1, omega0)| ModelParams {
                    lambda,
                    delta,
                    omega_drive,
                    beta,
                    r1,
                    omega0,
                    ..ModelParams::default()
                },
            )
    }

    proptest! {
        #[test]
        fn exponent_ratios_sum_to_minus_two(p in arb_params()) {
            let m = Model::new(p).unwrap();
            let k = m.kernel;
            prop_assert!((k.y_plus + k.y_minus + 2.0).norm() < 1e-12);
            prop_assert!(k.y.re > 0.0);
            prop_assert_eq!(k.y.re, p.lambda);
            let lhs = k.y_plus * k.y_minus;
            let rhs = (k.y * k.y - k.mu * k.mu * p.beta * p.beta) / (k.y * k.y);
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + rhs.norm()));
            prop_assert!((p.r1 * p.r1 + p.r2() * p.r2() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn frame_invariants(delta in -5.0f64..5.0, omega in 0.0f64..10.0) {
            let p = ModelParams { delta, omega_drive: omega, ..ModelParams::default() };
            let fr = dressed_frame(&p).unwrap();
            prop_assert!((fr.omega_d - (delta * delta + 4.0 * omega * omega).sqrt()).abs() < 1e-12);
            prop_assert!((0.0..PI).contains(&fr.theta));
            prop_assert!(fr.g_fac > 0.0 && fr.g_fac <= 1.0);
        }

        #[test]
        fn suppression_decreases_with_drive(delta in 0.01f64..5.0) {
            let mut last = f64::INFINITY;
            for i in 0..50 {
                let p = ModelParams { delta, omega_drive: 0.2 * i as f64, ..ModelParams::default() };
                let g = dressed_frame(&p).unwrap().g_fac;
                prop_assert!(g < last);
                last = g;
            }
        }

        #[test]
        fn weak_drive_limit(delta in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0]) {
            let p = ModelParams { delta, omega_drive: 1e-12, ..ModelParams::default() };
            let fr = dressed_frame(&p).unwrap();
            if delta > 0.0 {
                prop_assert!(fr.theta < 1e-10);
                prop_assert!((fr.g_fac - 1.0).abs() < 1e-12);
            }
            let p = ModelParams { omega_drive: 0.0, ..p };
            let fr = dressed_frame(&p).unwrap();
            prop_assert_eq!(fr.theta, 0.0);
            prop_assert_eq!(fr.g_fac, 1.0);
        }
    }
}
