#![allow(dead_code)]

use std::f64::consts::PI;

use entdyn::ModelParams;
use nalgebra::{Matrix3, Schur};
use num_complex::Complex64;
use rand::Rng;

/// Roots of the monic cubic `[1, a2, a1, a0]` as eigenvalues of its
/// companion matrix.
pub fn companion_roots(coeffs: &[Complex64; 4]) -> [Complex64; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let m = Matrix3::new(
        -coeffs[1], -coeffs[2], -coeffs[3], //
        one, z, z, //
        z, one, z,
    );
    let ev = Schur::new(m)
        .eigenvalues()
        .expect("complex Schur form is triangular");
    [ev[0], ev[1], ev[2]]
}

/// Largest distance from each of `a` to its nearest partner in `b`, with a
/// one-to-one matching, relative to `max(1, |root|)`.
pub fn root_mismatch(a: &[Complex64; 3], b: &[Complex64; 3]) -> f64 {
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    perms
        .iter()
        .map(|p| {
            (0..3)
                .map(|i| (a[i] - b[p[i]]).norm() / a[i].norm().max(1.0))
                .fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min)
}

/// A valid parameter set spanning weak to strong coupling, detuned and
/// driven, with moving qubits.
pub fn random_params<R: Rng>(rng: &mut R) -> ModelParams {
    ModelParams {
        omega0: 1.5e9,
        gamma: rng.gen_range(0.5..2.0),
        lambda: 10f64.powf(rng.gen_range(-2.0..1.0)),
        delta: rng.gen_range(-3.0..3.0),
        omega_drive: rng.gen_range(0.0..5.0),
        beta: rng.gen_range(0.0..5e-9),
        r1: rng.gen_range(0.0..=1.0),
        eta: rng.gen_range(0.0..=PI),
        phi: rng.gen_range(0.0..2.0 * PI),
    }
}

/// Sup-norm distance between two equally sampled curves.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Largest rise of the curve above any earlier minimum.
pub fn max_revival(c: &[f64]) -> f64 {
    let mut best: f64 = 0.0;
    let mut running_min = f64::INFINITY;
    for &x in c {
        running_min = running_min.min(x);
        best = best.max(x - running_min);
    }
    best
}
