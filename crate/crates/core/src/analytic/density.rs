//! Two-qubit reduced density matrices and Wootters concurrence.
//!
//! Basis order is `{|EE>, |EG>, |GE>, |GG>}` with `|E>` the first
//! single-qubit basis vector.

use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

const PHYSICAL_SLACK: f64 = 1e-9;
const EIGEN_FLOOR: f64 = 1e-13;

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `sigma_y (x) sigma_y`; real in this basis.
pub const SIGMA_YY: [[f64; 4]; 4] = [
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
];

fn sigma_yy() -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| re(SIGMA_YY[i][j]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensitySnapshot {
    pub rho: Matrix4<Complex64>,
    pub concurrence: f64,
}

impl DensitySnapshot {
    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn hermiticity_error(&self) -> f64 {
        (self.rho - self.rho.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: [f64; 4] = hermitian_part(&self.rho)
            .symmetric_eigenvalues()
            .as_slice()
            .try_into()
            .expect("4 eigenvalues");
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Hermiticity to 1e-12, unit trace to 1e-12, eigenvalues >= -1e-9.
    pub fn check_physical(&self) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > 1e-12 {
            return Err(Error::Numeric(format!(
                "density matrix not Hermitian ({herm:e})"
            )));
        }
        let tr = self.trace();
        if (tr - 1.0).norm() > 1e-12 {
            return Err(Error::Numeric(format!("trace {tr} != 1")));
        }
        let min = self.eigenvalues()[3];
        if min < -PHYSICAL_SLACK {
            return Err(Error::Numeric(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

fn hermitian_part(m: &Matrix4<Complex64>) -> Matrix4<Complex64> {
    (m + m.adjoint()) * re(0.5)
}

/// The single-excitation X state
/// `|c1|^2 |EG><EG| + |c2|^2 |GE><GE| + c1 c2* |EG><GE| + h.c. + rest |GG><GG|`.
pub fn density_matrix(c1: Complex64, c2: Complex64) -> Result<DensitySnapshot> {
    let pop = c1.norm_sqr() + c2.norm_sqr();
    if !pop.is_finite() || pop > 1.0 + PHYSICAL_SLACK {
        return Err(Error::NonPhysical(pop));
    }
    let ground = (1.0 - pop).max(0.0);
    let mut rho = Matrix4::zeros();
    rho[(1, 1)] = re(c1.norm_sqr());
    rho[(1, 2)] = c1 * c2.conj();
    rho[(2, 1)] = c1.conj() * c2;
    rho[(2, 2)] = re(c2.norm_sqr());
    rho[(3, 3)] = re(ground);
    Ok(DensitySnapshot {
        rho,
        concurrence: concurrence_x(c1, c2),
    })
}

/// Concurrence of the single-excitation X state, `2 |c1 c2*|`.
pub fn concurrence_x(c1: Complex64, c2: Complex64) -> f64 {
    2.0 * (c1 * c2.conj()).norm()
}

/// Eigenvalues `l1 >= l2 >= l3 >= l4` of `rho (sy sy) rho* (sy sy)`.
///
/// Computed as the squared singular values of `tau = W^T (sy sy) W` where
/// `rho = W W^dagger`; `tau^dagger tau` is similar to the spin-flip product,
/// and the singular values are what the concurrence needs.
pub fn spin_flip_spectrum(rho: &Matrix4<Complex64>) -> Result<[f64; 4]> {
    let s = spin_flip_singular_values(rho)?;
    Ok(s.map(|x| x * x))
}

fn spin_flip_singular_values(rho: &Matrix4<Complex64>) -> Result<[f64; 4]> {
    if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numeric(
            "density matrix has non-finite entries".into(),
        ));
    }
    let eig = SymmetricEigen::try_new(hermitian_part(rho), 1e-15, 10_000)
        .ok_or_else(|| Error::Numeric("Hermitian eigensolver did not converge".into()))?;
    let mut w = eig.eigenvectors;
    // Roundoff-level eigenvalues would enter the result through their square
    // roots; treat them as exact zeros.
    let floor = EIGEN_FLOOR * eig.eigenvalues.max().max(f64::MIN_POSITIVE);
    for (k, &lam) in eig.eigenvalues.iter().enumerate() {
        let scale = if lam > floor { lam.sqrt() } else { 0.0 };
        w.column_mut(k).scale_mut(scale);
    }
    let tau = w.transpose() * sigma_yy() * w;
    let svd = tau
        .try_svd(false, false, 1e-15, 10_000)
        .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
    let mut sv: [f64; 4] = svd
        .singular_values
        .as_slice()
        .try_into()
        .expect("4 singular values");
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Wootters concurrence `max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))`.
pub fn concurrence_general(snapshot: &DensitySnapshot) -> Result<f64> {
    let s = spin_flip_singular_values(&snapshot.rho)?;
    Ok((s[0] - s[1] - s[2] - s[3]).max(0.0))
}

/// Re-expresses a dressed-basis state in the bare `{|e>, |g>}` basis using
/// `|E> = cos(theta/2)|e> + sin(theta/2)|g>`,
/// `|G> = cos(theta/2)|g> - sin(theta/2)|e>` on both qubits. Concurrence is
/// invariant under this local rotation and is carried over.
pub fn to_bare_basis(snapshot: &DensitySnapshot, theta: f64) -> DensitySnapshot {
    let (s, c) = (0.5 * theta).sin_cos();
    // columns: |E>, |G> in the bare basis
    let single = Matrix2::new(re(c), re(-s), re(s), re(c));
    let u = single.kronecker(&single);
    DensitySnapshot {
        rho: u * snapshot.rho * u.adjoint(),
        concurrence: snapshot.concurrence,
    }
}
