//! Closed-form Laplace solution of the two-qubit amplitudes and the
//! entanglement measures built on them.

mod amplitudes;
mod cubic;
mod density;
mod epsilon;

pub use amplitudes::{amplitude_coefficients, amplitudes, AmplitudeCoefficients};
pub use cubic::{characteristic_cubic, solve_cubic, CubicSolution};
pub use density::{
    concurrence_general, concurrence_x, density_matrix, spin_flip_spectrum, to_bare_basis,
    DensitySnapshot, SIGMA_YY,
};
pub use epsilon::{
    default_max_step, epsilon_ode, epsilon_residues, epsilon_series, residues, EpsilonMethod,
    DEGENERACY_THRESHOLD,
};
