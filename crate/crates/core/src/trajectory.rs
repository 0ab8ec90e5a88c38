use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How a trajectory's amplitudes were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// Residue sum over the roots of the characteristic cubic.
    Residues,
    /// Closed-form amplitudes with `eps` integrated (degenerate roots).
    EpsilonOde,
    /// Direct integration of the coupled amplitude equations.
    Volterra,
}

/// Sampled dressed-basis amplitudes of `|E,G>` and `|G,E>`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub eps: Option<Vec<Complex64>>,
    pub c1: Vec<Complex64>,
    pub c2: Vec<Complex64>,
    pub source: Source,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// `2 |c1 c2*|` at every sample.
    pub fn concurrence(&self) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| crate::analytic::concurrence_x(*a, *b))
            .collect()
    }

    /// Excitation probability left in the qubits, `|c1|^2 + |c2|^2`.
    pub fn qubit_population(&self) -> Vec<f64> {
        self.c1
            .iter()
            .zip(&self.c2)
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect()
    }
}

/// `samples` evenly spaced times from `start` to `end` inclusive.
pub fn uniform_grid(start: f64, end: f64, samples: usize) -> Vec<f64> {
    match samples {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let span = end - start;
            let last = (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        end
                    } else {
                        start + span * (i as f64 / last)
                    }
                })
                .collect()
        }
    }
}
