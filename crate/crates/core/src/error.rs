use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: must satisfy {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("parameter `{0}` is not finite")]
    NonFinite(&'static str),

    /// Residue evaluation is unsafe; the caller should integrate instead.
    #[error("characteristic roots are degenerate (relative separation {min_separation:e})")]
    DegenerateRoots { min_separation: f64 },

    #[error("cubic root residual {residual:e} exceeds {bound:e}")]
    IllConditioned { residual: f64, bound: f64 },

    #[error("integrator step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integrator exceeded {0} steps")]
    TooManySteps(usize),

    #[error("non-physical amplitudes: |c1|^2 + |c2|^2 = {0}")]
    NonPhysical(f64),

    #[error("eigenvalue solver failed: {0}")]
    Numeric(String),

    #[error("invalid time window: {0}")]
    TimeWindow(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
