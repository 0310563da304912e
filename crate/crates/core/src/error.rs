//! Error types shared across the library.

use thiserror::Error;

/// Errors surfaced by potential functionals, quadrature engines, and the
/// sweep harness.
#[derive(Debug, Error)]
pub enum Error {
    /// A moment M_a was requested beyond the declared finite range.
    #[error("moment order a = {a} exceeds the declared finite range (max {max})")]
    DivergentMoment { a: f64, max: f64 },

    /// The rate constant is undefined because V̂ vanishes identically.
    #[error("potential is identically zero; rate constant B would degenerate")]
    ZeroPotential,

    /// Adaptive or fixed-budget quadrature failed to reach its tolerance.
    #[error("quadrature failed to converge (best error estimate {err:.3e})")]
    NonConvergence { err: f64 },

    /// A weighted sup-norm with weight exponent n was requested for a field
    /// that does not decay fast enough.
    #[error("weight exponent n = {n} exceeds the field's decay exponent {max}")]
    InsufficientDecay { n: f64, max: f64 },

    /// Taylor remainders were requested at coincident points.
    #[error("taylor remainder requested at coincident points")]
    DegenerateDisplacement,

    /// The Landau kernel was requested at (numerically) zero relative velocity.
    #[error("relative velocity too small: |z| = {norm:.3e}")]
    ZeroRelativeVelocity { norm: f64 },

    /// A pair integrand declared a singularity the r² Jacobian cannot cancel.
    #[error("declared singularity order {order} is too strong for the radial jacobian")]
    SingularityTooStrong { order: u32 },

    /// Rate fitting was requested with too few usable rows.
    #[error("need at least {needed} rows above the noise gate, got {got}")]
    InsufficientData { needed: usize, got: usize },

    /// Fewer than 3 gap rows clear the 10x noise gate; a rate fit would be noise.
    #[error("gap rows are dominated by quadrature noise; rate fit refused")]
    NoiseDominated,

    /// Invalid configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// I/O failure while reading config or writing reports.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON in a config or constants file.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
