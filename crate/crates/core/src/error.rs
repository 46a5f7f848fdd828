use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scan or bracket failed to enclose a sign change.
    #[error("root bracketing failed for {what}; scanned intervals: {scanned:?}")]
    RootBracketing {
        what: String,
        scanned: Vec<(f64, f64)>,
    },

    #[error("quadrature did not converge: estimate {estimate}, error estimate {error}")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    #[error("ODE integration failed: {0}")]
    Integration(String),

    #[error("no homoclinic orbit at load {p}: {reason}")]
    NoHomoclinic { p: f64, reason: String },

    #[error("branch {requested} absent at load {p}; available: {available:?}")]
    BranchAbsent {
        requested: String,
        p: f64,
        available: Vec<String>,
    },

    #[error("load {p} outside admissible interval [{lo}, {hi}]")]
    LoadOutOfDomain { p: f64, lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("singular matrix at row {row}")]
    SingularMatrix { row: usize },

    #[error(
        "Newton iteration diverged after {iterations} iterations (residual {residual:e}); \
         try a smaller load step"
    )]
    NewtonDivergence { iterations: usize, residual: f64 },

    #[error("continuation failed at load {p}: {reason}")]
    Continuation { p: f64, reason: String },

    #[error("fold encountered near load {p}")]
    FoldEncountered { p: f64 },

    #[error("no Maxwell load: {reason}")]
    NoMaxwell { reason: String },

    #[error("solution collapsed onto the trivial state at load {p}")]
    TrivialCollapse { p: f64 },
}
