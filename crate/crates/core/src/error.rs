use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain violation: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("boundary conditions violated: {0:?}")]
    BoundaryViolation(Vec<String>),

    #[error("degenerate spec: {0}")]
    DegenerateSpec(String),

    #[error("no turning point for clairaut constant b = {b}")]
    NoTurningPoint { b: f64 },

    #[error("degenerate turning point at t = {t_star}: |h'(t*)| = {slope} below threshold")]
    DegenerateTurning { t_star: f64, slope: f64 },

    #[error("no admissible loop candidate found")]
    SearchExhausted,

    #[error("root not bracketed on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("integration step failure at arc length {s}: {reason}")]
    StepFailure { s: f64, reason: String },

    #[error("chain/model kind mismatch")]
    KindMismatch,

    #[error("table too short: need at least {need} rows, got {got}")]
    TableTooShort { need: usize, got: usize },

    #[error("no (l, 2l) pairs present in the loop table")]
    InsufficientPairs,

    #[error("grid target unreachable: {0}")]
    Unreachable(String),
}

impl Error {
    /// Exit-code classification used by the CLI: validation failures (bad
    /// configs, violated preconditions) map to 2, numeric failures to 3.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::InvalidParameter(_)
                | Error::Parse(_)
                | Error::BoundaryViolation(_)
                | Error::DegenerateSpec(_)
                | Error::KindMismatch
                | Error::TableTooShort { .. }
                | Error::InsufficientPairs
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
