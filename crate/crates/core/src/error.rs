use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("empty continued fraction expansion")]
    EmptyExpansion,
    #[error("no sign change on the bracketing interval")]
    NoSignChange,
    #[error("degenerate interval: {0}")]
    DegenerateInterval(String),
    #[error("decay fit needs positive data: {0}")]
    NonPositiveData(String),
    #[error("rotation number locked to a rational at digit {digit}")]
    RationalLock { digit: usize },
    #[error("requested depth {requested} unavailable (only {available} digits)")]
    DepthUnavailable { requested: usize, available: usize },
    #[error("orbit hit the critical point 0 exactly: {0}")]
    BoundaryHit(String),
    #[error("pair is not renormalizable: {0}")]
    NonRenormalizable(String),
    #[error("gluing point is critical for xi")]
    CriticalGluePoint,
    #[error("complex evaluation left the safety region: {0}")]
    EvaluationOverflow(String),
    #[error("combinatorics differ: {0}")]
    CombinatorialMismatch(String),
    #[error("target unreachable: {0}")]
    TargetUnreachable(String),
    #[error("degenerate signature: {0}")]
    DegenerateSignature(String),
    #[error("more than one critical point in a partition atom: {0}")]
    CriticalCrowding(String),
    #[error("perturbation broke monotonicity: {0}")]
    MonotonicityBroken(String),
    #[error("signatures differ: {0}")]
    SignatureMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
