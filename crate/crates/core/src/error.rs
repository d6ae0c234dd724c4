use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("substitution has no binding for variable `{0}`")]
    MissingBinding(String),
    #[error("unknown axiom `{0}` (expected one of su, aa, aa_plus, kp, sa)")]
    UnknownAxiom(String),
    #[error("unknown {kind} `{name}`")]
    UnknownStrategy { kind: &'static str, name: String },
    #[error("point {point} out of range for a frame with {size} points")]
    PointOutOfRange { point: usize, size: usize },
    #[error("frame with {0} points exceeds the supported maximum of {max}", max = crate::pointset::MAX_POINTS)]
    FrameTooLarge(usize),
    #[error("frame is not reflexive and transitive")]
    NotS4,
    #[error("valuation of `{0}` is not an upset")]
    NotUpset(String),
    #[error("{what}: {count} exceeds cap {cap}")]
    CapExceeded { what: &'static str, count: u128, cap: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("post-check failed: {0}")]
    PostCheck(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Format { path: String, line: usize, message: String },
}
