use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not in Z (needs f(1)=1, f(t)=f(1/t), integer coefficients)")]
    NotInZ,
    #[error("series has zero constant term")]
    NonUnit,
    #[error("malformed diagram: {0}")]
    Malformed(String),
    #[error("relation site not found: {0}")]
    SiteNotFound(String),
    #[error("label needs an Alexander polynomial but none was configured")]
    MissingDelta,
    #[error("unsupported label: {0}")]
    UnsupportedLabel(String),
    #[error("skeleton mismatch: {0}")]
    SkeletonMismatch(String),
    #[error("request too large: {0}")]
    TooLarge(String),
    #[error("no line component for label {0}")]
    MissingLine(String),
    #[error("combination is not in the space: {0}")]
    NotInSpace(String),
    #[error("matrix blocks have inconsistent shapes: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("determinant cannot be normalized into Z: {0}")]
    NormalizationFailure(String),
    #[error("gluing would create a circle with no vertices")]
    PPartViolation,
    #[error("wheel data does not cover degree {0}")]
    InsufficientNu(usize),
    #[error("combination has constant term different from 1")]
    NonUnitConstant,
    #[error("diagram still carries symbolic labels")]
    UnexpandedLabel,
    #[error("inexact division in {0}")]
    InexactDivision(&'static str),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
