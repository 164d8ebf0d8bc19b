use thiserror::Error;

/// Every failure the library can report.
///
/// Identity-style failures (`IdentityFailure`, `CertificateFailure`, ...) carry a
/// rendering of the offending residual so that a report can show what went wrong.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field size {p}^{k} is out of range")]
    Overflow { p: u64, k: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("requested {requested} elements but only {available} are available")]
    NotEnoughElements { requested: u64, available: u64 },
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("field of size {0} is too large for exhaustive search")]
    FieldTooLarge(u64),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("resultant needs both degrees >= 1")]
    DegenerateDegrees,
    #[error("bad normalization: sigma_1 and sigma_(p-1) must equal 1 ({0})")]
    BadNormalization(String),
    #[error("identity `{check}` failed; residual: {residual}")]
    IdentityFailure { check: String, residual: String },
    #[error("multiplicity {m} is not congruent to contact degree {d} mod {p}")]
    BadCongruence { d: usize, m: usize, p: u64 },
    #[error("reparameterization scale must be nonzero")]
    ZeroScale,
    #[error("point lies on the boundary curve{}", line.map(|l| format!(" (line {l})")).unwrap_or_default())]
    PointOnBoundary { line: Option<usize> },
    #[error("could not find {0} usable interpolation nodes")]
    NotEnoughNodes(usize),
    #[error("parameterization is constant")]
    ConstantMap,
    #[error("singularity classification mismatch: {0}")]
    ClassificationMismatch(String),
    #[error("certificate `{check}` failed: {detail}")]
    CertificateFailure { check: String, detail: String },
    #[error("tangent cone mismatch: {0}")]
    ConeMismatch(String),
    #[error("genericity exhausted after {attempts} attempts; failing condition: {condition}")]
    GenericityExhausted { condition: String, attempts: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Variant name, used to tag diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::Overflow { .. } => "Overflow",
            Error::DivisionByZero => "DivisionByZero",
            Error::MixedFields => "MixedFields",
            Error::NotEnoughElements { .. } => "NotEnoughElements",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::FieldTooLarge(_) => "FieldTooLarge",
            Error::ArityMismatch { .. } => "ArityMismatch",
            Error::DegenerateDegrees => "DegenerateDegrees",
            Error::BadNormalization(_) => "BadNormalization",
            Error::IdentityFailure { .. } => "IdentityFailure",
            Error::BadCongruence { .. } => "BadCongruence",
            Error::ZeroScale => "ZeroScale",
            Error::PointOnBoundary { .. } => "PointOnBoundary",
            Error::NotEnoughNodes(_) => "NotEnoughNodes",
            Error::ConstantMap => "ConstantMap",
            Error::ClassificationMismatch(_) => "ClassificationMismatch",
            Error::CertificateFailure { .. } => "CertificateFailure",
            Error::ConeMismatch(_) => "ConeMismatch",
            Error::GenericityExhausted { .. } => "GenericityExhausted",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    pub(crate) fn identity(check: &str, residual: impl std::fmt::Display) -> Self {
        Error::IdentityFailure {
            check: check.to_string(),
            residual: residual.to_string(),
        }
    }

    pub(crate) fn certificate(check: &str, detail: impl Into<String>) -> Self {
        Error::CertificateFailure {
            check: check.to_string(),
            detail: detail.into(),
        }
    }
}
