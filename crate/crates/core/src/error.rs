use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("subspace is not contained in the ambient subspace")]
    NotASubspace,
    #[error("invalid Lie algebra presentation: {0}")]
    InvalidPresentation(String),
    #[error("structure constants must be real: {0}")]
    ComplexStructureConstant(String),
    #[error("bad function declaration: {0}")]
    BadFunction(String),
    #[error("the (1,0)-coframe together with its conjugate is not a basis of 1-forms")]
    CoframeNotBasis,
    #[error("coframe element {0} is not a 1-form of the right dimension")]
    BadCoframe(usize),
    #[error("form is not of pure bidegree")]
    MixedBidegree,
    #[error("fundamental form is not real")]
    MetricNotReal,
    #[error("fundamental form is not of type (1,1)")]
    MetricNotType11,
    #[error("fundamental form does not define a positive definite metric")]
    MetricNotPositive,
    #[error(
        "presentation is not unimodular: adjoints on invariant forms do not compute L2 adjoints"
    )]
    NonUnimodular,
    #[error("stage {0} is odd; stages must be even")]
    OddStage(usize),
    #[error("stage {stage} exceeds manifold dimension {dim}")]
    StageTooLarge { stage: usize, dim: usize },
    #[error("dimension {0} is not divisible by 4")]
    NotDivisibleByFour(usize),
    #[error("form is not closed")]
    NotClosed,
    #[error("degrees {0} and {1} are not complementary")]
    WrongDegrees(usize, usize),
    #[error("form is not primitive")]
    NotPrimitive,
    #[error("metric is not almost Kahler")]
    NotAlmostKahler,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("unknown manifold `{0}`")]
    UnknownManifold(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage = 1,
    Parse = 2,
    Validation = 3,
    Precondition = 4,
}

impl ErrorClass {
    pub fn name(self) -> &'static str {
        match self {
            ErrorClass::Usage => "usage",
            ErrorClass::Parse => "parse",
            ErrorClass::Validation => "validation",
            ErrorClass::Precondition => "precondition",
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Parse { .. } => ErrorClass::Parse,
            Usage(_) | UnknownMetric(_) | UnknownManifold(_) => ErrorClass::Usage,
            InvalidPresentation(_)
            | ComplexStructureConstant(_)
            | BadFunction(_)
            | CoframeNotBasis
            | BadCoframe(_)
            | MetricNotReal
            | MetricNotType11
            | MetricNotPositive => ErrorClass::Validation,
            _ => ErrorClass::Precondition,
        }
    }
}
