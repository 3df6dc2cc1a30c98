use crate::algebra::AlgebraError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("operands belong to different algebras")]
    MixedAlgebras,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("layer {layer} out of range for step {step}")]
    LayerOutOfRange { layer: usize, step: usize },
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("a step-1 algebra has no central quotient")]
    NoQuotient,
    #[error("vector has components outside the first layer")]
    NotHorizontal,
    #[error("segment duration must be positive, got {0}")]
    NonPositiveDuration(String),
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(String),
    #[error("norm is not strictly convex: {0}")]
    NotStrictlyConvex(String),
    #[error("bad norm parameter: {0}")]
    BadNormParameter(String),
    #[error("generators are linearly dependent")]
    LinearlyDependent,
    #[error("epsilon {0} outside (0, 1/2)")]
    EpsilonOutOfRange(String),
    #[error("eta {0} out of range: need 0 < eta and eta^(s-1) < 1/2")]
    EtaOutOfRange(String),
    #[error("expected a vector in layer {expected}")]
    WrongLayer { expected: usize },
    #[error("operation needs step at least {needed}, algebra has step {step}")]
    StepTooSmall { needed: usize, step: usize },
    #[error("operation needs step {expected}, algebra has step {step}")]
    StepMismatch { expected: usize, step: usize },
    #[error("vector spans several layers; decompose it first")]
    MixedLayers,
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("inner certificate bound {inner} is not below the corner bound {corner}")]
    InnerNotShorter { inner: String, corner: String },
    #[error("step-1 groups are abelian: corners there are length minimizing")]
    AbelianStep1,
    #[error("the shortcut construction needs a rank-2 algebra, got rank {0}")]
    NotRankTwo(usize),
    #[error("no eta in the search produced a margin of at least {required} (best {best})")]
    EpsilonSearchExhausted { required: String, best: String },
    #[error("candidate endpoint does not match exp(X2)")]
    EndpointMismatch,
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Algebra(_) => "AlgebraInvalid",
            Error::MixedAlgebras => "MixedAlgebras",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::LayerOutOfRange { .. } => "LayerOutOfRange",
            Error::NonPositiveScale(_) => "NonPositiveScale",
            Error::NoQuotient => "NoQuotient",
            Error::NotHorizontal => "NotHorizontal",
            Error::NonPositiveDuration(_) => "NonPositiveDuration",
            Error::BadTolerance(_) => "BadTolerance",
            Error::NotStrictlyConvex(_) => "NotStrictlyConvex",
            Error::BadNormParameter(_) => "BadNormParameter",
            Error::LinearlyDependent => "LinearlyDependent",
            Error::EpsilonOutOfRange(_) => "EpsilonOutOfRange",
            Error::EtaOutOfRange(_) => "EtaOutOfRange",
            Error::WrongLayer { .. } => "WrongLayer",
            Error::StepTooSmall { .. } => "StepTooSmall",
            Error::StepMismatch { .. } => "StepMismatch",
            Error::MixedLayers => "MixedLayers",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::InnerNotShorter { .. } => "InnerNotShorter",
            Error::AbelianStep1 => "AbelianStep1",
            Error::NotRankTwo(_) => "NotRankTwo",
            Error::EpsilonSearchExhausted { .. } => "EpsilonSearchExhausted",
            Error::EndpointMismatch => "EndpointMismatch",
            Error::Malformed(_) => "Malformed",
            Error::Io(_) => "Io",
        }
    }
}
