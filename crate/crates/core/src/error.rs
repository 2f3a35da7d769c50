use thiserror::Error;

/// Whether an error comes from malformed input or from a mathematical
/// precondition that the (well-formed) input fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Mathematical,
    Internal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the zero vector has no primitive part")]
    ZeroVector,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("vector {0} is not primitive")]
    NotPrimitive(String),
    #[error("vector {0} does not lie in the cone")]
    NotInCone(String),
    #[error("cone {0:?} is not simplicial")]
    NonSimplicialCone(Vec<usize>),
    #[error("ray {index} {vector} is not primitive")]
    NonPrimitiveRay { index: usize, vector: String },
    #[error("ray {0} is not used by any cone")]
    UnusedRay(usize),
    #[error("vector {0} lies outside the support of the fan")]
    OutsideSupport(String),
    #[error("vector {0} is not a ray of the fan")]
    NotARay(String),
    #[error("ambiguous cone selection: {0}")]
    AmbiguousCone(String),
    #[error("polyhedron is unbounded")]
    Unbounded,
    #[error("polyhedron is empty")]
    Empty,
    #[error("linear map is singular")]
    SingularMap,
    #[error("polytope is not full-dimensional")]
    NotFullDim,
    #[error("cone {0} is not a full-dimensional cone of the fan")]
    ConeNotFullDim(usize),
    #[error("divisor is not big (moment polytope is not full-dimensional)")]
    NotBig,
    #[error("flag has depth {depth} but the ambient rank is {rank}")]
    IncompleteFlag { depth: usize, rank: usize },
    #[error("degenerate slice profile: {0}")]
    DegenerateSlice(String),
    #[error("W = {w} is smaller than V = {v}")]
    WBelowV { w: String, v: String },
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("input exceeds supported size: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable name, used in CLI error objects.
    pub fn name(&self) -> &'static str {
        match self {
            Error::ZeroVector => "ZeroVector",
            Error::DependentGenerators => "DependentGenerators",
            Error::NotPrimitive(_) => "NotPrimitive",
            Error::NotInCone(_) => "NotInCone",
            Error::NonSimplicialCone(_) => "NonSimplicialCone",
            Error::NonPrimitiveRay { .. } => "NonPrimitiveRay",
            Error::UnusedRay(_) => "UnusedRay",
            Error::OutsideSupport(_) => "OutsideSupport",
            Error::NotARay(_) => "NotARay",
            Error::AmbiguousCone(_) => "AmbiguousCone",
            Error::Unbounded => "Unbounded",
            Error::Empty => "Empty",
            Error::SingularMap => "SingularMap",
            Error::NotFullDim => "NotFullDim",
            Error::ConeNotFullDim(_) => "ConeNotFullDim",
            Error::NotBig => "NotBig",
            Error::IncompleteFlag { .. } => "IncompleteFlag",
            Error::DegenerateSlice(_) => "DegenerateSlice",
            Error::WBelowV { .. } => "WBelowV",
            Error::ConstraintViolated(_) => "ConstraintViolated",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
            Error::TooLarge(_) => "TooLarge",
            Error::Parse(_) => "ParseError",
            Error::Internal(_) => "Internal",
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::ZeroVector
            | Error::NotPrimitive(_)
            | Error::NonSimplicialCone(_)
            | Error::NonPrimitiveRay { .. }
            | Error::UnusedRay(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidInput(_)
            | Error::TooLarge(_)
            | Error::Parse(_) => ErrorKind::Validation,
            Error::Internal(_) => ErrorKind::Internal,
            _ => ErrorKind::Mathematical,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
