use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// [`Error::code`] gives the stable short name used by the CLI diagnostics.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ambient dimension must be positive")]
    ZeroDimension,

    #[error("vector {0} does not lie in the lattice")]
    NotMember(String),

    #[error("the zero vector has no primitivity")]
    ZeroVector,

    #[error("{0} is not primitive in the lattice")]
    NotPrimitive(String),

    #[error("{0} does not lie in the cone")]
    NotInCone(String),

    #[error("rays are linearly dependent")]
    DependentRays,

    #[error("rays {0} and {1} are positive multiples of each other")]
    DuplicateRay(usize, usize),

    #[error("rays {0} and {1} are opposite, so the cone contains a line")]
    OppositeRays(usize, usize),

    #[error("rays span a space of dimension {rank} < {dim}")]
    NotFullDimensional { rank: usize, dim: usize },

    #[error("the cone is not strongly convex")]
    NonConvex,

    #[error("coefficient b_{index} = {value} is negative")]
    NotEffective { index: usize, value: String },

    #[error("ray {index} has log discrepancy {value} < 0")]
    NotLogCanonical { index: usize, value: String },

    #[error("no linear function takes the values 1 - b_i on the rays (K_X + B is not R-Cartier)")]
    NotRCartier,

    #[error("ray indices {0:?} do not span a face of the cone")]
    NotAFace(Vec<usize>),

    #[error("point codimension {codim} is outside [{min}, {max}]")]
    CodimOutOfRange {
        codim: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid candidate pair: {0}")]
    InvalidPair(String),

    #[error("pair does not belong to V: {0}")]
    NotInV(String),

    #[error("pair does not belong to the enlarged set: {0}")]
    NotInTildeV(String),

    #[error("coefficient a_{0} is zero; drop those coordinates before transferring")]
    ZeroCoefficient(usize),

    #[error("invalid coefficient set: {0}")]
    InvalidCoefficientSet(String),

    #[error("resource limit exceeded: {required} candidates > budget {budget}")]
    ResourceLimit { required: u128, budget: u128 },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("{0}")]
    Parse(String),
}

impl Error {
    /// Short invariant name, printed first in CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::ZeroDimension => "ZeroDimension",
            Error::NotMember(_) => "NotMember",
            Error::ZeroVector => "ZeroVector",
            Error::NotPrimitive(_) => "NotPrimitive",
            Error::NotInCone(_) => "NotInCone",
            Error::DependentRays => "DependentRays",
            Error::DuplicateRay(..) => "DuplicateRay",
            Error::OppositeRays(..) => "OppositeRays",
            Error::NotFullDimensional { .. } => "NotFullDimensional",
            Error::NonConvex => "NonConvex",
            Error::NotEffective { .. } => "NotEffective",
            Error::NotLogCanonical { .. } => "NotLogCanonical",
            Error::NotRCartier => "NotRCartier",
            Error::NotAFace(_) => "NotAFace",
            Error::CodimOutOfRange { .. } => "CodimOutOfRange",
            Error::InvalidPair(_) => "InvalidPair",
            Error::NotInV(_) => "NotInV",
            Error::NotInTildeV(_) => "NotInTildeV",
            Error::ZeroCoefficient(_) => "ZeroCoefficient",
            Error::InvalidCoefficientSet(_) => "InvalidCoefficientSet",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::VerificationFailed(_) => "VerificationFailed",
            Error::Parse(_) => "Parse",
        }
    }
}
