use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("cokernel is infinite: relation lattice has rank {rank} < {ambient}")]
    InfiniteCokernel { rank: usize, ambient: usize },

    #[error("relation {0} is not respected by the proposed images")]
    RelationViolated(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero element has no valuation")]
    ZeroElement,

    #[error("element is not a unit at {0}")]
    NotAUnit(String),

    #[error("input outside the supported range: {0}")]
    OutOfSupportedRange(String),

    #[error("place {0} appears twice in the modulus")]
    DuplicatePlace(String),

    #[error("narrow moduli are not defined for function fields")]
    NarrowUnsupported,

    #[error("cycle support meets the modulus at {0}")]
    SupportMeetsModulus(String),

    #[error("place {0} lies in the modulus")]
    PlaceInModulus(String),

    #[error("element is not in the relation group of the modulus")]
    NotARelation,

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
