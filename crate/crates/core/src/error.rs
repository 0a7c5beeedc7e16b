use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the space algebra.
///
/// `Falsification` is special: it signals that a postcondition guaranteed by a
/// theorem failed on a concrete instance. Callers should treat it as fatal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("filter base is empty")]
    EmptyBase,
    #[error("carrier mismatch")]
    CarrierMismatch,
    #[error("preimage of the filter base is empty")]
    EmptyPreimage,
    #[error("family does not have the finite intersection property")]
    NoFip,
    #[error("net domain is empty")]
    EmptyDomain,
    #[error("relation is not a directed preorder")]
    NotDirected,
    #[error("nets do not share a domain")]
    DomainMismatch,
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("label `{0}` is empty or contains whitespace")]
    InvalidLabel(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("carrier of {0} points exceeds the supported maximum of {max}", max = crate::filters::MAX_POINTS)]
    CarrierTooLarge(usize),
    #[error("set {set:#b} is not contained in a carrier of {size} points")]
    SetOutOfRange { set: u32, size: usize },
    #[error("limit table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("not a convergence: {0}")]
    NotAConvergence(String),
    #[error("subspace must be nonempty")]
    EmptySubset,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("pieces do not cover the carrier")]
    CoverGap,
    #[error("pieces disagree at point `{0}`")]
    Disagreement(String),
    #[error("map is not continuous")]
    NotContinuous,
    #[error("convergence system has not been validated")]
    NotValidated,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("preconvergence is not isotone")]
    NotIsotone,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("falsification: {0}")]
    Falsification(String),
}
