use thiserror::Error;

/// Errors raised by the verification library.
///
/// Variants mirror the failure modes of the individual operations; every
/// variant that reports a failed verification carries a printable witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("presentation mismatch: {0} vs {1}")]
    PresentationMismatch(String, String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("homomorphism {hom} is ill-defined: relator {relator} maps to {image}")]
    IllDefinedHom {
        hom: String,
        relator: String,
        image: String,
    },
    #[error("not divisible, remainder {0}")]
    NotDivisible(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bad index ({0}, {1}) for dimension {2}")]
    BadIndex(usize, usize, usize),
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("verification failed: {0}")]
    VerifyFailed(String),
    #[error("witness failed: {0}")]
    WitnessFailed(String),
    #[error("first entries differ: {0} vs {1}")]
    FirstEntryMismatch(String, String),
    #[error("no solution: {0}")]
    NoSolutionInBound(String),
    #[error("chain step {step} failed: {detail}")]
    ChainStepFailed { step: String, detail: String },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("odd rank {0}")]
    OddRank(usize),
    #[error("relation {relation} failed for inputs {inputs}")]
    RelationFailed { relation: String, inputs: String },
    #[error("unsupported shape: {0}")]
    UnsupportedShape(String),
    #[error("field too large: {0} elements")]
    FieldTooLarge(u64),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("not in pullback: {0}")]
    NotInPullback(String),
    #[error("lifted certificate failed verification: {0}")]
    LiftVerifyFailed(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
