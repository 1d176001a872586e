use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("delta = v + 1/v vanishes in this field")]
    DeltaZero,
    #[error("invalid field modulus: {0}")]
    BadModulus(String),
    #[error("polynomial does not split into linear factors over the field: {0}")]
    RootsNotInField(String),
    #[error("eigenvalues not in field: {0}")]
    EigenvaluesNotInField(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("bad index: {0}")]
    BadIndex(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("diagram has no through-strings")]
    ZeroThroughStrings,
    #[error("not an annular involution: {0}")]
    NotAnnular(String),
    #[error("through-string counts differ: {0} vs {1}")]
    MismatchedT(usize, usize),
    #[error("not an involution: {0}")]
    NotInvolution(String),
    #[error("parity mismatch: {0}")]
    ParityMismatch(String),
    #[error("parity violation: {0}")]
    ParityViolation(String),
    #[error("spec mismatch: {0}")]
    SpecMismatch(String),
    #[error("algebra is infinite dimensional")]
    InfiniteDimensional,
    #[error("n must be even")]
    OddN,
    #[error("weight not found: {0}")]
    WeightNotFound(String),
    #[error("module is not simple")]
    NotSimple,
    #[error("{0} is not a root")]
    NotARoot(String),
    #[error("layer is not idempotent: {0}")]
    LayerNotIdempotent(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
