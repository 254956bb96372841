use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter must be a nonzero complex number, got {re} + {im}i")]
    ZeroParam { re: f64, im: f64 },
    #[error("invalid parameter set: {0}")]
    InvalidParamSet(String),
    #[error("parameters {0} and {1} are not separated")]
    DegenerateParams(String, String),
    #[error("direction {0} is not generic for the parameter set")]
    NotGeneric(f64),
    #[error("arg C = {0} outside (-pi/2, pi/2)")]
    UnsupportedArgRange(f64),
    #[error("sector is a half-line along a Stokes direction")]
    StokesHalfLine,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("diagonal block {0} is singular")]
    SingularDiagonalBlock(usize),
    #[error("invalid block pair ({0}, {1})")]
    InvalidBlockPair(usize, usize),
    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),
    #[error("region mismatch: {0}")]
    RegionMismatch(String),
    #[error("parameters do not share a common argument")]
    NotAligned,
    #[error("generic direction {found} incompatible with required {expected} (mod pi)")]
    WrongGenericDirection { expected: f64, found: f64 },
    #[error("pair violates the heart condition: {0}")]
    HeartViolated(String),
    #[error("unsupported ranks: {0}")]
    UnsupportedRanks(String),
    #[error("stalk point outside sector {0}")]
    OutsideSector(usize),
    #[error("required stalk vanishes at probe {0}")]
    StalkNotFull(usize),
    #[error("probes disagree: deviation {0:e}")]
    Inconsistent(f64),
    #[error("component count did not stabilize after {0} box doublings")]
    Unstable(usize),
    #[error("parse error: {0}")]
    Parse(String),
}
