use thiserror::Error;

/// Every failure the library reports. Variant names double as the
/// diagnostic tokens printed by the command-line tool.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraError {
    #[error("ZeroOffDiagonal: t_{n} vanishes")]
    ZeroOffDiagonal { n: usize },
    #[error("NonFiniteCoefficient: coefficient at n={n} is not finite")]
    NonFiniteCoefficient { n: usize },
    #[error("RecursionTooLong: n_max={requested} exceeds the cap {cap}")]
    RecursionTooLong { requested: usize, cap: usize },
    #[error("CoefficientsTooShort: need {needed} entries, have {have}")]
    CoefficientsTooShort { needed: usize, have: usize },
    #[error("InvalidFamilyParams: {0}")]
    InvalidFamilyParams(String),
    #[error("NoClosedForm: {0} is defined by its recursion only")]
    NoClosedForm(&'static str),
    #[error("NumericalOverflow: {0}")]
    NumericalOverflow(String),
    #[error("IndexOutOfValidity: {0}")]
    IndexOutOfValidity(String),
    #[error("DomainError: {0}")]
    DomainError(String),
    #[error("RealityViolation: {0}")]
    RealityViolation(String),
    #[error("ConstraintViolation: {0}")]
    ConstraintViolation(String),
    #[error("ScenarioRequiresA1Zero: A1={0}")]
    ScenarioRequiresA1Zero(f64),
    #[error("ScenarioMismatch: {0}")]
    ScenarioMismatch(String),
    #[error("DegenerateDenominator: {0}")]
    DegenerateDenominator(String),
    #[error("NoFamilyApplies: {0}")]
    NoFamilyApplies(String),
    #[error("AmbiguousRegion: {0}")]
    AmbiguousRegion(String),
    #[error("IndexOutOfSpectrum: {0}")]
    IndexOutOfSpectrum(String),
    #[error("TruncationTooSmall: tail ratio {ratio:e} at truncation {truncation}")]
    TruncationTooSmall { truncation: usize, ratio: f64 },
    #[error("SingularPointTooClose: x={0}")]
    SingularPointTooClose(f64),
    #[error("NoBoundStates: {0}")]
    NoBoundStates(String),
    #[error("NoContinuum: {0}")]
    NoContinuum(String),
    #[error("BelowThreshold: E={energy} is below the continuum threshold {threshold}")]
    BelowThreshold { energy: f64, threshold: f64 },
    #[error("MeshTooCoarse: level {level} moved by {change:e} between refinements")]
    MeshTooCoarse { level: usize, change: f64 },
}

pub type Result<T> = std::result::Result<T, TraError>;
