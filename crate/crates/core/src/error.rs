use thiserror::Error;

use crate::space::SpaceError;

pub type Result<T> = std::result::Result<T, QuadError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("invalid interval [{a}, {b}]: endpoints must be finite with a <= b")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid breakpoints: {0}")]
    InvalidPartition(String),

    #[error("partition needs at least one panel")]
    ZeroPanels,

    #[error("exponent must be >= 1, got {0}")]
    InvalidExponent(f64),

    #[error("conjugate exponent requires p > 1, got {0}")]
    InvalidConjugate(f64),

    #[error("rule must have at least one node")]
    EmptyRule,

    #[error("rule has {nodes} nodes but {weights} weights")]
    LengthMismatch { nodes: usize, weights: usize },

    #[error("weight p_{index} = {value} is not strictly positive")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },

    #[error("relative node {index} = {value} lies outside [0, 1]")]
    NodeOutOfRange { index: usize, value: f64 },

    #[error("relative nodes are not nondecreasing at index {index}")]
    UnsortedNodes { index: usize },

    #[error("unknown rule preset `{0}`")]
    UnknownPreset(String),

    #[error("bad parameters for preset `{name}`: {reason}")]
    PresetParams { name: String, reason: String },

    #[error("no closed-form constant tabulated for rule `{0}`")]
    NoClosedForm(String),

    #[error("function provides no derivative source for this estimate")]
    NoDerivative,

    #[error("non-finite value at t = {t}")]
    NonFinite { t: f64 },

    #[error("resolution {0} is too small (need >= 2)")]
    ResolutionTooSmall(usize),

    #[error("oracle resolution {0} must be even and >= 2")]
    OddResolution(usize),

    #[error("t = {t} lies outside [{a}, {b}]")]
    OutsideInterval { t: f64, a: f64, b: f64 },

    #[error("regime mismatch: expected {expected}, found {found}")]
    RegimeMismatch { expected: String, found: String },

    #[error("seminorm profile does not align with the rule's segments")]
    ProfileMismatch,

    #[error("corollary condition fails: xi_{index} is outside [x_{index}, x_{next}]", next = index + 1)]
    CorollaryCondition { index: usize },

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("max_panels must be >= 1")]
    InvalidMaxPanels,

    #[error("thread pool: {0}")]
    ThreadPool(String),

    #[error(transparent)]
    Space(#[from] SpaceError),
}
