use thiserror::Error;

/// Errors raised by the library. Variants tagged "internal" signal a broken
/// invariant and should never fire on supported inputs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid root system {label}{rank}: {reason}")]
    InvalidType {
        label: String,
        rank: usize,
        reason: String,
    },

    #[error("cannot parse type label {0:?} (expected e.g. \"A2\", \"G2\")")]
    BadTypeLabel(String),

    #[error("Weyl group of order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },

    #[error("parabolic must omit at least one simple root; got an empty S_P")]
    EmptyParabolic,

    #[error("no such node {node} in a rank-{rank} diagram")]
    NoSuchNode { node: usize, rank: usize },

    #[error("Weyl element {0} is not a minimal coset representative")]
    NotMinimalRepresentative(String),

    #[error("unsupported space {space}: structure constants of degree {degree} are not determined by the unit, divisor and associativity constraints")]
    UnsupportedSpace { space: String, degree: String },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("tuple must have at least {min} entries, got {got}")]
    TupleTooShort { min: usize, got: usize },

    #[error("degree vector has length {got}, expected {expected}")]
    DegreeLength { expected: usize, got: usize },

    #[error("table rendering needs a maximal parabolic, got |S_P| = {0}")]
    NotMaximal(usize),

    #[error("point is not in the fundamental alcove: component {index} violates {constraint}")]
    OutsideAlcove { index: usize, constraint: String },

    #[error("point has {got} components, expected {expected}")]
    PointShape { expected: usize, got: usize },

    #[error("SU(2) parameter t = {0} lies outside [0, 1/2]")]
    OutOfRange(String),

    #[error("linear program exceeded {0} pivots")]
    LpCycling(usize),

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("n must be at least {min}, got {got}")]
    BadArity { min: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
