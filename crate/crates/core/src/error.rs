use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported moduli signature (g={g}, n={n}): {reason}")]
    Signature { g: usize, n: usize, reason: &'static str },

    #[error("marking {index} out of range 1..={n}")]
    MarkingOutOfRange { index: usize, n: usize },

    #[error("genus part h={h} out of range 0..={g}")]
    GenusOutOfRange { h: usize, g: usize },

    #[error("unstable boundary pair (h={h}, P={points})")]
    UnstableBoundary { h: usize, points: String },

    #[error("not a valid test curve: {0}")]
    InvalidCurve(String),

    #[error("classes live on different moduli spaces: (g={left_g}, n={left_n}) vs (g={right_g}, n={right_n})")]
    SignatureMismatch { left_g: usize, left_n: usize, right_g: usize, right_n: usize },

    #[error("weight vector has {found} entries, expected {expected}")]
    WeightLength { expected: usize, found: usize },

    #[error("weight vector has degree {found}, expected {expected}")]
    DegreeMismatch { expected: i64, found: i64 },

    #[error("weight vector must have at least one negative entry")]
    NoNegativeWeight,

    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),

    #[error("matrix dimensions do not match: {0}")]
    Dimension(String),

    #[error("singular system: no pivot for column {column}")]
    Singular { column: String },

    #[error("inconsistent overdetermined system, failing rows: {}", rows.join(", "))]
    Inconsistent { rows: Vec<String> },

    #[error("expansion would have {count} monomials, above the cap of {cap}")]
    MonomialCap { count: u128, cap: u128 },

    #[error("assignment is missing generator {0}")]
    MissingAssignment(String),

    #[error("parse error: {0}")]
    Parse(String),
}
