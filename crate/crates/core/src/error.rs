//! One error type for the whole crate. Every failure carries enough data
//! to say which input broke which precondition.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("duplicate point {point} in point set")]
    DuplicatePoint { point: usize },
    #[error("negative power of a transformation that is not a total permutation")]
    NegativePower,
    #[error("integer overflow while computing {context}")]
    Overflow { context: &'static str },
    #[error("element at index {index} is not idempotent")]
    NotIdempotent { index: usize },
    #[error("sequence is not strictly increasing at position {position}")]
    NotMonotone { position: usize },
    #[error(
        "sequence lacks the distinct-differences property: {high_a}-{low_a} = {high_b}-{low_b} = {difference}"
    )]
    NotSidon {
        low_a: u64,
        high_a: u64,
        low_b: u64,
        high_b: u64,
        difference: u64,
    },
    #[error("sequence too short: need {needed} terms, got {got}")]
    SequenceTooShort { needed: usize, got: usize },
    #[error("empty generator list")]
    NoGenerators,
    #[error("enumeration cap {cap} exceeded after discovering {partial} elements")]
    CapExceeded { cap: usize, partial: usize },
    #[error("carrier too large: {base_size} x {interval_count} points")]
    CarrierTooLarge {
        base_size: usize,
        interval_count: usize,
    },
    #[error("element set is not closed: product of elements {left} and {right} falls outside")]
    NotClosed { left: usize, right: usize },
    #[error("multiplication table is not associative at ({a}, {b}, {c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("multiplication table is malformed at row {row}")]
    BadTable { row: usize },
    #[error("source semigroup has {size} elements; the spacing arguments need at least 3")]
    TooSmall { size: usize },
    #[error("empty mapping (empty domain) at source index {index}")]
    EmptyMapping { index: usize },
    #[error("source semigroup is not regular: element {index} has no inverse")]
    NotRegular { index: usize },
    #[error("inverse table invalid at index {index}")]
    BadInverse { index: usize },
    #[error("index ({i}, {j}, {k}) out of range for this certificate")]
    IndexOutOfRange { i: usize, j: usize, k: usize },
    #[error("operation not supported for certificate method {method}")]
    WrongMethod { method: &'static str },
    #[error("identity words must be nonempty")]
    EmptyWord,
    #[error("identity variables must be dense: variable {variable} never occurs")]
    SparseVariables { variable: usize },
    #[error("substitution sweep of {evaluations} evaluations exceeds cap {cap}")]
    SweepTooLarge { evaluations: u64, cap: u64 },
    #[error("full verification refused: projected size {projected} exceeds cap {cap}")]
    ProjectedSizeExceedsCap { projected: usize, cap: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
