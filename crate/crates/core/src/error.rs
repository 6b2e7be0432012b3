use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ground set size must be at least 1")]
    EmptyGroundSet,
    #[error("not a set partition of [1, {n}]: {reason}")]
    NotASetPartition { n: usize, reason: String },
    #[error("blocks {first:?} and {second:?} cross")]
    Crossing { first: Vec<usize>, second: Vec<usize> },
    #[error("d must be at least 1")]
    ZeroD,
    #[error("empty poset family: n = {n} is not congruent to 1 mod {d}")]
    EmptyPosetFamily { n: usize, d: usize },
    #[error("predicted size {predicted} exceeds the element budget {budget}")]
    BudgetExceeded { predicted: u128, budget: u128 },
    #[error("partition is not an element of the poset")]
    NotAnElement,
    #[error("expected x <= y in the poset")]
    NotComparable,
    #[error("expected a strict relation x < y")]
    NotStrictlyBelow,
    #[error("pair is not a cover relation: {0}")]
    NotACover(String),
    #[error("invalid maximal chain: {0}")]
    InvalidChain(String),
    #[error("sequence {values:?} is not a {d}-parking function")]
    NotParking { values: Vec<usize>, d: usize },
    #[error("labeled plane tree violates condition ({condition}): {detail}")]
    LabelCondition { condition: u8, detail: String },
    #[error("invalid {d}-parking tree: {detail}")]
    InvalidParkingTree { d: usize, detail: String },
    #[error("series constant term must be 1")]
    NonUnitConstant,
    #[error("series has zero constant term")]
    ZeroConstant,
    #[error("inner series must have zero constant term in x")]
    NonzeroInnerConstant,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("division in closed form `{kind}` is not exact")]
    NonIntegral { kind: String },
    #[error("interval factorization mismatch: {0}")]
    FactorizationMismatch(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
