use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameters S({t},{k},{v}): {reason}")]
    InvalidParams {
        t: usize,
        k: usize,
        v: usize,
        reason: String,
    },

    #[error("C({num_n},{num_k}) = {numerator} is not divisible by C({den_n},{den_k}) = {denominator}")]
    NotDivisible {
        num_n: usize,
        num_k: usize,
        den_n: usize,
        den_k: usize,
        numerator: String,
        denominator: String,
    },

    #[error("invalid block {block:?}: {reason}")]
    InvalidBlock { block: Vec<usize>, reason: String },

    #[error("block {block:?} has size {size}, expected {expected}")]
    BlockSize {
        block: Vec<usize>,
        size: usize,
        expected: usize,
    },

    #[error("design has {found} points, expected {expected}")]
    PointCount { found: usize, expected: usize },

    #[error("duplicate block {0:?} in orbit union")]
    DuplicateBlock(Vec<usize>),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error at {position}: {message}")]
    Parse { position: String, message: String },

    #[error("group has at least {reached} elements, exceeding the cap of {cap}")]
    GroupCapExceeded { reached: usize, cap: usize },

    #[error(
        "C({n},{s}) = {subsets} subsets exceeds the budget of {budget}; \
         prescribe a larger group or use a smaller instance"
    )]
    SubsetBudget {
        n: usize,
        s: usize,
        subsets: String,
        budget: u64,
    },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("invalid exact cover instance: {0}")]
    InvalidInstance(String),

    #[error("invalid extension problem: {0}")]
    InvalidExtension(String),

    #[error("search node cap of {0} exceeded")]
    NodeCapExceeded(u64),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}
