use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: expected a permutation of {{1..{expected}}}, found degree {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("not a valid permutation: {0}")]
    InvalidPermutation(String),

    #[error("permutation does not preserve the {{W, M}} partition: {0}")]
    OutsideGstar(String),

    #[error("group is not contained in G*")]
    GroupOutsideGstar,

    #[error("{0} is not a matching: {1}")]
    NotAMatching(String, String),

    #[error("not a valid linear order: {0}")]
    InvalidOrder(String),

    #[error("{0} is not in the ground set of the order")]
    RankDomain(usize),

    #[error("invalid preference profile: {0}")]
    InvalidProfile(String),

    #[error("exhaustive enumeration refused for n={n}: the space holds {count} elements (limit n <= {limit})")]
    ExhaustiveTooLarge { n: usize, count: u128, limit: usize },

    #[error("construction requires n odd, got n={0}")]
    EvenSize(usize),

    #[error("construction requires n >= {min}, got n={n}")]
    TooSmall { n: usize, min: usize },

    #[error("group is not semiregular: {0} fixes a point")]
    NotSemiregular(String),

    #[error("mechanism {mechanism} is not {group}-symmetric; witness profile:\n{witness}")]
    NotUSymmetric {
        mechanism: String,
        group: String,
        witness: String,
    },

    #[error("profile has no entry in the mechanism table (table incomplete or wrong group)")]
    ProfileNotInTable,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("mechanism table invalid: {0}")]
    TableInvalid(String),

    #[error("internal invariant refuted: {0}")]
    Refuted(String),
}

pub type Result<T> = std::result::Result<T, Error>;
