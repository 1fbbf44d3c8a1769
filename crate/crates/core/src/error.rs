use thiserror::Error;

use crate::homology::AbelianInvariants;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },

    #[error("undeclared generator `{name}` at line {line}, column {col}")]
    UndeclaredGenerator { name: String, line: usize, col: usize },

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid generator name `{0}`")]
    InvalidGeneratorName(String),

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("relator {0} is empty after free reduction")]
    EmptyRelator(usize),

    #[error("word uses generator index {index} but only {count} generators exist")]
    GeneratorOutOfRange { index: usize, count: usize },

    #[error("generator name `{0}` collides with an existing generator")]
    NameCollision(String),

    #[error("group is not perfect: H1 = {0}")]
    NotPerfect(AbelianInvariants),

    #[error("coset enumeration did not close within {0} cosets")]
    CosetLimitExceeded(usize),

    #[error("filler word scheme could not reach C'(1/6); last offset tried {offset}")]
    SchemeExhausted { offset: u64 },

    #[error("malformed tubular bundle: {0}")]
    MalformedBundle(String),

    #[error("catalog is only complete up to order 2520, requested {0}")]
    CatalogBound(u64),

    #[error("unknown catalog group `{0}`")]
    UnknownGroup(String),

    #[error("PSL(2,{0}) is not supported")]
    UnsupportedField(u64),

    #[error("alternating group needs degree >= 3, got {0}")]
    DegreeTooSmall(usize),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("inconsistent epimorphism counts: {0}")]
    Inconsistent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
