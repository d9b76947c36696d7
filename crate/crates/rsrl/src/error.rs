use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("cannot build an automaton over an empty alphabet")]
    EmptyAlphabet,

    #[error("state budget exceeded ({0} states)")]
    StateBudget(usize),

    #[error("operation `{0}` requires a Kleene-star-free generator")]
    NotStarFree(&'static str),

    #[error("a substitution has no image for the empty word")]
    EmptyWord,

    #[error("symbol index {0} out of range for its alphabet")]
    InvalidSymbol(u32),

    #[error("union-free expansion exceeded {0} terms")]
    UnionFreeBudget(usize),

    #[error("matrix closure exceeded {0} elements")]
    ClosureBudget(usize),

    #[error("unfold recursion exceeded depth {0}")]
    UnfoldDepth(usize),

    #[error("position {0:?} does not index a star subexpression")]
    InvalidPosition(Vec<usize>),

    #[error("expression denotes the empty language and has no chain form")]
    EmptyChain,

    #[error("expression contains a union and is not union-free")]
    NotUnionFree,

    #[error("invalid construction: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
