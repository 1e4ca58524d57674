use alloc::string::String;

use crate::Word;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    BadShape(String),
    #[error("symbol {symbol} has an empty {line}")]
    DeadSymbol { symbol: usize, line: &'static str },
    #[error("transition matrix is not irreducible: symbol {to} is unreachable from symbol {from}")]
    NotIrreducible { from: usize, to: usize },
    #[error("{what}: {requested} exceeds the configured cap {cap}")]
    RangeTooLarge { what: &'static str, requested: u64, cap: u64 },
    #[error("word {0} is not admissible")]
    InadmissibleWord(Word),
    #[error("not a group: {reason} (witness {witness:?})")]
    NotAGroup { reason: &'static str, witness: [usize; 3] },
    #[error("permutation closure exceeds {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("operation requires a finite group")]
    InfiniteGroup,
    #[error("operation requires a free abelian group")]
    FiniteGroup,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown group element {0:?}")]
    UnknownElement(String),
    #[error("cocycle does not match the system: {0}")]
    CocycleMismatch(String),
    #[error("block graph is not strongly connected: block {to} unreachable from block {from}")]
    NotStronglyConnected { from: usize, to: usize },
    #[error("a finite group has no nonzero homomorphism into the reals")]
    TorsionAlpha,
    #[error("singular matrix at {0}")]
    SingularMatrix(String),
    #[error("declared algebra is not closed under brackets: [X{i}, X{j}] leaves the span by {residual:e}")]
    AlgebraNotClosed { i: usize, j: usize, residual: f64 },
    #[error("alpha cannot be central: {0}")]
    CentralityImpossible(String),
    #[error("alpha is not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("oracle state space {states} exceeds {cap}")]
    StateSpaceTooLarge { states: usize, cap: usize },
}
