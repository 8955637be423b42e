use thiserror::Error;

pub type Result<T, E = SstError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SstError {
    #[error("alphabet size must be at least 2, got {0}")]
    InvalidAlphabet(usize),

    #[error("invalid source distribution: {0}")]
    InvalidSource(String),

    #[error("symbol {symbol} at position {position} is outside an alphabet of size {alphabet}")]
    SymbolOutOfRange {
        symbol: u32,
        position: usize,
        alphabet: usize,
    },

    #[error("strings must contain at least one symbol")]
    EmptyString,

    #[error("alphabet mismatch: expected size {expected}, got {actual}")]
    AlphabetMismatch { expected: usize, actual: usize },

    #[error("length mismatch: expected {expected} symbols, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("symbol {symbol} at position {position} has zero source probability")]
    ZeroProbabilitySymbol { symbol: u32, position: usize },

    #[error("rank {rank} is out of range (must be below {bound})")]
    RankOutOfRange { rank: String, bound: String },

    #[error("{compositions} compositions for length {n} over {m} symbols exceed the cap of {cap}")]
    CapacityExceeded {
        n: usize,
        m: usize,
        compositions: String,
        cap: u64,
    },

    #[error("string is not a member of the shaped set")]
    NotInShapedSet,

    #[error("malformed bitstream: {0}")]
    MalformedBitstream(String),

    #[error("invalid error model: {0}")]
    InvalidErrorModel(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
