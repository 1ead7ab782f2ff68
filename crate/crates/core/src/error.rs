use thiserror::Error;

/// Why a line of an SLP file was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed header, expected `SLP <n> <root>`")]
    MalformedHeader,
    #[error("malformed rule line")]
    MalformedRule,
    #[error("expected rule index {expected}, found {found}")]
    UnexpectedIndex { expected: usize, found: usize },
    #[error("rule {index} references variable {reference}, which is not defined before it")]
    ForwardReference { index: usize, reference: usize },
    #[error("variable index {0} is out of range")]
    IndexOutOfRange(usize),
    #[error("terminal value {0} is not a byte")]
    ByteOutOfRange(u64),
    #[error("root {root} is out of range for {n} rules")]
    RootOutOfRange { root: usize, n: usize },
    #[error("expected {expected} rules, found {found}")]
    RuleCount { expected: usize, found: usize },
    #[error("missing trailing newline")]
    MissingTrailingNewline,
    #[error("derived length of variable {0} reaches 2^62")]
    LengthOverflow(usize),
}

/// A parse failure, located by 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),
    #[error("derived length reaches 2^62")]
    LengthOverflow,
    #[error("derived length {length} exceeds the limit {limit}")]
    ExpansionLimit { length: u64, limit: u64 },
    #[error("variable {0} is a terminal, not a pairing rule")]
    NotAPair(usize),
    #[error("variable {0} does not exist")]
    NoSuchVariable(usize),
    #[error("q must be at least {min}, got {q}")]
    InvalidQ { q: usize, min: usize },
    #[error("pattern must not be empty")]
    EmptyPattern,
    #[error("text must not be empty")]
    EmptyText,
    #[error("position {position} is out of range {lo}..={hi}")]
    PositionOutOfRange { position: u64, lo: u64, hi: u64 },
    #[error("weight array has length {weights}, text has length {text}")]
    WeightLength { weights: usize, text: usize },
    #[error("pattern has {0} occurrences, too many for exhaustive search")]
    TooManyOccurrences(usize),
    #[error("width {width} exceeds the materialized context width {kappa}")]
    WidthTooLarge { width: usize, kappa: usize },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
