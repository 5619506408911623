use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("words must contain at least one symbol")]
    EmptyWord,
    #[error("{0}")]
    BadToken(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("the specified subshift is empty")]
    EmptySubshift,
    #[error("symbol {symbol} lies outside the alphabet of size {size}")]
    SymbolOutOfRange { symbol: u32, size: usize },
    #[error("answer not determined at probe depth {0}; raise the depth")]
    UndeterminedDepth(usize),
    #[error("no property G certificate found up to depth {0}")]
    NoCertificate(usize),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
