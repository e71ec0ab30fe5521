use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("no documents supplied")]
    EmptyInput,

    #[error("symbol {symbol} in document {doc} is outside the alphabet [0, {sigma})")]
    SymbolOutOfRange { doc: usize, symbol: u64, sigma: u64 },

    #[error("alphabet of {sigma} symbols plus {m} sentinels does not fit in a 32-bit symbol")]
    AlphabetTooLarge { sigma: u64, m: usize },

    #[error("could not parse token {token:?}")]
    BadToken { token: String },

    #[error("document threshold d = {d} must satisfy 2 <= d <= m = {m}")]
    BadThreshold { d: usize, m: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("range [{offset}, {offset}+{len}) of window {window} crosses a sentinel or group boundary")]
    CrossesBoundary { window: usize, offset: usize, len: usize },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
