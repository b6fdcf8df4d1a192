use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument outside the operation's domain (zero divisor, non-adjacent parents, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// Malformed or incomplete input data (parse failures, missing table entries).
    #[error("invalid input: {0}")]
    Input(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("S = {requested} exceeds the {method} method cap of {cap}")]
    CapExceeded {
        method: &'static str,
        requested: u64,
        cap: u64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
