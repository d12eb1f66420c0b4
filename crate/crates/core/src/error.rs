use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(String),

    #[error("polynomial degree {0} is below 2")]
    DegreeTooSmall(usize),

    #[error("squarefree required: polynomial has a repeated factor over Q")]
    NotSquarefree,

    #[error("polynomial is reducible: {0}")]
    Reducible(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid discriminant override: {0}")]
    Discriminant(String),

    #[error("norm table too small: need threshold {needed:.6e}, table covers {available:.6e}")]
    Coverage { needed: f64, available: f64 },

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("integrity error: {0}")]
    Integrity(String),

    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
