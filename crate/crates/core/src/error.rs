use thiserror::Error;

/// Every failure the engine reports.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("no root of unity of order {m} in {field}")]
    NoSuchRoot { field: String, m: u64 },
    #[error("conductor {from} does not divide {to}")]
    BadConductor { from: u32, to: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid field specification: {0}")]
    BadField(String),
    #[error("group closure exceeded the order bound {0}")]
    OrderBoundExceeded(usize),
    #[error("generator matrix {0} is singular")]
    NonInvertible(usize),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error("rescaling factor is zero")]
    ZeroScale,
    #[error("characteristic {p} divides the group order {order}")]
    ModularCharacteristic { p: u64, order: usize },
    #[error("monomial count {count} exceeds the size guard {limit}")]
    SizeGuardExceeded { count: u128, limit: u128 },
    #[error("sequence length {0} exceeds the length guard 24")]
    LengthGuard(usize),
    #[error("group of order {0} exceeds the size guard 64")]
    SizeGuard(usize),
    #[error("unknown catalog entry or label: {0}")]
    UnknownEntry(String),
    #[error("validation failure: {0}")]
    ValidationFailure(String),
    #[error("check failure: {0}")]
    CheckFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("line {} column {}: {}", e.line(), e.column(), e))
    }
}
