//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("modulus is not monic of degree {expected}")]
    BadModulusDegree { expected: usize },
    #[error("modulus is reducible over its ground field")]
    ReducibleModulus,
    #[error("field order {0} exceeds the supported bound 2^32")]
    FieldTooLarge(u128),
    #[error("value {value:#x} is not a canonical element of a field of order {order}")]
    NotAnElement { value: u64, order: u64 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("target field does not extend the source field")]
    NotASubfield,
    #[error("no extension tower declared (extension degree is 1 over itself)")]
    NoTower,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
