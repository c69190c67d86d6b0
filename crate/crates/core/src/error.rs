use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("multiplicity vector has length {found}, model has r = {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("h0 formula needs a >= 0 and b >= a*e, got a = {a}, b = {b}, e = {e}")]
    Domain { a: BigInt, b: BigInt, e: u64 },
    #[error("unknown point position `{0}`")]
    UnknownPosition(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}
