use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is invalid, every cyclic factor needs modulus >= 2")]
    InvalidModulus(u64),

    #[error("group of order {0} is too large to index")]
    GroupTooLarge(u128),

    #[error("operands live on different groups")]
    GroupMismatch,

    #[error("element has {got} coordinates, group has {expected} cyclic factors")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate {value} out of range for modulus {modulus}")]
    CoordinateOutOfRange { value: u64, modulus: u32 },

    #[error("matrix entry ({row},{col}) = {value} does not define a homomorphism Z({from}) -> Z({to})")]
    NotAHomomorphism { row: usize, col: usize, value: u64, from: u32, to: u32 },

    #[error("element set is not a subgroup")]
    NotASubgroup,

    #[error("subgroup is not invariant under the endomorphism")]
    NotInvariant,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("endomorphism is not an automorphism")]
    NotAnAutomorphism,

    #[error("{what}: {requested} exceeds the configured cap of {limit}")]
    CapExceeded { what: &'static str, requested: u128, limit: u128 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("characteristic function is not real and strictly positive at dual index {0}")]
    NonPositiveCharacteristic(usize),

    #[error("kernel of I + alpha is trivial, no witness exists")]
    TrivialKernel,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cross-check mismatch: {0}")]
    CrossCheckMismatch(String),
}
