//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is smaller than 2")]
    InvalidModulus(u64),

    #[error("group order exceeds the supported limit of 2^48")]
    OrderOverflow,

    #[error("group order {n} exceeds the dense-table cap {cap}")]
    OrderTooLarge { n: u64, cap: u64 },

    #[error("coordinate {value} out of range for modulus {modulus}")]
    CoordinateOutOfRange { value: u64, modulus: u64 },

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: u64, order: u64 },

    #[error("element has {got} coordinates, group has {expected} factors")]
    GroupMismatch { expected: usize, got: usize },

    #[error("ball coverage threshold unreachable: reached {reached} of {order} elements")]
    ThresholdUnreachable { reached: u64, order: u64 },

    #[error("no radius R satisfies C({k}, R) >= {target}")]
    NoBinomialRadius { k: usize, target: u64 },

    #[error("relaxation-time certificate needs k <= log3(n/2); got k = {k}, n = {n}")]
    CertificateWindow { k: usize, n: u64 },

    #[error("enumeration budget exceeded: {needed} states, cap {cap}")]
    BudgetExceeded { needed: u128, cap: u128 },

    #[error("no typical samples were drawn; widen the rate parameter")]
    NoTypicalSamples,

    #[error("cannot parse group spec {0:?}")]
    ParseGroupSpec(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
