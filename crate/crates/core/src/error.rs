use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus must be positive, got {0}")]
    InvalidModulus(u32),

    #[error("matrix {entries:?} is not invertible mod {modulus}")]
    NotInvertible { entries: [u32; 4], modulus: u32 },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u32, right: u32 },

    #[error("{divisor} does not divide {modulus}")]
    NotADivisor { divisor: u32, modulus: u32 },

    #[error("{divisor} is not a unitary divisor of {modulus}")]
    NotUnitaryDivisor { divisor: u32, modulus: u32 },

    #[error("modulus {modulus} exceeds the configured ceiling {ceiling} (set ISOSCREEN_MAX_MODULUS to raise it)")]
    ModulusTooLarge { modulus: u32, ceiling: u32 },

    #[error("determinant image has index {index} in (Z/{modulus}Z)^x; not a plausible rational Galois image")]
    DeterminantNotSurjective { modulus: u32, index: u64 },

    #[error(
        "orbit of size {size} for a vector of order {order} > 2 is odd; -I missing from the group"
    )]
    OddOrbit { size: u64, order: u32 },

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
