use crate::poly::IntPolynomial;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("constant polynomial")]
    ConstantPolynomial,
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is reducible; minimal polynomial required")]
    Reducible,
    #[error("bad prime {0}: divides leading coefficient or residue not squarefree")]
    BadPrime(u64),
    #[error("quotient-ring elements have different moduli")]
    ModulusMismatch,
    /// Failed inversion in Q[x]/(f). The witness is a nontrivial factor of the
    /// modulus discovered by the extended gcd, i.e. a proof of reducibility.
    #[error("element not invertible mod f; discovered factor of degree {}", .witness.degree().unwrap_or(0))]
    NotInvertible { witness: IntPolynomial },
    #[error("division by an enclosure containing zero")]
    IntervalDivByZero,
    #[error("logarithm requires a strictly positive enclosure")]
    LogDomain,
    #[error("fractional power requires a strictly positive enclosure")]
    PowDomain,
    #[error("square root requires a nonnegative enclosure")]
    SqrtDomain,
    #[error("linearly dependent rows passed to lattice reduction")]
    DependentRows,
    #[error("precision cap of {cap} bits reached without certification")]
    PrecisionCap { cap: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
