//! Discriminator theory of the Browkin-Salajan sequences.
//!
//! For a prime `q >= 5` put `q* = (-1)^((q-1)/2) * q`. The Browkin-Salajan
//! sequence for `q` is `u_q(j) = (3^j - q*(-1)^j)/4`; its terms are pairwise
//! distinct, so for every `n` there is a smallest modulus `m` under which
//! `u_q(1), ..., u_q(n)` are pairwise incongruent. That smallest `m` is the
//! discriminator `D_q(n)`.
//!
//! This crate computes `D_q(n)` both by brute force and by the closed form
//! (minimum of power-of-2 and power-of-`q` candidates, with the lone
//! exceptional value `D_q(5) = 7` for `q ≡ ±1 (mod 28)`), along with the
//! supporting machinery: periods and pre-periods of `u_q` modulo `d`,
//! incongruence indices, universal incongruence indices `h(p)`, special-prime
//! classification (Artin / Fermat / Mirimanoff), and empirical densities of
//! the eight prime classes the closed form gives rise to.

pub mod cli;
pub mod discriminator;
pub mod indices;
pub mod modarith;
pub mod period;
pub mod primeclass;
pub mod sequence;
pub mod verify;

pub use discriminator::{disc_brute, disc_closed, disc_table, DiscriminatorResult, RunLengthTable};
pub use primeclass::{classify, PrimeClassification};
pub use sequence::SequenceSpec;

use std::fmt;

/// Errors for contract violations across the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `q` is not a prime `>= 5` (or is too large to handle).
    InvalidQ(u64),
    /// `p` is not an admissible prime for the requested operation.
    InvalidP(u64),
    /// An argument that must be nonzero was zero.
    ZeroArgument,
    /// `mult_order` requires gcd(a, m) = 1.
    NotCoprime { a: u64, modulus: u64 },
    /// `lte_valuation` requires r ≡ 1 (mod p) and r ∉ {-1, 1}.
    BadLiftBase { p: u64, r: i64 },
    /// Modulus out of the supported range.
    BadModulus(u64),
    /// No period confirmed within the simulation horizon.
    NoPeriodWithinHorizon { d: u64, horizon: u64 },
    /// The simulation horizon would exceed the hard cap 4d².
    HorizonCapExceeded { d: u64, horizon: u64, cap: u64 },
    /// `p` is not in the set P (ord_p(9) = (p-1)/2 fails).
    NotInP(u64),
    /// `q` is not in the set Q (q > 5, q ≡ 3 mod 4, ord_q(3) = (q-1)/2).
    NotInQ(u64),
    /// The excluded case 3^((q-1)/2) ≡ 1 (mod q²).
    WieferichLikeExcluded(u64),
    /// Search exceeded its checked cap.
    SearchCapExceeded { what: &'static str, cap: u64 },
    /// One of a, b, c is divisible by p.
    DivisibleByP { p: u64 },
    /// g is not a primitive root modulo p.
    NotPrimitiveRoot { p: u64, g: u64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidQ(q) => write!(f, "q = {q} is not a supported prime >= 5"),
            Error::InvalidP(p) => write!(f, "p = {p} is not an admissible prime here"),
            Error::ZeroArgument => write!(f, "argument must be nonzero"),
            Error::NotCoprime { a, modulus } => {
                write!(f, "gcd({a}, {modulus}) > 1: multiplicative order undefined")
            }
            Error::BadLiftBase { p, r } => {
                write!(f, "r = {r} violates r ≡ 1 (mod {p}), r ∉ {{-1, 1}}")
            }
            Error::BadModulus(m) => write!(f, "modulus {m} out of supported range"),
            Error::NoPeriodWithinHorizon { d, horizon } => {
                write!(f, "no period of u_q mod {d} confirmed within horizon {horizon}")
            }
            Error::HorizonCapExceeded { d, horizon, cap } => {
                write!(f, "horizon {horizon} for d = {d} exceeds hard cap {cap}")
            }
            Error::NotInP(p) => write!(f, "p = {p} is not in P: ord_p(9) != (p-1)/2"),
            Error::NotInQ(q) => write!(f, "q = {q} is not in Q"),
            Error::WieferichLikeExcluded(q) => {
                write!(f, "q = {q} has 3^((q-1)/2) ≡ 1 (mod q²); closed form does not apply")
            }
            Error::SearchCapExceeded { what, cap } => {
                write!(f, "{what} exceeded its cap {cap}")
            }
            Error::DivisibleByP { p } => write!(f, "a, b, c must all be nonzero mod {p}"),
            Error::NotPrimitiveRoot { p, g } => {
                write!(f, "{g} is not a primitive root modulo {p}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
