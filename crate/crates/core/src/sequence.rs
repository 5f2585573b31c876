//! The Browkin-Salajan sequence u_q(j) = (3^j - q*(-1)^j)/4, exactly and
//! modulo any m.
//!
//! Terms satisfy u_q(j) = 2u_q(j-1) + 3u_q(j-2) for j >= 3 and alternate in
//! parity. Terms can be negative when q ≡ 3 (mod 4); residues are always
//! normalized to [0, m).

use crate::modarith::{is_prime, mod_pow};
use crate::{Error, Result};
use num_bigint::BigInt;
use serde::Serialize;

/// A prime q >= 5 together with its signed companion q* = (-1)^((q-1)/2)·q.
///
/// q* ≡ 1 (mod 4) always, and |q*| = q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SequenceSpec {
    q: u64,
    q_star: i64,
}

impl SequenceSpec {
    /// Validates q and derives q*. Rejects q < 5, composite q, and q too
    /// large for 64-bit modular work.
    pub fn new(q: u64) -> Result<Self> {
        if q < 5 || q > (1 << 62) || !is_prime(q) {
            return Err(Error::InvalidQ(q));
        }
        let q_star = if (q - 1) / 2 % 2 == 0 { q as i64 } else { -(q as i64) };
        debug_assert_eq!(q_star.rem_euclid(4), 1);
        Ok(SequenceSpec { q, q_star })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_star(&self) -> i64 {
        self.q_star
    }

    /// The exact term u_q(j) = (3^j - q*(-1)^j)/4 as a big integer. j >= 1.
    pub fn term_exact(&self, j: u64) -> BigInt {
        assert!(j >= 1, "terms are indexed from 1");
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let numerator = BigInt::from(3).pow(u32::try_from(j).expect("index fits u32"))
            - BigInt::from(self.q_star * sign);
        debug_assert!((&numerator % 4) == BigInt::from(0));
        numerator / 4
    }

    /// u_q(j) mod m, without big integers. m may be even, so instead of
    /// inverting 4 we reduce the numerator mod 4m (it is divisible by 4)
    /// and divide the representative by 4.
    pub fn term_mod(&self, j: u64, m: u64) -> u64 {
        assert!(j >= 1, "terms are indexed from 1");
        assert!(m >= 1 && m <= (1 << 62), "modulus out of range");
        let four_m = 4 * m;
        let pow3 = mod_pow(3, j, four_m);
        let sign = if j % 2 == 0 { 1 } else { -1 };
        let sub = (self.q_star * sign).rem_euclid(four_m as i64) as u64;
        let t = (pow3 + four_m - sub) % four_m;
        debug_assert_eq!(t % 4, 0);
        t / 4
    }

    /// Iterator over u_q(1), u_q(2), ... reduced mod m, driven by the
    /// recurrence u(j) = 2u(j-1) + 3u(j-2). This is a separate computation
    /// path from `term_mod` and serves as its cross-check.
    pub fn residues(&self, m: u64) -> Residues {
        assert!(m >= 1, "modulus must be >= 1");
        let u1 = ((3 + self.q_star as i128) / 4).rem_euclid(m as i128) as u64;
        let u2 = ((9 - self.q_star as i128) / 4).rem_euclid(m as i128) as u64;
        Residues {
            m,
            wide: m >= (1 << 31),
            next: u1,
            after: u2,
        }
    }
}

/// See [`SequenceSpec::residues`].
pub struct Residues {
    m: u64,
    wide: bool,
    next: u64,
    after: u64,
}

impl Iterator for Residues {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let out = self.next;
        let fresh = if self.wide {
            ((2 * self.after as u128 + 3 * out as u128) % self.m as u128) as u64
        } else {
            (2 * self.after + 3 * out) % self.m
        };
        self.next = self.after;
        self.after = fresh;
        Some(out)
    }
}
