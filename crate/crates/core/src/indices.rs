//! Incongruence indices of u_q and the machinery built on them.
//!
//! The incongruence index ι_q(m) is the largest k such that
//! u_q(1), ..., u_q(k) are pairwise incongruent mod m. For primes p with
//! ord_p(9) = (p-1)/2 (the set P), the maximum of ι_q(p) over all admissible
//! q — the universal incongruence index — equals h(p), the largest r for
//! which the cross-parity collision targets S(p;r) do not cover Z/pZ.

use crate::modarith::{factorize, is_prime, mod_pow, mult_order};
use crate::sequence::SequenceSpec;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::HashSet;

/// Largest k with u_q(1..k) pairwise incongruent mod m. Always <= m, so at
/// most m + 1 terms are scanned; the seen-set is a dense array for m up to
/// 10^7 and a hash set beyond.
pub fn incongruence_index(spec: &SequenceSpec, m: u64) -> u64 {
    assert!(m >= 1, "modulus must be >= 1");
    const DENSE_LIMIT: u64 = 10_000_000;
    let mut residues = spec.residues(m);
    if m <= DENSE_LIMIT {
        let mut seen = vec![false; m as usize];
        for j in 1..=m + 1 {
            let r = residues.next().expect("infinite iterator") as usize;
            if seen[r] {
                return j - 1;
            }
            seen[r] = true;
        }
    } else {
        let mut seen = HashSet::new();
        for j in 1..=m + 1 {
            let r = residues.next().expect("infinite iterator");
            if !seen.insert(r) {
                return j - 1;
            }
        }
    }
    unreachable!("pigeonhole: a collision must occur within m + 1 terms")
}

/// Which part of P = P1 ∪ P2 ∪ P3 a prime belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PPart {
    /// p ≡ 1 (mod 4) and ord_p(3) = p - 1
    P1,
    /// p ≡ 3 (mod 4) and ord_p(3) = (p - 1)/2
    P2,
    /// p ≡ 3 (mod 4) and ord_p(3) = p - 1
    P3,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PMembership {
    pub in_p: bool,
    pub part: PPart,
}

/// Membership of p in P relative to a fixed q (p = q is excluded from P).
pub fn p_membership(p: u64, q: u64) -> Result<PMembership> {
    if p <= 3 || !is_prime(p) || p == q {
        return Err(Error::InvalidP(p));
    }
    if q < 5 || !is_prime(q) {
        return Err(Error::InvalidQ(q));
    }
    Ok(classify_p(p))
}

/// The q-free membership test: p > 3 prime with ord_p(9) = (p-1)/2.
pub fn is_in_p(p: u64) -> bool {
    p > 3 && is_prime(p) && classify_p(p).in_p
}

fn classify_p(p: u64) -> PMembership {
    let ord3 = mult_order(3, p).expect("p > 3 prime");
    let ord9 = if ord3 % 2 == 0 { ord3 / 2 } else { ord3 };
    let in_p = ord9 == (p - 1) / 2;
    let part = if !in_p {
        PPart::None
    } else if p % 4 == 1 {
        PPart::P1
    } else if ord3 == (p - 1) / 2 {
        PPart::P2
    } else {
        PPart::P3
    };
    debug_assert_eq!(in_p, part != PPart::None);
    PMembership { in_p, part }
}

/// Membership of q in Q = {q > 5 : q ≡ 3 (mod 4), ord_q(3) = (q-1)/2},
/// together with α_q = (3^((q-1)/2) - 1)/q reduced mod q. The exact α_q
/// outgrows fixed-width integers quickly; its residue mod q is the only
/// quantity the q² closed form needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QMembership {
    pub in_q: bool,
    pub alpha_q_mod_q: Option<u64>,
    /// 3^((q-1)/2) ≡ 1 (mod q²), equivalently α_q ≡ 0 (mod q).
    pub wieferich_like: bool,
}

pub fn q_membership(q: u64) -> Result<QMembership> {
    if q < 5 || q > (1 << 31) || !is_prime(q) {
        return Err(Error::InvalidQ(q));
    }
    let in_q = q > 5 && q % 4 == 3 && mult_order(3, q)? == (q - 1) / 2;
    if !in_q {
        return Ok(QMembership {
            in_q: false,
            alpha_q_mod_q: None,
            wieferich_like: false,
        });
    }
    let pow = mod_pow(3, (q - 1) / 2, q * q);
    debug_assert_eq!(pow % q, 1, "ord_q(3) = (q-1)/2 forces 3^((q-1)/2) ≡ 1 mod q");
    let alpha = (pow - 1) / q;
    Ok(QMembership {
        in_q: true,
        alpha_q_mod_q: Some(alpha),
        wieferich_like: alpha == 0,
    })
}

/// S(p;r) = {3·9^x - 9^y (mod p) : 1 <= 2x, 2y - 1 <= r} ∪ {0}: the targets
/// hit by cross-parity collisions among the first r terms.
pub fn cross_parity_targets(p: u64, r: u64) -> HashSet<u64> {
    assert!(p > 3, "p must exceed 3");
    let x_max = r / 2;
    let y_max = (r + 1) / 2;
    let mut pw = Vec::with_capacity(x_max.max(y_max) as usize + 1);
    pw.push(1u64);
    for _ in 0..x_max.max(y_max) {
        pw.push(pw.last().unwrap() * 9 % p);
    }
    let mut out = HashSet::new();
    out.insert(0);
    for x in 1..=x_max as usize {
        for y in 1..=y_max as usize {
            out.insert((3 * pw[x] % p + p - pw[y]) % p);
        }
    }
    out
}

/// The universal incongruence index h(p) = max{r : S(p;r) != Z/pZ} for
/// p in P, found by growing r until S(p;r) covers everything. The search is
/// capped at r = 2p; fullness is guaranteed well before that, so hitting the
/// cap is reported as an error.
pub fn universal_index(p: u64) -> Result<u64> {
    if p <= 3 || !is_prime(p) {
        return Err(Error::InvalidP(p));
    }
    if !is_in_p(p) {
        return Err(Error::NotInP(p));
    }
    let cap = 2 * p;
    let mut pw = vec![1u64; 1];
    let mut covered = vec![false; p as usize];
    covered[0] = true;
    let mut count = 1u64;
    for r in 1..=cap {
        // growing r by one admits new index pairs on one side only
        if r % 2 == 0 {
            let x = (r / 2) as usize;
            while pw.len() <= x {
                pw.push(pw.last().unwrap() * 9 % p);
            }
            let y_max = ((r + 1) / 2) as usize;
            for y in 1..=y_max {
                mark(&mut covered, &mut count, (3 * pw[x] % p + p - pw[y]) % p);
            }
        } else {
            let y = ((r + 1) / 2) as usize;
            while pw.len() <= y {
                pw.push(pw.last().unwrap() * 9 % p);
            }
            let x_max = (r / 2) as usize;
            for x in 1..=x_max {
                mark(&mut covered, &mut count, (3 * pw[x] % p + p - pw[y]) % p);
            }
        }
        if count == p {
            return Ok(r - 1);
        }
    }
    Err(Error::SearchCapExceeded { what: "universal index", cap })
}

fn mark(covered: &mut [bool], count: &mut u64, v: u64) {
    if !covered[v as usize] {
        covered[v as usize] = true;
        *count += 1;
    }
}

/// Closed form for ι_q(q²) when q ∈ Q and 3^((q-1)/2) ≢ 1 (mod q²):
/// with m the least exponent solving 9^m ≡ 2/α_q (resp. -6/α_q) mod q
/// according as 2α_q is a quadratic residue or not, the index is
/// 2m - 1 + (q-1)/2 (resp. 2m - 2 + (q-1)/2).
pub fn q_squared_index_closed(q: u64) -> Result<u64> {
    let membership = q_membership(q)?;
    if !membership.in_q {
        return Err(Error::NotInQ(q));
    }
    let alpha = membership.alpha_q_mod_q.expect("in Q");
    if alpha == 0 {
        return Err(Error::WieferichLikeExcluded(q));
    }
    let half = (q - 1) / 2;
    let residue_case = mod_pow(2 * alpha % q, half, q) == 1;
    let alpha_inv = mod_pow(alpha, q - 2, q);
    let target = if residue_case {
        2 * alpha_inv % q
    } else {
        (q - 6 * alpha_inv % q) % q
    };
    let mut pw = 1u64;
    for m in 1..=half {
        pw = (pw as u128 * 9 % q as u128) as u64;
        if pw == target {
            let index = if residue_case { 2 * m - 1 + half } else { 2 * m - 2 + half };
            debug_assert!(index <= 3 * half - 1);
            return Ok(index);
        }
    }
    unreachable!("the target is a square mod q, hence a power of 9")
}

/// Smallest primitive root g >= 2 modulo a prime p.
pub fn primitive_root(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::InvalidP(p));
    }
    let factors: Vec<u64> = factorize(p - 1).primes().collect();
    for g in 2..p {
        if factors.iter().all(|&r| mod_pow(g, (p - 1) / r, p) != 1) {
            return Ok(g);
        }
    }
    unreachable!("every prime has a primitive root")
}

/// Size of A_g(p;a,b,c) = {(x,y) ∈ Z_{p-1} × Z_{p-1} : a·g^x - b·g^y ≡ c}
/// and the largest magnitude attained by a nontrivial additive character sum
/// over it, computed by direct complex summation.
#[derive(Debug, Clone, Copy)]
pub struct CharsumStats {
    pub set_size: u64,
    pub max_nontrivial: f64,
}

pub fn charsum(p: u64, a: i64, b: i64, c: i64, g: u64) -> Result<CharsumStats> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidP(p));
    }
    let reduce = |v: i64| v.rem_euclid(p as i64) as u64;
    let (a, b, c) = (reduce(a), reduce(b), reduce(c));
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::DivisibleByP { p });
    }
    if mult_order(g, p)? != p - 1 {
        return Err(Error::NotPrimitiveRoot { p, g });
    }

    let n = (p - 1) as usize;
    let mut gp = vec![1u64; n];
    for x in 1..n {
        gp[x] = gp[x - 1] * g % p;
    }
    let mut members: Vec<(usize, usize)> = Vec::with_capacity(n);
    for x in 0..n {
        for y in 0..n {
            if (a * gp[x] % p + p - b * gp[y] % p) % p == c {
                members.push((x, y));
            }
        }
    }

    let tau = 2.0 * std::f64::consts::PI / n as f64;
    let (cos, sin): (Vec<f64>, Vec<f64>) =
        (0..n).map(|k| ((tau * k as f64).cos(), (tau * k as f64).sin())).unzip();
    let mut max_mag = 0.0f64;
    for s in 0..n {
        for t in 0..n {
            if s == 0 && t == 0 {
                continue;
            }
            let mut re = 0.0;
            let mut im = 0.0;
            for &(x, y) in &members {
                let k = (s * x + t * y) % n;
                re += cos[k];
                im += sin[k];
            }
            max_mag = max_mag.max(re.hypot(im));
        }
    }
    Ok(CharsumStats { set_size: members.len() as u64, max_nontrivial: max_mag })
}
