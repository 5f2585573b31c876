//! Exact modular arithmetic for u64 inputs with u128 intermediates:
//! powering, multiplicative orders, p-adic valuations, the two-branch
//! valuation formula for r^n - 1, deterministic primality and factorization.

use crate::{Error, Result};

/// base^exp mod m using the binary method. `m >= 1`; for m = 1 the result is 0.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be >= 1");
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = (base % modulus) as u128;
    let mut e = exp;
    let mut acc = 1u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

/// Smallest k >= 1 with a^k ≡ 1 (mod m), computed by peeling prime factors
/// off the Carmichael exponent λ(m). Requires gcd(a, m) = 1.
pub fn mult_order(a: u64, modulus: u64) -> Result<u64> {
    assert!(modulus >= 1, "modulus must be >= 1");
    if modulus == 1 {
        return Ok(1);
    }
    if gcd(a % modulus, modulus) != 1 {
        return Err(Error::NotCoprime { a, modulus });
    }
    let lam = carmichael(modulus);
    let mut order = lam;
    if lam > 1 {
        for (r, _) in factorize(lam).pairs() {
            while order % r == 0 && mod_pow(a, order / r, modulus) == 1 {
                order /= r;
            }
        }
    }
    debug_assert_eq!(mod_pow(a, order, modulus), 1);
    Ok(order)
}

/// Brute-force order loop. Independent of `mult_order`; kept for tests.
pub fn mult_order_brute(a: u64, modulus: u64) -> Result<u64> {
    assert!(modulus >= 1, "modulus must be >= 1");
    if modulus == 1 {
        return Ok(1);
    }
    if gcd(a % modulus, modulus) != 1 {
        return Err(Error::NotCoprime { a, modulus });
    }
    let m = modulus as u128;
    let step = (a % modulus) as u128;
    let mut acc = step;
    let mut k = 1u64;
    while acc != 1 {
        acc = acc * step % m;
        k += 1;
        assert!(k <= modulus, "order search ran past φ(m)");
    }
    Ok(k)
}

/// Carmichael function λ(m): the exponent of (Z/mZ)*.
fn carmichael(m: u64) -> u64 {
    let mut lam = 1u64;
    for (p, e) in factorize(m).pairs() {
        let contribution = if p == 2 {
            match e {
                1 => 1,
                2 => 2,
                _ => 1u64 << (e - 2),
            }
        } else {
            p.pow(e - 1) * (p - 1)
        };
        lam = lcm(lam, contribution);
    }
    lam
}

/// ν_p(n): the exponent of p in n. Sign-agnostic; rejects n = 0.
pub fn valuation(p: u64, n: i64) -> Result<u32> {
    assert!(p >= 2, "p must be a prime >= 2");
    if n == 0 {
        return Err(Error::ZeroArgument);
    }
    let mut v = 0u32;
    let mut n = n.unsigned_abs();
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Ok(v)
}

/// ν_p(r^n - 1) by the lifting formula:
/// ν₂(n) + ν₂(r²-1) - 1 if p = 2 and n is even, ν_p(n) + ν_p(r-1) otherwise.
/// Requires r ≡ 1 (mod p) and r ∉ {-1, 1}, n >= 1.
pub fn lte_valuation(p: u64, r: i64, n: u64) -> Result<u32> {
    assert!(n >= 1, "n must be >= 1");
    if r == 1 || r == -1 || r.rem_euclid(p as i64) != 1 % p as i64 {
        return Err(Error::BadLiftBase { p, r });
    }
    let vn = valuation(p, n as i64)?;
    if p == 2 && n % 2 == 0 {
        let r_sq_minus_1 = (r as i128) * (r as i128) - 1;
        let mut v = 0u32;
        let mut x = r_sq_minus_1.unsigned_abs();
        while x % 2 == 0 {
            x /= 2;
            v += 1;
        }
        Ok(vn + v - 1)
    } else {
        Ok(vn + valuation(p, r - 1)?)
    }
}

/// Deterministic Miller-Rabin for all u64 inputs.
///
/// Witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is sound for
/// n < 3.3·10^24, so in particular for every 64-bit n.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Complete prime factorization with primes in strictly increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn pairs(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.factors.iter().copied()
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn reconstruct(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc.checked_mul(p.checked_pow(e).unwrap()).unwrap())
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent_of(&self, p: u64) -> u32 {
        self.factors.iter().find(|&&(q, _)| q == p).map_or(0, |&(_, e)| e)
    }
}

/// Factor a 64-bit integer n >= 2: trial division by small primes, then
/// Pollard-Brent rho on what remains (exponential-time, fine at 64 bits).
pub fn factorize(n: u64) -> Factorization {
    assert!(n >= 2, "factorize requires n >= 2");
    let mut counts: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    for p in TrialPrimes::new() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            counts.push((p, e));
        }
        if p >= 1024 {
            break;
        }
    }
    if rest > 1 {
        if rest < 1024 * 1024 || is_prime(rest) {
            // below 1024² anything surviving trial division is prime
            bump(&mut counts, rest);
        } else {
            let mut stack = vec![rest];
            while let Some(m) = stack.pop() {
                if is_prime(m) {
                    bump(&mut counts, m);
                    continue;
                }
                let d = pollard_brent(m);
                stack.push(d);
                stack.push(m / d);
            }
        }
    }
    counts.sort_unstable();
    Factorization { factors: counts }
}

fn bump(counts: &mut Vec<(u64, u32)>, p: u64) {
    if let Some(entry) = counts.iter_mut().find(|e| e.0 == p) {
        entry.1 += 1;
    } else {
        counts.push((p, 1));
    }
}

/// 2, 3, then the 6k±1 wheel.
struct TrialPrimes {
    next: u64,
}

impl TrialPrimes {
    fn new() -> Self {
        TrialPrimes { next: 2 }
    }
}

impl Iterator for TrialPrimes {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        let out = self.next;
        self.next = match out {
            2 => 3,
            3 => 5,
            n if n % 6 == 5 => n + 2,
            n => n + 4,
        };
        Some(out)
    }
}

/// Pollard's rho with Brent's cycle detection. Returns a nontrivial factor
/// of composite odd m.
fn pollard_brent(m: u64) -> u64 {
    debug_assert!(m % 2 == 1 && !is_prime(m));
    let m128 = m as u128;
    for c in 1u64.. {
        let f = |x: u64| ((x as u128 * x as u128 + c as u128) % m128) as u64;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), m);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != m && d != 1 {
            return d;
        }
    }
    unreachable!()
}

/// All primes <= limit via a segmented odd-only sieve.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    if limit < 3 {
        return vec![2];
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root.max(3));
    let base_odd: Vec<u64> = base.iter().copied().filter(|&p| p > 2).collect();

    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    primes.push(2);
    const SEGMENT: u64 = 1 << 18; // odd numbers per segment
    let mut flags = vec![false; SEGMENT as usize];
    // half-index h represents the odd number 2h + 1
    let h_max = (limit - 1) / 2;
    let mut lo = 1u64;
    while lo <= h_max {
        let hi = (lo + SEGMENT - 1).min(h_max);
        let len = (hi - lo + 1) as usize;
        flags[..len].fill(true);
        for &p in &base_odd {
            let p_half = (p * p - 1) / 2;
            let mut j = if p_half >= lo {
                p_half
            } else {
                let rem = (lo - p_half) % p;
                if rem == 0 {
                    lo
                } else {
                    lo + p - rem
                }
            };
            while j <= hi {
                flags[(j - lo) as usize] = false;
                j += p;
            }
        }
        for (i, &f) in flags[..len].iter().enumerate() {
            if f {
                primes.push(2 * (lo + i as u64) + 1);
            }
        }
        lo = hi + 1;
    }
    primes
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    let mut flags = vec![true; (limit + 1) as usize];
    flags[0] = false;
    if limit >= 1 {
        flags[1] = false;
    }
    let mut i = 2usize;
    while i * i <= limit as usize {
        if flags[i] {
            let mut j = i * i;
            while j <= limit as usize {
                flags[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    flags
        .iter()
        .enumerate()
        .filter(|&(_, &f)| f)
        .map(|(n, _)| n as u64)
        .collect()
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 10 {
        return 8;
    }
    let x = limit as f64;
    (x / x.ln() * 1.2) as usize + 16
}

/// The first `count` primes >= 5, in increasing order.
pub fn first_primes_from_5(count: usize) -> Vec<u64> {
    if count == 0 {
        return Vec::new();
    }
    // Rosser-type bound on the (count+2)-th prime, with slack.
    let n = (count + 2).max(6) as f64;
    let mut limit = (n * (n.ln() + n.ln().ln())) as u64 + 100;
    loop {
        let primes: Vec<u64> = sieve_primes(limit)
            .into_iter()
            .filter(|&p| p >= 5)
            .take(count)
            .collect();
        if primes.len() == count {
            return primes;
        }
        limit = limit * 3 / 2;
    }
}
