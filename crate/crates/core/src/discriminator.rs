//! The discriminator D_q(n): brute-force oracle, closed form, the set of
//! values it attains, the admissible q-exponents, and run-length tables.
//!
//! D_q(n) always lies in [n, 2n-1], is never divisible by 3, and is a power
//! of 2, a power of q, or the single exceptional value 7 (n = 5,
//! q ≡ ±1 mod 28).

use crate::modarith::is_prime;
use crate::primeclass::{classify, ClosedFormCase};
use crate::sequence::SequenceSpec;
use num_bigint::BigUint;
use serde::Serialize;

/// Exact D_q(n) by scanning candidate moduli m = n, n+1, ..., 2n-1 and
/// checking each with a seen-set. Every m < n fails by pigeonhole and some
/// power of 2 in [n, 2n-1] succeeds, so the scan always terminates. The scan
/// deliberately skips nothing (not even multiples of 3): it is the
/// assumption-free oracle the closed form is tested against.
pub fn disc_brute(spec: &SequenceSpec, n: u64) -> u64 {
    assert!(n >= 1, "n must be >= 1");
    if n == 1 {
        return 1;
    }
    assert!(n <= 1 << 30, "brute-force scan capped at n = 2^30");
    let mut stamp = vec![0u32; (2 * n) as usize];
    let mut generation = 0u32;
    'candidates: for m in n..2 * n {
        generation += 1;
        let mut residues = spec.residues(m);
        for _ in 0..n {
            let r = residues.next().expect("infinite iterator") as usize;
            if stamp[r] == generation {
                continue 'candidates;
            }
            stamp[r] = generation;
        }
        return m;
    }
    unreachable!("no discriminating modulus in [n, 2n-1] for q = {}, n = {n}", spec.q())
}

/// Which candidate produced the discriminator value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    PowerOfTwo,
    PowerOfQ,
    Exceptional7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DiscriminatorResult {
    pub n: u64,
    pub value: u64,
    pub branch: Branch,
    /// Smallest 2^e >= n.
    pub pow2_candidate: u64,
    /// Smallest admissible power of q for the prime's class, when the class
    /// admits one.
    pub powq_candidate: Option<u128>,
}

/// Closed form for D_q(n).
///
/// Exceptional case first: n = 5, q ≡ ±1 (mod 28) gives 7. Otherwise the
/// value is the smaller of the power-of-2 candidate (least 2^e >= n) and the
/// power-of-q candidate, which exists only when q is Artin: least q^f with
/// q^f·(q-1) >= q·n if q is not Mirimanoff, q itself if q is Mirimanoff but
/// not Fermat and q >= n + 1, and nothing otherwise.
pub fn disc_closed(spec: &SequenceSpec, n: u64) -> DiscriminatorResult {
    assert!(n >= 1 && n < 1 << 62, "n out of range");
    let q = spec.q();
    let pow2 = n.next_power_of_two();
    let class = classify(q).expect("spec holds a valid prime");
    let powq: Option<u128> = match class.closed_form_case {
        ClosedFormCase::ArtinNotMirimanoff => {
            let target = q as u128 * n as u128;
            let mut qf = q as u128;
            while qf * (q as u128 - 1) < target {
                qf = qf.checked_mul(q as u128).expect("candidate fits u128");
            }
            Some(qf)
        }
        ClosedFormCase::ArtinMirimanoffNotFermat => (q >= n + 1).then_some(q as u128),
        ClosedFormCase::ArtinMirimanoffFermat | ClosedFormCase::NotArtin => None,
    };
    if n == 5 && class.mod28_exceptional {
        return DiscriminatorResult {
            n,
            value: 7,
            branch: Branch::Exceptional7,
            pow2_candidate: pow2,
            powq_candidate: powq,
        };
    }
    match powq {
        Some(qf) if qf < pow2 as u128 => DiscriminatorResult {
            n,
            value: qf as u64,
            branch: Branch::PowerOfQ,
            pow2_candidate: pow2,
            powq_candidate: powq,
        },
        _ => DiscriminatorResult {
            n,
            value: pow2,
            branch: Branch::PowerOfTwo,
            pow2_candidate: pow2,
            powq_candidate: powq,
        },
    }
}

/// Closed small-n values: D_q(1..=4) = 1, 2, 4, 4; D_q(5) = 7 iff q = 7 or
/// q ≡ ±1 (mod 28), else 8; D_q(6) = 7 iff q = 7, else 8.
pub fn small_n(spec: &SequenceSpec, n: u64) -> u64 {
    assert!((1..=6).contains(&n), "small_n covers 1 <= n <= 6");
    let q = spec.q();
    match n {
        1 => 1,
        2 => 2,
        3 | 4 => 4,
        5 => {
            if q == 7 || q % 28 == 1 || q % 28 == 27 {
                7
            } else {
                8
            }
        }
        _ => {
            if q == 7 {
                7
            } else {
                8
            }
        }
    }
}

/// The exponents f >= 1 for which the interval [(q-1)q^(f-1), q^f] contains
/// no power of 2; exactly these q^f arise as discriminator values (for Artin
/// non-Mirimanoff q, f >= 2, plus f = 1 via the Fermat criterion).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentSet {
    pub q: u64,
    pub members: Vec<u64>,
}

impl ExponentSet {
    pub fn contains(&self, f: u64) -> bool {
        self.members.binary_search(&f).is_ok()
    }
}

/// Exact arbitrary-precision interval test for every f <= max_f. No floating
/// point anywhere: q = 5, f = 1 sits exactly on the boundary and would be
/// misclassified by doubles.
pub fn f_exponents(q: u64, max_f: u64) -> ExponentSet {
    assert!(q >= 5 && is_prime(q), "q must be a prime >= 5");
    assert!(max_f >= 1);
    let mut members = Vec::new();
    let mut q_pow = BigUint::from(1u32); // q^(f-1)
    for f in 1..=max_f {
        let lo = &q_pow * (q - 1);
        let hi = &q_pow * q;
        // a power of 2 lies in [lo, hi] iff ceil(log2 lo) <= floor(log2 hi),
        // i.e. bits(lo - 1) < bits(hi)
        let has_power_of_two = (lo - 1u32).bits() < hi.bits();
        if !has_power_of_two {
            members.push(f);
        }
        q_pow = hi;
    }
    ExponentSet { q, members }
}

/// All discriminator values <= bound: every power of 2; the value 7 when
/// q = 7 or q ≡ ±1 (mod 28); q itself when q is Artin and not Fermat; and
/// q^f for f >= 2 in the exponent set when q is Artin and not Mirimanoff.
pub fn value_set(q: u64, bound: u64) -> Vec<u64> {
    assert!(q >= 5 && is_prime(q), "q must be a prime >= 5");
    let mut out: Vec<u64> = Vec::new();
    let mut p = 1u64;
    while p <= bound {
        out.push(p);
        if p > bound / 2 {
            break;
        }
        p *= 2;
    }
    if (q == 7 || q % 28 == 1 || q % 28 == 27) && bound >= 7 {
        out.push(7);
    }
    let class = classify(q).expect("q validated");
    if class.artin && !class.fermat && q <= bound {
        out.push(q);
    }
    if class.artin && !class.mirimanoff {
        let mut max_f = 0u64;
        let mut qf = 1u128;
        while qf <= bound as u128 {
            qf *= q as u128;
            max_f += 1;
        }
        if max_f >= 2 {
            let exps = f_exponents(q, max_f);
            let mut qf = q;
            for f in 2..=max_f {
                qf *= q;
                if qf <= bound && exps.contains(f) {
                    out.push(qf);
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Count of exponents <= x against the density asymptote
/// x·log(2(q-1)/q)/log 2.
pub fn f_density_check(q: u64, x: u64) -> (u64, f64) {
    let count = f_exponents(q, x).members.len() as u64;
    let q = q as f64;
    let asymptote = (2.0 * (q - 1.0) / q).ln() / 2f64.ln() * x as f64;
    (count, asymptote)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n_low: u64,
    pub n_high: u64,
    pub value: u64,
}

/// Maximal runs of consecutive n sharing one discriminator value, covering
/// 1..=n_max contiguously.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunLengthTable {
    pub q: u64,
    pub n_max: u64,
    pub rows: Vec<TableRow>,
}

pub fn disc_table(spec: &SequenceSpec, n_max: u64) -> RunLengthTable {
    assert!(n_max >= 1);
    let mut rows: Vec<TableRow> = Vec::new();
    for n in 1..=n_max {
        let value = disc_closed(spec, n).value;
        match rows.last_mut() {
            Some(row) if row.value == value => row.n_high = n,
            _ => rows.push(TableRow { n_low: n, n_high: n, value }),
        }
    }
    RunLengthTable { q: spec.q(), n_max, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::incongruence_index;
    use crate::modarith::{first_primes_from_5, mod_pow};
    use crate::primeclass::is_fermat;
    use proptest::prelude::*;

    fn spec(q: u64) -> SequenceSpec {
        SequenceSpec::new(q).unwrap()
    }

    #[test]
    fn brute_known_values() {
        assert_eq!(disc_brute(&spec(5), 17), 25);
        assert_eq!(disc_brute(&spec(5), 1), 1);
        assert_eq!(disc_brute(&spec(29), 5), 7);
        assert_eq!(disc_brute(&spec(7), 6), 7);
    }

    #[test]
    fn closed_known_values() {
        let r = disc_closed(&spec(17), 257);
        assert_eq!((r.value, r.branch), (289, Branch::PowerOfQ));
        assert_eq!(r.pow2_candidate, 512);

        let r = disc_closed(&spec(7), 6);
        assert_eq!((r.value, r.branch), (7, Branch::PowerOfQ));

        let r = disc_closed(&spec(11), 1000);
        assert_eq!((r.value, r.branch), (1024, Branch::PowerOfTwo));
        assert_eq!(r.powq_candidate, None);

        let r = disc_closed(&spec(29), 5);
        assert_eq!((r.value, r.branch), (7, Branch::Exceptional7));
    }

    #[test]
    fn small_n_closed_values() {
        assert_eq!(small_n(&spec(13), 5), 8);
        assert_eq!(small_n(&spec(29), 5), 7);
        assert_eq!(small_n(&spec(7), 5), 7);
        assert_eq!(small_n(&spec(7), 6), 7);
        assert_eq!(small_n(&spec(5), 6), 8);
        for q in [5u64, 7, 11, 13] {
            let s = spec(q);
            for n in 1..=6 {
                assert_eq!(small_n(&s, n), disc_brute(&s, n), "q = {q}, n = {n}");
                assert_eq!(small_n(&s, n), disc_closed(&s, n).value, "q = {q}, n = {n}");
            }
        }
    }

    #[test]
    fn closed_matches_brute_small_sweep() {
        for q in first_primes_from_5(5) {
            let s = spec(q);
            for n in 1..=256 {
                let closed = disc_closed(&s, n).value;
                let brute = disc_brute(&s, n);
                assert_eq!(closed, brute, "q = {q}, n = {n}");
                assert!(n <= brute && brute <= 2 * n - 1 || n == 1);
                assert_ne!(brute % 3, 0);
            }
        }
    }

    #[test]
    fn exponent_set_known_values() {
        assert_eq!(f_exponents(5, 6).members, vec![2, 3, 5, 6]);
        let e7 = f_exponents(7, 4);
        assert!(e7.contains(2) && e7.contains(3) && e7.contains(4));
        for q in first_primes_from_5(20) {
            assert_eq!(
                f_exponents(q, 1).contains(1),
                !is_fermat(q),
                "q = {q}"
            );
        }
    }

    #[test]
    fn exponent_set_matches_fractional_form() {
        // {f·log2(q)} > log2(q/(q-1))  ⟺  (q-1)·q^f > q·2^e with
        // e = floor(f·log2 q), checked in exact integer arithmetic
        for q in first_primes_from_5(25) {
            if q > 100 {
                break;
            }
            let exps = f_exponents(q, 50);
            for f in 1..=50u64 {
                let qf = BigUint::from(q).pow(f as u32);
                let e = qf.bits() - 1;
                let fractional =
                    (qf.clone() * (q - 1)) > (BigUint::from(1u32) << e) * q;
                assert_eq!(exps.contains(f), fractional, "q = {q}, f = {f}");
            }
        }
    }

    #[test]
    fn value_set_known_values() {
        assert_eq!(
            value_set(5, 200),
            vec![1, 2, 4, 8, 16, 25, 32, 64, 125, 128]
        );
        assert_eq!(value_set(11, 100), vec![1, 2, 4, 8, 16, 32, 64]);
        assert_eq!(value_set(29, 50), vec![1, 2, 4, 7, 8, 16, 29, 32]);
    }

    #[test]
    fn value_set_matches_table_values() {
        for q in [5u64, 7, 11, 17, 29] {
            let s = spec(q);
            let table = disc_table(&s, 32_768);
            let mut from_table: Vec<u64> = table.rows.iter().map(|r| r.value).collect();
            from_table.sort_unstable();
            from_table.dedup();
            assert_eq!(from_table, value_set(q, 32_768), "q = {q}");
        }
    }

    #[test]
    fn density_of_exponents() {
        let (count, asymptote) = f_density_check(5, 10_000);
        assert!((count as f64 - asymptote).abs() < 0.02 * asymptote);
        let (count, _) = f_density_check(7, 10);
        assert!(count <= 10);
    }

    #[test]
    fn table_small() {
        let t = disc_table(&spec(5), 4);
        assert_eq!(
            t.rows,
            vec![
                TableRow { n_low: 1, n_high: 1, value: 1 },
                TableRow { n_low: 2, n_high: 2, value: 2 },
                TableRow { n_low: 3, n_high: 4, value: 4 },
            ]
        );
        let t = disc_table(&spec(7), 16);
        let shape: Vec<(u64, u64, u64)> =
            t.rows.iter().map(|r| (r.n_low, r.n_high, r.value)).collect();
        assert_eq!(
            shape,
            vec![(1, 1, 1), (2, 2, 2), (3, 4, 4), (5, 6, 7), (7, 8, 8), (9, 16, 16)]
        );
    }

    #[test]
    fn prime_power_distinctness_thresholds() {
        // for Artin non-Mirimanoff q: u_q(1..n) distinct mod q^f iff
        // q^f(q-1) >= qn, i.e. the incongruence index of q^f is φ(q^f)
        for q in [5u64, 7, 17, 29] {
            let s = spec(q);
            for f in 1..=3u32 {
                let qf = q.pow(f);
                let phi = qf / q * (q - 1);
                assert_eq!(incongruence_index(&s, qf), phi, "q = {q}, f = {f}");
            }
        }
    }

    #[test]
    fn sevens_only_at_n5_for_foreign_q() {
        // once n != 5, a prime value other than a power of q never appears
        for q in [13u64, 29, 113] {
            let s = spec(q);
            for n in 1..=64 {
                let v = disc_brute(&s, n);
                if v == 7 && q != 7 {
                    assert_eq!(n, 5, "q = {q}");
                }
            }
        }
    }

    #[test]
    fn q_pow_one_inclusion_matches_fermat_rule() {
        // q ∈ D_q iff Artin and not Fermat (f = 1 in the exponent set agrees)
        for q in [5u64, 7, 17, 29, 53] {
            let in_values = value_set(q, q).contains(&q);
            let class = classify(q).unwrap();
            assert_eq!(in_values, class.artin && !class.fermat, "q = {q}");
        }
    }

    proptest! {
        #[test]
        fn brute_satisfies_bounds(qi in 0usize..10, n in 2u64..400) {
            let q = first_primes_from_5(10)[qi];
            let s = SequenceSpec::new(q).unwrap();
            let v = disc_brute(&s, n);
            prop_assert!(n <= v && v <= 2 * n - 1);
            prop_assert_ne!(v % 3, 0);
            prop_assert_eq!(v, disc_closed(&s, n).value);
            // every value is a power of 2, a power of q, or 7
            let is_pow2 = v.is_power_of_two();
            let is_powq = {
                let mut x = v;
                while x % q == 0 { x /= q; }
                x == 1
            };
            prop_assert!(is_pow2 || is_powq || v == 7);
        }
    }

    #[test]
    fn mod_pow_sanity_for_distinctness_thresholds() {
        // 3^((q-1)q^(f-1)) ≡ 1 (mod q^f) pins the collision used in tests
        for q in [5u64, 7] {
            for f in 1..=3u32 {
                let qf = q.pow(f);
                assert_eq!(mod_pow(3, (q - 1) * q.pow(f - 1), qf), 1);
            }
        }
    }
}
