//! Artin / Fermat / Mirimanoff predicates, the eight-class partition they
//! induce together with the q ≡ ±1 (mod 28) condition, the Artin constant,
//! and density scans over the primes.

use crate::modarith::{factorize, first_primes_from_5, is_prime, mod_pow, sieve_primes};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use std::io::{BufRead, Write};

/// Which branch of the discriminator closed form applies to q.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosedFormCase {
    ArtinNotMirimanoff,
    ArtinMirimanoffNotFermat,
    ArtinMirimanoffFermat,
    NotArtin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PrimeClassification {
    pub q: u64,
    pub artin: bool,
    pub fermat: bool,
    pub mirimanoff: bool,
    /// q ≡ ±1 (mod 28)
    pub mod28_exceptional: bool,
    /// Row 1..=8 of the eight-class partition.
    pub eight_class: u8,
    pub closed_form_case: ClosedFormCase,
}

/// 3 is a primitive root mod q, decided by 3^((q-1)/r) ≢ 1 (mod q) for every
/// prime r | q - 1.
pub fn is_artin(q: u64) -> Result<bool> {
    if q < 5 || !is_prime(q) {
        return Err(Error::InvalidQ(q));
    }
    Ok(factorize(q - 1)
        .primes()
        .all(|r| mod_pow(3, (q - 1) / r, q) != 1))
}

/// q - 1 is a power of two.
pub fn is_fermat(q: u64) -> bool {
    debug_assert!(is_prime(q));
    (q - 1).is_power_of_two()
}

/// 3^(q-1) ≡ 1 (mod q²). Needs q² in 64 bits.
pub fn is_mirimanoff(q: u64) -> Result<bool> {
    if q < 5 || !is_prime(q) {
        return Err(Error::InvalidQ(q));
    }
    if q >= 1 << 32 {
        return Err(Error::BadModulus(q));
    }
    Ok(mod_pow(3, q - 1, q * q) == 1)
}

/// Full classification of a prime q >= 5.
pub fn classify(q: u64) -> Result<PrimeClassification> {
    let artin = is_artin(q)?;
    let fermat = is_fermat(q);
    let mirimanoff = is_mirimanoff(q)?;
    let mod28_exceptional = q % 28 == 1 || q % 28 == 27;
    let eight_class = match (artin, mirimanoff, fermat, mod28_exceptional) {
        (true, false, _, true) => 1,
        (true, false, _, false) => 2,
        (true, true, false, true) => 3,
        (true, true, false, false) => 4,
        (true, true, true, true) => 5,
        (true, true, true, false) => 6,
        (false, _, _, true) => 7,
        (false, _, _, false) => 8,
    };
    let closed_form_case = match (artin, mirimanoff, fermat) {
        (false, _, _) => ClosedFormCase::NotArtin,
        (true, false, _) => ClosedFormCase::ArtinNotMirimanoff,
        (true, true, false) => ClosedFormCase::ArtinMirimanoffNotFermat,
        (true, true, true) => ClosedFormCase::ArtinMirimanoffFermat,
    };
    Ok(PrimeClassification {
        q,
        artin,
        fermat,
        mirimanoff,
        mod28_exceptional,
        eight_class,
        closed_form_case,
    })
}

/// Truncated Euler product for A = ∏_p (1 - 1/(p(p-1))), together with a
/// bound on the truncation error of log A.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ArtinConstant {
    pub value: f64,
    /// |log A - log A_truncated| is below this.
    pub log_tail_bound: f64,
}

pub fn artin_constant(prime_bound: u64) -> ArtinConstant {
    let mut value = 1.0f64;
    for p in sieve_primes(prime_bound) {
        let p = p as f64;
        value *= 1.0 - 1.0 / (p * (p - 1.0));
    }
    ArtinConstant { value, log_tail_bound: 2.0 / prime_bound as f64 }
}

/// All primes 5 <= q <= bound with 3^(q-1) ≡ 1 (mod q²).
pub fn mirimanoff_scan(bound: u64) -> Vec<u64> {
    sieve_primes(bound)
        .into_par_iter()
        .filter(|&q| q >= 5 && mod_pow(3, q - 1, q * q) == 1)
        .collect()
}

/// Eight-class counts and densities over the first `prime_count` primes >= 5.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityReport {
    pub prime_count: u64,
    pub counts: [u64; 8],
    pub empirical: [f64; 8],
    pub conjectural: [f64; 8],
}

/// The conjectural density vector, a rational combination of the Artin
/// constant: (32A/205, 173A/205, 0, 0, 0, 0, 1/6 - 32A/205, 5/6 - 173A/205).
pub fn conjectural_densities(artin: f64) -> [f64; 8] {
    let c1 = 32.0 * artin / 205.0;
    let c2 = 173.0 * artin / 205.0;
    [c1, c2, 0.0, 0.0, 0.0, 0.0, 1.0 / 6.0 - c1, 5.0 / 6.0 - c2]
}

const ARTIN_CONSTANT_PRIME_BOUND: u64 = 10_000_000;

/// Classify the first `prime_count` primes >= 5. Chunks are processed in
/// parallel and concatenated in order, so the output is identical to a
/// sequential run no matter the thread count.
pub fn classification_rows(prime_count: u64) -> Vec<PrimeClassification> {
    let primes = first_primes_from_5(prime_count as usize);
    primes
        .par_chunks(4096)
        .flat_map_iter(|chunk| {
            chunk.iter().map(|&q| classify(q).expect("sieved primes are valid"))
        })
        .collect()
}

pub fn density_from_rows(rows: &[PrimeClassification]) -> DensityReport {
    assert!(!rows.is_empty(), "density needs at least one prime");
    let mut counts = [0u64; 8];
    for row in rows {
        counts[(row.eight_class - 1) as usize] += 1;
    }
    let total = rows.len() as u64;
    let mut empirical = [0.0f64; 8];
    for (e, &c) in empirical.iter_mut().zip(&counts) {
        *e = c as f64 / total as f64;
    }
    DensityReport {
        prime_count: total,
        counts,
        empirical,
        conjectural: conjectural_densities(artin_constant(ARTIN_CONSTANT_PRIME_BOUND).value),
    }
}

/// Classify the first `prime_count` primes >= 5 and tally the eight classes.
pub fn density_scan(prime_count: u64) -> DensityReport {
    density_from_rows(&classification_rows(prime_count))
}

pub const CLASSIFICATION_CSV_HEADER: &str = "q,artin,fermat,mirimanoff,mod28,class";

pub fn write_classification_csv(out: &mut dyn Write, rows: &[PrimeClassification]) -> std::io::Result<()> {
    let mut buf = String::with_capacity(64 * 1024);
    buf.push_str(CLASSIFICATION_CSV_HEADER);
    buf.push('\n');
    for row in rows {
        use std::fmt::Write as _;
        let _ = writeln!(
            buf,
            "{},{},{},{},{},{}",
            row.q,
            row.artin as u8,
            row.fermat as u8,
            row.mirimanoff as u8,
            row.mod28_exceptional as u8,
            row.eight_class
        );
        if buf.len() >= 60 * 1024 {
            out.write_all(buf.as_bytes())?;
            buf.clear();
        }
    }
    out.write_all(buf.as_bytes())
}

/// Re-read rows written by `write_classification_csv`. Returns None on any
/// structural mismatch, signalling the caller to recompute.
pub fn read_classification_csv(input: &mut dyn BufRead) -> Option<Vec<PrimeClassification>> {
    let mut lines = input.lines();
    if lines.next()?.ok()? != CLASSIFICATION_CSV_HEADER {
        return None;
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line.ok()?;
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let q: u64 = fields.next()?.parse().ok()?;
        let flag = |s: &str| match s {
            "0" => Some(false),
            "1" => Some(true),
            _ => None,
        };
        let artin = flag(fields.next()?)?;
        let fermat = flag(fields.next()?)?;
        let mirimanoff = flag(fields.next()?)?;
        let mod28_exceptional = flag(fields.next()?)?;
        let eight_class: u8 = fields.next()?.parse().ok()?;
        if fields.next().is_some() || !(1..=8).contains(&eight_class) {
            return None;
        }
        let closed_form_case = match (artin, mirimanoff, fermat) {
            (false, _, _) => ClosedFormCase::NotArtin,
            (true, false, _) => ClosedFormCase::ArtinNotMirimanoff,
            (true, true, false) => ClosedFormCase::ArtinMirimanoffNotFermat,
            (true, true, true) => ClosedFormCase::ArtinMirimanoffFermat,
        };
        rows.push(PrimeClassification {
            q,
            artin,
            fermat,
            mirimanoff,
            mod28_exceptional,
            eight_class,
            closed_form_case,
        });
    }
    Some(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn artin_known_values() {
        assert!(is_artin(5).unwrap());
        assert!(!is_artin(11).unwrap());
        assert!(!is_artin(13).unwrap());
        assert!(is_artin(7).unwrap());
        assert!(is_artin(1006003).unwrap());
        assert!(is_artin(4).is_err());
        assert!(is_artin(3).is_err());
    }

    #[test]
    fn fermat_known_values() {
        assert!(is_fermat(17));
        assert!(!is_fermat(7));
        assert!(is_fermat(65537));
        assert!(is_fermat(5));
        assert!(is_fermat(257));
        assert!(!is_fermat(13));
    }

    #[test]
    fn mirimanoff_known_values() {
        assert!(is_mirimanoff(11).unwrap());
        assert!(is_mirimanoff(1006003).unwrap());
        assert!(!is_mirimanoff(5).unwrap());
        assert!(!is_mirimanoff(7).unwrap());
    }

    #[test]
    fn classify_known_rows() {
        let c = classify(29).unwrap();
        assert_eq!((c.eight_class, c.mod28_exceptional, c.artin), (1, true, true));
        assert_eq!(c.closed_form_case, ClosedFormCase::ArtinNotMirimanoff);

        let c = classify(83).unwrap();
        assert_eq!((c.eight_class, c.artin), (7, false));

        let c = classify(1006003).unwrap();
        assert_eq!(c.eight_class, 4);
        assert_eq!(c.closed_form_case, ClosedFormCase::ArtinMirimanoffNotFermat);

        let c = classify(11).unwrap();
        assert_eq!((c.eight_class, c.artin, c.mirimanoff), (8, false, true));

        let c = classify(5).unwrap();
        assert_eq!(c.eight_class, 2);
        assert_eq!(c.closed_form_case, ClosedFormCase::ArtinNotMirimanoff);

        for q in [113u64, 197, 223, 281] {
            assert_eq!(classify(q).unwrap().eight_class, 1, "q = {q}");
        }
        for q in [167u64, 251, 307, 337] {
            assert_eq!(classify(q).unwrap().eight_class, 7, "q = {q}");
        }
        for q in [13u64, 23, 37, 41, 47, 59] {
            assert_eq!(classify(q).unwrap().eight_class, 8, "q = {q}");
        }
    }

    #[test]
    fn artin_constant_values() {
        assert!((artin_constant(2).value - 0.5).abs() < 1e-15);
        assert!((artin_constant(100).value - 0.373956).abs() < 1e-3);
        let a = artin_constant(1_000_000);
        assert!((a.value - 0.373955813619).abs() < 1e-5);
        assert!(a.log_tail_bound <= 2e-6);
    }

    #[test]
    fn mirimanoff_scan_small() {
        assert_eq!(mirimanoff_scan(10), Vec::<u64>::new());
        assert_eq!(mirimanoff_scan(2000), vec![11]);
    }

    #[test]
    fn density_single_prime() {
        let report = density_scan(1);
        assert_eq!(report.counts[1], 1); // 5 lands in class 2
        assert_eq!(report.counts.iter().sum::<u64>(), 1);
    }

    #[test]
    fn density_counts_sum() {
        for n in [1u64, 10, 100, 1000] {
            let report = density_scan(n);
            assert_eq!(report.counts.iter().sum::<u64>(), n);
            let total: f64 = report.empirical.iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn conjectural_vector_sums_to_one() {
        let v = conjectural_densities(artin_constant(1000).value);
        let sum: f64 = v.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fermat_primes_are_artin() {
        let fermat: Vec<u64> = sieve_primes(100_000)
            .into_iter()
            .filter(|&q| q >= 5 && is_fermat(q))
            .collect();
        assert_eq!(fermat, vec![5, 17, 257, 65537]);
        for q in fermat {
            assert!(is_artin(q).unwrap(), "q = {q}");
        }
    }

    #[test]
    fn csv_roundtrip() {
        let rows = classification_rows(50);
        let mut bytes = Vec::new();
        write_classification_csv(&mut bytes, &rows).unwrap();
        let parsed = read_classification_csv(&mut bytes.as_slice()).unwrap();
        assert_eq!(parsed, rows);
        // corrupt header is rejected
        let mut bad = b"q,artin\n5,1".as_slice();
        assert!(read_classification_csv(&mut bad).is_none());
    }

    #[test]
    fn scan_is_thread_count_independent() {
        let sequential = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| classification_rows(5000));
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(8)
            .build()
            .unwrap()
            .install(|| classification_rows(5000));
        assert_eq!(sequential, parallel);
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_classification_csv(&mut a, &sequential).unwrap();
        write_classification_csv(&mut b, &parallel).unwrap();
        assert_eq!(a, b);
    }
}
