//! Period, pre-period and purity of u_q modulo d, both in closed form and by
//! definitional simulation.
//!
//! Writing d = 3^α·δ with 3 ∤ δ, the period is ord_{4δ}(9) when d = q and
//! ord_q(3) is odd, and 2·ord_{4δ}(9) otherwise; the pre-period is max(1, α),
//! so the sequence is purely periodic mod d exactly when 9 ∤ d.

use crate::modarith::mult_order;
use crate::sequence::SequenceSpec;
use crate::{Error, Result};
use serde::Serialize;
use std::collections::hash_map::Entry;
use std::collections::HashMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PeriodInfo {
    pub period: u64,
    pub pre_period: u64,
    pub pure: bool,
}

/// Closed-form period of u_q mod d. Rejects d < 2.
pub fn period_closed(spec: &SequenceSpec, d: u64) -> Result<PeriodInfo> {
    if d < 2 || d > (1 << 62) {
        return Err(Error::BadModulus(d));
    }
    let mut alpha = 0u64;
    let mut delta = d;
    while delta % 3 == 0 {
        delta /= 3;
        alpha += 1;
    }
    let base = mult_order(9, 4 * delta).expect("gcd(9, 4δ) = 1 since 3 ∤ δ");
    let odd_case = d == spec.q() && mult_order(3, spec.q()).expect("q prime > 3") % 2 == 1;
    let period = if odd_case { base } else { 2 * base };
    Ok(PeriodInfo {
        period,
        pre_period: alpha.max(1),
        pure: d % 9 != 0,
    })
}

/// Default simulation horizon: pre-period + two closed-form periods + slack,
/// hard-capped at 4d². Exceeding the cap is an error, never a truncation.
pub fn default_horizon(spec: &SequenceSpec, d: u64) -> Result<u64> {
    let closed = period_closed(spec, d)?;
    let horizon = closed.pre_period + 2 * closed.period + 8;
    let cap = 4u64.saturating_mul(d).saturating_mul(d);
    if horizon > cap {
        return Err(Error::HorizonCapExceeded { d, horizon, cap });
    }
    Ok(horizon)
}

/// Minimal period and pre-period found by direct simulation, entirely
/// independent of the closed form.
///
/// A second-order recurrence mod d must repeat a consecutive-residue pair
/// within d² + 1 steps, and the first repeated pair marks the cycle entry:
/// from there on the residues recur with exactly the cycle length, which is
/// the minimal eventual period. The minimal pre-period is then read off as
/// the last index still violating that period. The caller must supply a
/// horizon long enough to reach the first repeated pair; anything else
/// reports failure rather than guessing.
pub fn period_brute(spec: &SequenceSpec, d: u64, horizon: u64) -> Result<PeriodInfo> {
    if d < 2 {
        return Err(Error::BadModulus(d));
    }
    let n = horizon as usize;
    let rs: Vec<u64> = spec.residues(d).take(n).collect();
    let mut seen: HashMap<(u64, u64), usize> = HashMap::with_capacity(n);
    let mut cycle_len = None;
    for i in 0..n.saturating_sub(1) {
        let state = (rs[i], rs[i + 1]);
        match seen.entry(state) {
            Entry::Occupied(first) => {
                cycle_len = Some(i - first.get());
                break;
            }
            Entry::Vacant(slot) => {
                slot.insert(i);
            }
        }
    }
    let Some(period) = cycle_len else {
        return Err(Error::NoPeriodWithinHorizon { d, horizon });
    };
    let mut last_mismatch = None;
    for i in 0..n - period {
        if rs[i] != rs[i + period] {
            last_mismatch = Some(i);
        }
    }
    let pre_period = last_mismatch.map_or(1, |i| i as u64 + 2);
    Ok(PeriodInfo {
        period: period as u64,
        pre_period,
        pure: pre_period == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::{first_primes_from_5, gcd, lcm, mult_order, valuation};

    fn spec(q: u64) -> SequenceSpec {
        SequenceSpec::new(q).unwrap()
    }

    fn brute(q: u64, d: u64) -> PeriodInfo {
        let s = spec(q);
        let horizon = default_horizon(&s, d).unwrap();
        period_brute(&s, d, horizon).unwrap()
    }

    #[test]
    fn closed_known_values() {
        let info = period_closed(&spec(5), 32).unwrap();
        assert_eq!((info.period, info.pure), (32, true));

        let info = period_closed(&spec(5), 9).unwrap();
        assert_eq!((info.period, info.pre_period, info.pure), (2, 2, false));

        // ord_11(3) = 5 is odd, so d = q = 11 gets the odd period
        let info = period_closed(&spec(11), 11).unwrap();
        assert_eq!((info.period, info.pure), (5, true));

        assert!(period_closed(&spec(5), 1).is_err());
    }

    #[test]
    fn brute_known_values() {
        let info = brute(5, 7);
        assert_eq!((info.period, info.pure), (6, true));

        let info = brute(7, 2);
        assert_eq!((info.period, info.pure), (2, true));

        // d = 18 = 2·9: α = 2, δ = 2, period 2·ord_8(9) = 2, pre-period 2
        let info = brute(5, 18);
        assert_eq!((info.period, info.pre_period, info.pure), (2, 2, false));
    }

    #[test]
    fn brute_reports_short_horizon() {
        assert!(matches!(
            period_brute(&spec(5), 97, 10),
            Err(Error::NoPeriodWithinHorizon { .. })
        ));
    }

    #[test]
    fn closed_matches_brute_small() {
        for q in first_primes_from_5(5) {
            let s = spec(q);
            for d in 2..=300u64 {
                let closed = period_closed(&s, d).unwrap();
                let b = period_brute(&s, d, default_horizon(&s, d).unwrap()).unwrap();
                assert_eq!(closed, b, "q = {q}, d = {d}");
            }
        }
    }

    #[test]
    fn period_multiplicative_on_coprime_parts() {
        let s = spec(7);
        for d1 in 2..=200u64 {
            for d2 in d1 + 1..=200 {
                if gcd(d1, d2) != 1 || (d1 * d2) % 9 == 0 {
                    continue;
                }
                let whole = period_closed(&s, d1 * d2).unwrap().period;
                let p1 = period_closed(&s, d1).unwrap().period;
                let p2 = period_closed(&s, d2).unwrap().period;
                assert_eq!(whole, lcm(p1, p2), "d1 = {d1}, d2 = {d2}");
            }
        }
    }

    #[test]
    fn period_divides_along_divisors() {
        let s = spec(13);
        for d2 in 2..=2000u64 {
            let p2 = period_closed(&s, d2).unwrap().period;
            for d1 in 2..d2 {
                if d2 % d1 == 0 {
                    let p1 = period_closed(&s, d1).unwrap().period;
                    assert_eq!(p2 % p1, 0, "d1 = {d1}, d2 = {d2}");
                }
            }
        }
    }

    #[test]
    fn period_bounds() {
        for q in [5u64, 11, 13] {
            let s = spec(q);
            for d in 2..=2000u64 {
                let p = period_closed(&s, d).unwrap().period;
                assert!(p <= lcm(2, p) && lcm(2, p) <= d, "q = {q}, d = {d}");
            }
            // composite bound: coprime d1, d2 > 1 give period <= d1·d2/2
            for d1 in 2..=60u64 {
                for d2 in 2..=60 {
                    if gcd(d1, d2) != 1 {
                        continue;
                    }
                    let p = period_closed(&s, d1 * d2).unwrap().period;
                    assert!(p <= d1 * d2 / 2, "q = {q}, d1 = {d1}, d2 = {d2}");
                }
            }
        }
    }

    #[test]
    fn odd_period_only_at_d_equals_q_with_odd_order() {
        for q in [5u64, 7, 11, 13, 31] {
            let s = spec(q);
            let ord3_odd = mult_order(3, q).unwrap() % 2 == 1;
            for d in 2..=2000u64 {
                if d % 9 == 0 {
                    continue;
                }
                let p = period_closed(&s, d).unwrap().period;
                let expect_odd = d == q && ord3_odd;
                assert_eq!(p % 2 == 1, expect_odd, "q = {q}, d = {d}");
            }
        }
    }

    #[test]
    fn purity_and_preperiod_shape() {
        let s = spec(7);
        for d in 2..=500u64 {
            let info = period_closed(&s, d).unwrap();
            assert_eq!(info.pure, d % 9 != 0);
            assert_eq!(info.pure, info.pre_period == 1);
            assert_eq!(info.pre_period, u64::from(valuation(3, d as i64).unwrap()).max(1));
        }
    }
}
