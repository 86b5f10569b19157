//! Global zero counts, derived two independent ways.
//!
//! [`predict_table`] encodes the closed-form case tables keyed on `m mod 4`
//! and the parity of `k`. [`predict_census`] multiplies the per-case ray
//! counts from the parity census by the per-case zero counts. Both are
//! normalized to `(min, max, direction)`.

use crate::family::FamilyParams;
use crate::ray::{analyze_all, count_at};
use crate::scalar::Scalar;
use crate::unity::census;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `k > 0`: the count grows with `c`.
    Increasing,
    /// `k < 0`: the count shrinks with `c`.
    Decreasing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    CaseTable,
    Census,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountPrediction {
    pub min_count: u64,
    pub max_count: u64,
    pub direction: Direction,
    pub source: Source,
}

impl CountPrediction {
    /// Same counts and direction, regardless of which route produced them.
    pub fn agrees_with(&self, other: &CountPrediction) -> bool {
        (self.min_count, self.max_count, self.direction) == (other.min_count, other.max_count, other.direction)
    }

    /// Count for `c` below every threshold.
    pub fn small_c_count(&self) -> u64 {
        match self.direction {
            Direction::Increasing => self.min_count,
            Direction::Decreasing => self.max_count,
        }
    }

    /// Count for `c` above every threshold.
    pub fn large_c_count(&self) -> u64 {
        match self.direction {
            Direction::Increasing => self.max_count,
            Direction::Decreasing => self.min_count,
        }
    }
}

/// The `N` (for `k > 0`) or `(M, N)` (for `k < 0`) rows, as `(min, max)`.
pub fn predict_table<T: Scalar>(params: &FamilyParams<T>) -> CountPrediction {
    let m = params.m() as u64;
    let k = params.k();
    let k_even = k % 2 == 0;
    let residue = m % 4;
    if k > 0 {
        let n = match (residue, k_even) {
            (0, _) => m,
            (1, false) => m - 1,
            (1, true) => m + 1,
            (2, _) => m - 2,
            (3, false) => m + 1,
            (3, true) => m - 1,
            _ => unreachable!(),
        };
        CountPrediction { min_count: m, max_count: m + n, direction: Direction::Increasing, source: Source::CaseTable }
    } else {
        let (big_m, n) = match (residue, k_even) {
            (0, _) => (m + 1, m - 2),
            (1, false) => (m - 1, m + 1),
            (1, true) => (m, m + 1),
            (2, _) => (m - 1, m),
            (3, false) => (m + 1, m - 1),
            (3, true) => (m, m - 1),
            _ => unreachable!(),
        };
        CountPrediction {
            min_count: big_m,
            max_count: big_m + n,
            direction: Direction::Decreasing,
            source: Source::CaseTable,
        }
    }
}

/// Counts from the parity census.
///
/// `k > 0`: every even ray carries one zero for all `c`, and each odd ray
/// with `alpha > 0` gains two. `k < 0`: even rays with `alpha <= 0` and odd
/// rays with `alpha > 0` carry one zero each; each even ray with `alpha > 0`
/// starts with two and loses them.
pub fn predict_census<T: Scalar>(params: &FamilyParams<T>) -> CountPrediction {
    let tally = census(params);
    if params.k() > 0 {
        let min = tally.even_total();
        CountPrediction {
            min_count: min,
            max_count: min + 2 * tally.odd_pos,
            direction: Direction::Increasing,
            source: Source::Census,
        }
    } else {
        let min = tally.even_zero + tally.even_neg + tally.odd_pos;
        CountPrediction {
            min_count: min,
            max_count: min + 2 * tally.even_pos,
            direction: Direction::Decreasing,
            source: Source::Census,
        }
    }
}

/// Exact number of zeros at parameter `c`: the sum of the per-ray counts.
pub fn predict_at<T: Scalar>(params: &FamilyParams<T>, c: T) -> u64 {
    analyze_all(params).iter().map(|a| count_at(a, c).zeros as u64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{gcd, validate};
    use crate::ray::thresholds;

    #[test]
    fn table_examples() {
        let t = predict_table(&validate(5, 4, 1.0f64).unwrap());
        assert_eq!((t.min_count, t.max_count, t.direction), (5, 11, Direction::Increasing));
        let t = predict_table(&validate(5, -4, 1.0f64).unwrap());
        assert_eq!((t.min_count, t.max_count, t.direction), (5, 11, Direction::Decreasing));
        let t = predict_table(&validate(4, 1, 1.0f64).unwrap());
        assert_eq!((t.min_count, t.max_count), (4, 8));
    }

    #[test]
    fn census_examples() {
        let c = predict_census(&validate(5, 4, 1.0f64).unwrap());
        assert_eq!((c.min_count, c.max_count), (5, 11));
        let c = predict_census(&validate(7, 1, 1.0f64).unwrap());
        assert_eq!((c.min_count, c.max_count), (7, 15));
        let c = predict_census(&validate(5, -4, 1.0f64).unwrap());
        assert_eq!((c.min_count, c.max_count), (5, 11));
    }

    #[test]
    fn at_examples() {
        let p = validate(5, 4, 1.0f64).unwrap();
        assert_eq!(predict_at(&p, 1.0), 7);
        let n = validate(5, -4, 1.0f64).unwrap();
        assert_eq!(predict_at(&n, 0.2), 9);
    }

    #[test]
    fn table_equals_census_small() {
        for m in 2..=60i64 {
            for k in (1 - m)..m {
                if k == 0 || gcd(m, k) != 1 {
                    continue;
                }
                let p = validate(m, k, 1.0f64).unwrap();
                let (t, c) = (predict_table(&p), predict_census(&p));
                assert!(t.agrees_with(&c), "m={m} k={k}: {t:?} vs {c:?}");
                assert!(t.max_count >= t.min_count);
                assert_eq!((t.max_count - t.min_count) % 2, 0);
                if k > 0 {
                    assert_eq!(t.min_count, m as u64);
                }
            }
        }
    }

    #[test]
    fn limits_are_attained() {
        for (m, k) in [(5, 4), (5, -4), (8, 3), (8, -3), (7, 2), (7, -2), (2, 1), (2, -1), (13, 6)] {
            let p = validate(m, k, 1.0f64).unwrap();
            let pred = predict_census(&p);
            let th = thresholds(&p);
            let (lo, hi) = match (th.first(), th.last()) {
                (Some(a), Some(b)) => (a.c0 * 0.5, b.c0 * 2.0),
                _ => (1e-3, 1e3),
            };
            assert_eq!(predict_at(&p, lo), pred.small_c_count(), "m={m} k={k}");
            assert_eq!(predict_at(&p, hi), pred.large_c_count(), "m={m} k={k}");
        }
    }
}
