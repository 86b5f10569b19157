//! Half-plane census of the powers `omega^j`, `omega = e^{i k pi / m}`.
//!
//! `Re omega^j = cos(k j pi / m)` is the weight attached to ray `j`, so the
//! census counts rays by parity of `j` and by the sign of that weight. All
//! counting goes through the exact integer classifier.

use crate::family::{AlphaSign, FamilyParams, Parity};
use crate::scalar::Scalar;

/// Number of `q`-th roots of unity with positive real part.
pub fn positive_halfplane_count(q: u64) -> u64 {
    assert!(q >= 1, "q must be positive");
    2 * ((q - 1) / 4) + 1
}

/// Order of `omega` in the unit group: `2m` for odd `k`, `m` for even `k`.
pub fn unity_order(m: i64, k: i64) -> u64 {
    if k % 2 == 0 {
        m as u64
    } else {
        2 * m as u64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParityCensus {
    pub even_pos: u64,
    pub even_zero: u64,
    pub even_neg: u64,
    pub odd_pos: u64,
    pub odd_zero: u64,
    pub odd_neg: u64,
}

impl ParityCensus {
    pub fn count(&self, parity: Parity, sign: AlphaSign) -> u64 {
        match (parity, sign) {
            (Parity::Even, AlphaSign::Positive) => self.even_pos,
            (Parity::Even, AlphaSign::Zero) => self.even_zero,
            (Parity::Even, AlphaSign::Negative) => self.even_neg,
            (Parity::Odd, AlphaSign::Positive) => self.odd_pos,
            (Parity::Odd, AlphaSign::Zero) => self.odd_zero,
            (Parity::Odd, AlphaSign::Negative) => self.odd_neg,
        }
    }

    fn slot(&mut self, parity: Parity, sign: AlphaSign) -> &mut u64 {
        match (parity, sign) {
            (Parity::Even, AlphaSign::Positive) => &mut self.even_pos,
            (Parity::Even, AlphaSign::Zero) => &mut self.even_zero,
            (Parity::Even, AlphaSign::Negative) => &mut self.even_neg,
            (Parity::Odd, AlphaSign::Positive) => &mut self.odd_pos,
            (Parity::Odd, AlphaSign::Zero) => &mut self.odd_zero,
            (Parity::Odd, AlphaSign::Negative) => &mut self.odd_neg,
        }
    }

    pub fn even_total(&self) -> u64 {
        self.even_pos + self.even_zero + self.even_neg
    }

    pub fn odd_total(&self) -> u64 {
        self.odd_pos + self.odd_zero + self.odd_neg
    }
}

/// Enumerate `j = 0..2m` and tally parity against the sign of `Re omega^j`.
pub fn census<T: Scalar>(params: &FamilyParams<T>) -> ParityCensus {
    let mut tally = ParityCensus::default();
    for ray in params.rays() {
        *tally.slot(ray.parity, ray.alpha_sign) += 1;
    }
    tally
}

/// For odd `k`: walking the `2m`-th roots of unity in angular order, the
/// exponents `j` with `omega^j` at each position alternate in parity.
///
/// Returns `None` when `k` is even (the statement does not apply).
pub fn adjacent_parities_alternate<T: Scalar>(params: &FamilyParams<T>) -> Option<bool> {
    if params.k() % 2 == 0 {
        return None;
    }
    let n = 2 * params.m() as usize;
    // position[s] = the exponent j with omega^j = e^{2 pi i s / 2m}
    let mut position: Vec<Option<i64>> = vec![None; n];
    for ray in params.rays() {
        let slot = &mut position[ray.residue as usize];
        if slot.is_some() {
            return Some(false);
        }
        *slot = Some(ray.j);
    }
    let exps: Option<Vec<i64>> = position.into_iter().collect();
    let exps = match exps {
        Some(e) => e,
        None => return Some(false),
    };
    Some((0..n).all(|s| (exps[s] + exps[(s + 1) % n]) % 2 == 1))
}

/// For even `k` (hence odd `m`): `omega^j = omega^{j+m}` and `j`, `j + m`
/// have opposite parity, so every `m`-th root is hit once by each parity.
///
/// Returns `None` when `k` is odd.
pub fn paired_exponents_opposite<T: Scalar>(params: &FamilyParams<T>) -> Option<bool> {
    if params.k() % 2 != 0 {
        return None;
    }
    let m = params.m();
    let rays: Vec<_> = params.rays().collect();
    let ok = (0..m as usize).all(|j| {
        let a = &rays[j];
        let b = &rays[j + m as usize];
        a.residue == b.residue && a.parity != b.parity
    });
    Some(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{gcd, validate};

    // brute force over the q-th roots of unity
    fn enumerate_positive(q: u64) -> u64 {
        (0..q).filter(|&l| (2.0 * std::f64::consts::PI * l as f64 / q as f64).cos() > 1e-12).count() as u64
    }

    #[test]
    fn halfplane_examples() {
        assert_eq!(positive_halfplane_count(5), 3);
        assert_eq!(positive_halfplane_count(10), 5);
        assert_eq!(enumerate_positive(14), 7);
        assert_eq!(positive_halfplane_count(14), 7);
        assert_eq!(positive_halfplane_count(1), 1);
        assert_eq!(positive_halfplane_count(4), 1);
    }

    #[test]
    fn census_examples() {
        let c = census(&validate(5, 4, 1.0f64).unwrap());
        assert_eq!(c, ParityCensus { even_pos: 3, even_zero: 0, even_neg: 2, odd_pos: 3, odd_zero: 0, odd_neg: 2 });
        let c = census(&validate(7, 1, 1.0f64).unwrap());
        assert_eq!((c.odd_pos, c.even_pos, c.even_zero + c.odd_zero), (4, 3, 0));
        let c = census(&validate(2, 1, 1.0f64).unwrap());
        assert_eq!(c.even_zero + c.odd_zero, 2);
    }

    #[test]
    fn census_ignores_c() {
        let a = census(&validate(11, -4, 0.01f64).unwrap());
        let b = census(&validate(11, -4, 900.0f64).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn structural_identities_hold_up_to_200() {
        for m in 2..=200i64 {
            for k in 1..m {
                if gcd(m, k) != 1 {
                    continue;
                }
                for signed in [k, -k] {
                    let p = validate(m, signed, 1.0f64).unwrap();
                    let c = census(&p);
                    assert_eq!(c.even_total(), m as u64);
                    assert_eq!(c.odd_total(), m as u64);
                    let q = unity_order(m, signed);
                    if k % 2 == 1 {
                        assert_eq!(adjacent_parities_alternate(&p), Some(true), "m={m} k={signed}");
                        assert_eq!(c.even_pos + c.odd_pos, positive_halfplane_count(q));
                    } else {
                        assert_eq!(m % 2, 1);
                        assert_eq!(paired_exponents_opposite(&p), Some(true), "m={m} k={signed}");
                        assert_eq!(c.even_pos, positive_halfplane_count(q));
                        assert_eq!(c.odd_pos, positive_halfplane_count(q));
                    }
                }
            }
        }
    }
}
