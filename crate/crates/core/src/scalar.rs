//! Generic floating-point scalar support.
//!
//! Every numeric routine in the crate is written against [`Scalar`], which is
//! implemented for `f32` and `f64`. Integer classification never touches this
//! layer.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point types the engine can run on.
pub trait Scalar: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {
    /// Lossy conversion used for literals and integer degrees.
    fn lit(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("finite literal")
    }

    fn from_int(n: i64) -> Self {
        <Self as FromPrimitive>::from_i64(n).expect("representable integer")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `cos(pi * num / den)` with the argument reduced exactly in integers first.
///
/// The reduction folds the angle into `[0, pi/2]`, so results are exactly
/// zero on the imaginary axis, exactly sign-symmetric under `num -> -num` and
/// `num -> den - num`, and accurate in relative terms near zero.
pub fn cos_pi_ratio<T: Scalar>(num: i64, den: i64) -> T {
    assert!(den > 0, "denominator must be positive");
    let period = 2 * den as i128;
    let n = (num as i128).rem_euclid(period);
    let s = n.min(period - n);
    let den = den as i128;
    if 2 * s == den {
        T::zero()
    } else if 2 * s > den {
        -first_quadrant_cos::<T>(den - s, den)
    } else {
        first_quadrant_cos(s, den)
    }
}

/// `sin(pi * num / den)`, reduced the same way as [`cos_pi_ratio`].
pub fn sin_pi_ratio<T: Scalar>(num: i64, den: i64) -> T {
    // sin(pi n / d) = cos(pi (d - 2n) / (2d))
    let shifted = den as i128 - 2 * num as i128;
    let double = 2 * den as i128;
    let period = 2 * double;
    let reduced = shifted.rem_euclid(period) as i64;
    cos_pi_ratio(reduced, double as i64)
}

// cos(pi s / den) for 0 <= 2s < den
fn first_quadrant_cos<T: Scalar>(s: i128, den: i128) -> T {
    if 4 * s <= den {
        (T::PI() * T::lit(s as f64) / T::lit(den as f64)).cos()
    } else {
        let half = T::PI() * T::lit((den - 2 * s) as f64) / T::lit((2 * den) as f64);
        half.sin()
    }
}

/// `offset + sum(sign_i * exp(log_i))` without producing `inf - inf`.
///
/// Terms with `sign == 0` are dropped. When several terms overflow, the
/// one with the largest logarithm decides the sign of the infinite result.
pub(crate) fn signed_log_sum<T: Scalar>(terms: &[(i8, T)], offset: T) -> T {
    let mut finite = offset;
    let mut dominant: Option<(i8, T)> = None;
    for &(sign, log_mag) in terms {
        if sign == 0 || log_mag.is_nan() {
            continue;
        }
        let mag = log_mag.exp();
        if mag.is_infinite() {
            match dominant {
                Some((_, best)) if best >= log_mag => {}
                _ => dominant = Some((sign, log_mag)),
            }
        } else if sign > 0 {
            finite = finite + mag;
        } else {
            finite = finite - mag;
        }
    }
    match dominant {
        Some((s, _)) if s > 0 => T::infinity(),
        Some(_) => T::neg_infinity(),
        None => finite,
    }
}

/// `(sign, ln|x|)` split of a real factor.
pub(crate) fn sign_and_log<T: Scalar>(x: T) -> (i8, T) {
    if x > T::zero() {
        (1, x.ln())
    } else if x < T::zero() {
        (-1, (-x).ln())
    } else {
        (0, T::neg_infinity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_matches_direct_evaluation() {
        for den in 1..40i64 {
            for num in -3 * den..3 * den {
                let exact: f64 = cos_pi_ratio(num, den);
                let direct = (std::f64::consts::PI * num as f64 / den as f64).cos();
                assert!((exact - direct).abs() < 1e-14, "{num}/{den}");
                let s: f64 = sin_pi_ratio(num, den);
                let direct = (std::f64::consts::PI * num as f64 / den as f64).sin();
                assert!((s - direct).abs() < 1e-14, "sin {num}/{den}");
            }
        }
    }

    #[test]
    fn exact_zeros_and_symmetry() {
        assert_eq!(cos_pi_ratio::<f64>(1, 2), 0.0);
        assert_eq!(cos_pi_ratio::<f64>(3, 2), 0.0);
        assert_eq!(sin_pi_ratio::<f64>(5, 5), 0.0);
        assert_eq!(sin_pi_ratio::<f64>(0, 7), 0.0);
        for den in 1..30 {
            for num in 0..2 * den {
                let a: f64 = cos_pi_ratio(num, den);
                assert_eq!(a, cos_pi_ratio(-num, den));
                assert_eq!(a, cos_pi_ratio(2 * den - num, den));
                let s: f64 = sin_pi_ratio(num, den);
                assert_eq!(-s, sin_pi_ratio(2 * den - num, den));
            }
        }
    }

    #[test]
    fn log_sum_resolves_competing_infinities() {
        let big = 1000.0f64;
        assert_eq!(signed_log_sum(&[(1, big), (-1, big - 1.0)], -1.0), f64::INFINITY);
        assert_eq!(signed_log_sum(&[(1, big), (-1, big + 1.0)], -1.0), f64::NEG_INFINITY);
        assert_eq!(signed_log_sum(&[(1, 0.0f64), (0, big)], -1.0), 0.0);
        let v = signed_log_sum(&[(1, 2.0f64.ln()), (-1, 0.5f64.ln())], -1.0);
        assert!((v - 0.5).abs() < 1e-15);
    }
}
