//! Family parameters, exact ray classification and evaluation of
//! `p(z) = z^m + c(z^k + conj(z)^k) - 1`.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{cos_pi_ratio, sign_and_log, signed_log_sum, Scalar};

/// Largest accepted analytic degree. Keeps `k * j` products and `powi`
/// exponents inside machine integers.
pub const MAX_DEGREE: i64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FamilyError {
    #[error("k must be nonzero")]
    ZeroK,
    #[error("degrees must satisfy m > |k| (got m = {m}, k = {k})")]
    DegreeOrder { m: i64, k: i64 },
    #[error("m = {m} exceeds the supported maximum {max}", max = MAX_DEGREE)]
    DegreeTooLarge { m: i64 },
    #[error("m and k must be coprime (gcd({m}, {k}) = {gcd})")]
    NonCoprime { m: i64, k: i64, gcd: i64 },
    #[error("c must be positive (got {c})")]
    NonPositiveC { c: f64 },
    #[error("c must be finite (got {c})")]
    NonFiniteC { c: f64 },
    #[error("ray index {j} outside [0, {max}]")]
    IndexOutOfRange { j: i64, max: i64 },
    #[error("p has a pole at the origin when k < 0")]
    PoleAtOrigin,
}

/// One validated member of the family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyParams<T> {
    m: i64,
    k: i64,
    c: T,
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Check the family invariants and build the parameter triple.
pub fn validate<T: Scalar>(m: i64, k: i64, c: T) -> Result<FamilyParams<T>, FamilyError> {
    if k == 0 {
        return Err(FamilyError::ZeroK);
    }
    if m <= k.abs() {
        return Err(FamilyError::DegreeOrder { m, k });
    }
    if m > MAX_DEGREE {
        return Err(FamilyError::DegreeTooLarge { m });
    }
    let g = gcd(m, k);
    if g != 1 {
        return Err(FamilyError::NonCoprime { m, k, gcd: g });
    }
    if c.is_nan() || c.is_infinite() {
        return Err(FamilyError::NonFiniteC { c: c.as_f64() });
    }
    if c <= T::zero() {
        return Err(FamilyError::NonPositiveC { c: c.as_f64() });
    }
    Ok(FamilyParams { m, k, c })
}

impl<T: Scalar> FamilyParams<T> {
    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn c(&self) -> T {
        self.c
    }

    /// Number of candidate rays, `2m`.
    pub fn ray_count(&self) -> usize {
        2 * self.m as usize
    }

    /// Same degrees, different parameter.
    pub fn with_c(&self, c: T) -> Result<Self, FamilyError> {
        validate(self.m, self.k, c)
    }

    pub fn rays(&self) -> impl Iterator<Item = RayDescriptor> + '_ {
        (0..2 * self.m).map(move |j| self.ray_unchecked(j))
    }

    fn ray_unchecked(&self, j: i64) -> RayDescriptor {
        let period = 2 * self.m;
        let residue = (self.k as i128 * j as i128).rem_euclid(period as i128) as i64;
        let parity = if j % 2 == 0 { Parity::Even } else { Parity::Odd };
        RayDescriptor { j, m: self.m, residue, parity, alpha_sign: alpha_sign_of_residue(residue, self.m) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `(-1)^j` as a sign.
    pub fn sign(self) -> i8 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlphaSign {
    Positive,
    Zero,
    Negative,
}

/// Ray `j` at angle `j*pi/m`, with the exact sign of `alpha = cos(k*j*pi/m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RayDescriptor {
    pub j: i64,
    pub m: i64,
    /// `k*j mod 2m`, normalized to `[0, 2m)`.
    pub residue: i64,
    pub parity: Parity,
    pub alpha_sign: AlphaSign,
}

impl RayDescriptor {
    pub fn angle<T: Scalar>(&self) -> T {
        T::PI() * T::from_int(self.j) / T::from_int(self.m)
    }

    /// `alpha = cos(pi * residue / m)`, reduced exactly before any
    /// floating-point work.
    pub fn alpha<T: Scalar>(&self) -> T {
        cos_pi_ratio(self.residue, self.m)
    }

    /// Representative of the residue class `{t, 2m - t}`; rays sharing it
    /// share `alpha` bit-for-bit.
    pub fn alpha_class(&self) -> i64 {
        self.residue.min(2 * self.m - self.residue)
    }
}

fn alpha_sign_of_residue(t: i64, m: i64) -> AlphaSign {
    let twice = 2 * t as i128;
    let m = m as i128;
    if twice < m || twice > 3 * m {
        AlphaSign::Positive
    } else if twice == m || twice == 3 * m {
        AlphaSign::Zero
    } else {
        AlphaSign::Negative
    }
}

/// Classify ray `j` using integer arithmetic only.
pub fn classify_ray<T: Scalar>(params: &FamilyParams<T>, j: i64) -> Result<RayDescriptor, FamilyError> {
    let max = 2 * params.m - 1;
    if !(0..=max).contains(&j) {
        return Err(FamilyError::IndexOutOfRange { j, max });
    }
    Ok(params.ray_unchecked(j))
}

/// `p(z)` from the polar split
/// `r^m cos(m theta) + 2c r^k cos(k theta) - 1 + i r^m sin(m theta)`.
///
/// Magnitudes are combined in the log domain; overflow yields a signed
/// infinity in the affected component rather than `NaN`.
pub fn evaluate<T: Scalar>(params: &FamilyParams<T>, z: Complex<T>) -> Result<Complex<T>, FamilyError> {
    let r = z.norm();
    if r == T::zero() {
        return if params.k < 0 { Err(FamilyError::PoleAtOrigin) } else { Ok(Complex::new(-T::one(), T::zero())) };
    }
    let theta = z.im.atan2(z.re);
    let ln_r = r.ln();
    let m = T::from_int(params.m);
    let k = T::from_int(params.k);
    let (cos_m, sin_m) = ((m * theta).cos(), (m * theta).sin());
    let cos_k = (k * theta).cos();

    let (s_a, l_a) = sign_and_log(cos_m);
    let (s_b, l_b) = sign_and_log(T::lit(2.0) * params.c * cos_k);
    let re = signed_log_sum(&[(s_a, l_a + m * ln_r), (s_b, l_b + k * ln_r)], -T::one());

    let (s_i, l_i) = sign_and_log(sin_m);
    let im = signed_log_sum(&[(s_i, l_i + m * ln_r)], T::zero());
    Ok(Complex::new(re, im))
}

/// `p(r e^{i j pi/m})` with `cos(m theta) = (-1)^j` and `sin(m theta) = 0`
/// substituted exactly; the imaginary part is identically zero.
pub fn evaluate_on_ray<T: Scalar>(params: &FamilyParams<T>, ray: &RayDescriptor, r: T) -> Complex<T> {
    Complex::new(ray_real_part(params, ray, ray.alpha(), r), T::zero())
}

pub(crate) fn ray_real_part<T: Scalar>(params: &FamilyParams<T>, ray: &RayDescriptor, alpha: T, r: T) -> T {
    let ln_r = r.ln();
    let (s_b, l_b) = sign_and_log(T::lit(2.0) * params.c * alpha);
    signed_log_sum(
        &[(ray.parity.sign(), T::from_int(params.m) * ln_r), (s_b, l_b + T::from_int(params.k) * ln_r)],
        -T::one(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn validate_accepts_examples() {
        assert!(validate(5, 4, 1.0f64).is_ok());
        assert!(validate(5, -4, 0.2f64).is_ok());
        assert!(validate(2, 1, 1.0f32).is_ok());
    }

    #[test]
    fn validate_rejections() {
        assert_eq!(validate(6, 4, 1.0f64), Err(FamilyError::NonCoprime { m: 6, k: 4, gcd: 2 }));
        assert_eq!(validate(4, 4, 1.0f64), Err(FamilyError::DegreeOrder { m: 4, k: 4 }));
        assert_eq!(validate(3, -5, 1.0f64), Err(FamilyError::DegreeOrder { m: 3, k: -5 }));
        assert_eq!(validate(5, 0, 1.0f64), Err(FamilyError::ZeroK));
        assert_eq!(validate(5, 2, 0.0f64), Err(FamilyError::NonPositiveC { c: 0.0 }));
        assert_eq!(validate(5, 2, -1.0), Err(FamilyError::NonPositiveC { c: -1.0 }));
        assert!(matches!(validate(5, 2, f64::NAN), Err(FamilyError::NonFiniteC { .. })));
        assert!(matches!(validate(5, 2, f64::INFINITY), Err(FamilyError::NonFiniteC { .. })));
        assert_eq!(validate(-3, 1, 1.0f64), Err(FamilyError::DegreeOrder { m: -3, k: 1 }));
    }

    #[test]
    fn classify_examples() {
        let p = validate(5, 4, 1.0f64).unwrap();
        let r0 = classify_ray(&p, 0).unwrap();
        assert_eq!((r0.parity, r0.alpha_sign), (Parity::Even, AlphaSign::Positive));
        let r5 = classify_ray(&p, 5).unwrap();
        assert_eq!(r5.residue, 0);
        assert_eq!((r5.parity, r5.alpha_sign), (Parity::Odd, AlphaSign::Positive));
        assert!(((4.0 * 5.0 * std::f64::consts::PI / 5.0).cos() - 1.0).abs() < 1e-12);

        let q = validate(2, 1, 1.0f64).unwrap();
        assert_eq!(classify_ray(&q, 1).unwrap().alpha_sign, AlphaSign::Zero);
        assert_eq!(classify_ray(&q, 3).unwrap().alpha_sign, AlphaSign::Zero);

        assert_eq!(classify_ray(&p, 10), Err(FamilyError::IndexOutOfRange { j: 10, max: 9 }));
        assert!(classify_ray(&p, -1).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let p = validate(5, 4, 0.7f64).unwrap();
        let v = evaluate(&p, Complex::new(1.0, 0.0)).unwrap();
        assert!((v.re - 1.4).abs() < 1e-14 && v.im.abs() < 1e-14);

        let q = validate(2, 1, 1.0f64).unwrap();
        let v = evaluate(&q, Complex::new(0.0, 1.0)).unwrap();
        assert!((v.re + 2.0).abs() < 1e-14 && v.im.abs() < 1e-14);

        let n = validate(5, -4, 0.2f64).unwrap();
        let v = evaluate(&n, Complex::new(1.0, 0.0)).unwrap();
        assert!((v.re - 0.4).abs() < 1e-14);
        assert_eq!(evaluate(&n, Complex::new(0.0, 0.0)), Err(FamilyError::PoleAtOrigin));

        let v = evaluate(&p, Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(v, Complex::new(-1.0, 0.0));
    }

    #[test]
    fn tiny_radius_with_negative_k_saturates() {
        let n = validate(5, -4, 0.2f64).unwrap();
        let pos = classify_ray(&n, 0).unwrap();
        let v = evaluate_on_ray(&n, &pos, 1e-300);
        assert_eq!(v.re, f64::INFINITY);
        let neg = classify_ray(&n, 1).unwrap();
        assert_eq!(neg.alpha_sign, AlphaSign::Negative);
        assert_eq!(evaluate_on_ray(&n, &neg, 1e-300).re, f64::NEG_INFINITY);
        let v = evaluate(&n, Complex::new(1e-300, 0.0)).unwrap();
        assert_eq!(v.re, f64::INFINITY);
        // both terms overflow on an odd ray with k > 0 and alpha > 0: r^m wins
        let p = validate(5, 4, 1.0f64).unwrap();
        let odd = classify_ray(&p, 5).unwrap();
        assert_eq!(evaluate_on_ray(&p, &odd, 1e300).re, f64::NEG_INFINITY);
    }

    #[test]
    fn on_ray_matches_polar_evaluation() {
        let p = validate(7, -3, 0.4f64).unwrap();
        for ray in p.rays() {
            let r = 0.83;
            let theta: f64 = ray.angle();
            let z = Complex::from_polar(r, theta);
            let a = evaluate(&p, z).unwrap();
            let b = evaluate_on_ray(&p, &ray, r);
            assert_eq!(b.im, 0.0);
            assert!((a - b).norm() < 1e-12, "j = {}", ray.j);
        }
    }

    proptest! {
        #[test]
        fn conjugation_symmetry(
            m in 2i64..12, k in 1i64..11, neg in any::<bool>(), c in 0.01f64..50.0,
            x in -3.0f64..3.0, y in -3.0f64..3.0,
        ) {
            prop_assume!(k < m && gcd(m, k) == 1);
            prop_assume!(x.abs() + y.abs() > 1e-3);
            let k = if neg { -k } else { k };
            let p = validate(m, k, c).unwrap();
            let z = Complex::new(x, y);
            let a = evaluate(&p, z.conj()).unwrap();
            let b = evaluate(&p, z).unwrap().conj();
            let scale = 1.0 + z.norm().powi(m as i32) + 2.0 * c * z.norm().powi(k as i32);
            prop_assert!((a - b).norm() <= 1e-12 * scale);
        }

        #[test]
        fn alpha_sign_is_exact(m in 2i64..10_000, k_raw in 1i64..10_000, j_raw in 0i64..20_000, neg in any::<bool>()) {
            let k = 1 + (k_raw % (m - 1));
            prop_assume!(gcd(m, k) == 1);
            let k = if neg { -k } else { k };
            let p = validate(m, k, 1.0f64).unwrap();
            let j = j_raw % (2 * m);
            let ray = classify_ray(&p, j).unwrap();
            // reduce in wide integers, then evaluate the cosine directly
            let t = (k as i128 * j as i128).rem_euclid(2 * m as i128) as f64;
            let cos = (std::f64::consts::PI * t / m as f64).cos();
            if cos.abs() > 1e-12 {
                let expected = if cos > 0.0 { AlphaSign::Positive } else { AlphaSign::Negative };
                prop_assert_eq!(ray.alpha_sign, expected);
            } else {
                // k*j*pi/m is an odd multiple of pi/2 exactly when 2kj = m (mod 2m)
                let exact_zero = (2 * k as i128 * j as i128 - m as i128).rem_euclid(2 * m as i128) == 0;
                prop_assert!(exact_zero);
                prop_assert_eq!(ray.alpha_sign, AlphaSign::Zero);
            }
            if ray.alpha_sign == AlphaSign::Zero {
                prop_assert_eq!(m % 2, 0);
            }
        }
    }
}
