//! Locating the positive zeros of each `f_j` and lifting them to zeros of `p`.
//!
//! Brackets come straight from the shape of `f_j`: monotone cases get one
//! interval spanning `(0, R]`, unimodal cases are split at the extremum
//! `r0`. Each bracket is bisected to a relative width and then polished
//! with Newton steps that are only accepted while they stay inside the
//! final bracket and reduce `|f|`.

use num_complex::Complex;
use thiserror::Error;

use crate::family::{evaluate, validate, FamilyError, FamilyParams};
use crate::ray::{analyze_all, count_at_with, default_degenerate_band, f_derivative, f_value, RayAnalysis, RayCase};
use crate::scalar::{cos_pi_ratio, sin_pi_ratio, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Relative bracket width at which bisection stops.
    pub radius_rel: T,
    /// Residual acceptance, scaled by the largest term of `p`:
    /// `max(1, |z|^m, 2c|z|^k)`.
    pub residual: T,
    /// Relative distance to `c0` treated as tangency.
    pub degenerate_band: T,
}

impl<T: Scalar> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            radius_rel: T::lit(1e-12).max(T::lit(4.0) * T::epsilon()),
            residual: T::lit(1e-10).max(T::lit(1e4) * T::epsilon()),
            degenerate_band: default_degenerate_band(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum RootError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error("ray {j}: c is at the critical value; single tangential zero at r0 = {r0}")]
    DegenerateTangency { j: i64, r0: f64 },
    #[error("ray {j}: no sign change on [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    BracketFailure { j: i64, lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("ray {j}: residual {residual} at r = {r} exceeds bound {bound}")]
    ResidualExceeded { j: i64, r: f64, residual: f64, bound: f64 },
    #[error("analysis for m = {m}, k = {k} does not belong to these parameters")]
    ParamsMismatch { m: i64, k: i64 },
}

/// Interval `[lo, hi]` with `f(lo) f(hi) < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroRecord<T> {
    pub j: i64,
    pub r: T,
    pub z: Complex<T>,
    /// `|p(z)|`, recomputed from the complex coordinates.
    pub residual: T,
    pub degenerate: bool,
}

/// Radius beyond which `r^m` dominates every other term:
/// `max(1, (2c + 2)^{1/(m - |k|)}) + 1`.
pub fn outer_radius<T: Scalar>(m: i64, k: i64, c: T) -> T {
    let e = T::one() / T::from_int(m - k.abs());
    ((T::lit(2.0) * c + T::lit(2.0)).ln() * e).exp().max(T::one()) + T::one()
}

/// For `k < 0`: a radius below which `2 c alpha r^k` dominates,
/// `min(1, (c |alpha|)^{1/|k|}) / 2`. With `alpha = 0` there is no pole term
/// and `1/2` already lies below the only zero at `r = 1`.
pub fn inner_radius<T: Scalar>(k: i64, alpha: T, c: T) -> T {
    if k > 0 {
        return T::min_positive_value();
    }
    let half = T::lit(0.5);
    if alpha == T::zero() {
        return half;
    }
    let root = ((c * alpha.abs()).ln() / T::from_int(-k)).exp();
    root.min(T::one()) * half
}

fn sign<T: Scalar>(x: T) -> i8 {
    if x > T::zero() {
        1
    } else if x < T::zero() {
        -1
    } else {
        0
    }
}

/// Sign-change intervals, one per zero of `f_j` at parameter `c`.
pub fn bracket<T: Scalar>(analysis: &RayAnalysis<T>, c: T) -> Result<Vec<Bracket<T>>, RootError> {
    bracket_with(analysis, c, default_degenerate_band())
}

pub fn bracket_with<T: Scalar>(analysis: &RayAnalysis<T>, c: T, band: T) -> Result<Vec<Bracket<T>>, RootError> {
    let params = validate(analysis.m, analysis.k, c)?;
    let j = analysis.ray.j;
    let count = count_at_with(analysis, c, band);
    if count.degenerate {
        let r0 = analysis.r0_at(c).expect("threshold case has r0");
        return Err(RootError::DegenerateTangency { j, r0: r0.as_f64() });
    }
    if count.zeros == 0 {
        return Ok(Vec::new());
    }
    let f = |r: T| f_value(&params, &analysis.ray, r);
    let outer = outer_radius(analysis.m, analysis.k, c);
    let inner = inner_radius(analysis.k, analysis.alpha, c);
    let r0 = analysis.r0_at(c);

    let mut out = match analysis.case {
        RayCase::EvenAlphaZero | RayCase::PosKEvenPos | RayCase::NegKEvenNeg | RayCase::NegKOddPos => {
            vec![Bracket { lo: inner, hi: outer }]
        }
        RayCase::PosKEvenNeg => vec![Bracket { lo: r0.unwrap(), hi: outer }],
        RayCase::PosKOddPos => {
            let r0 = r0.unwrap();
            vec![Bracket { lo: inner, hi: r0 }, Bracket { lo: r0, hi: outer }]
        }
        RayCase::NegKEvenPos => {
            let r0 = r0.unwrap();
            vec![Bracket { lo: inner.min(r0 * T::lit(0.5)), hi: r0 }, Bracket { lo: r0, hi: outer }]
        }
        RayCase::OddAlphaZero | RayCase::PosKOddNeg | RayCase::NegKOddNeg => unreachable!("zero-count case"),
    };

    for b in &mut out {
        // the pole term only grows as r -> 0, so shrinking lo can only help
        let mut tries = 0;
        while analysis.k < 0 && sign(f(b.lo)) * sign(f(b.hi)) >= 0 && tries < 64 {
            b.lo = b.lo * T::lit(0.0625);
            tries += 1;
        }
        let (f_lo, f_hi) = (f(b.lo), f(b.hi));
        if sign(f_lo) * sign(f_hi) >= 0 {
            return Err(RootError::BracketFailure {
                j,
                lo: b.lo.as_f64(),
                hi: b.hi.as_f64(),
                f_lo: f_lo.as_f64(),
                f_hi: f_hi.as_f64(),
            });
        }
    }
    Ok(out)
}

fn refine<T: Scalar>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    b: Bracket<T>,
    width_rel: T,
    j: i64,
) -> Result<T, RootError> {
    let (mut lo, mut hi) = (b.lo, b.hi);
    let s_lo = sign(f(lo));
    let four = T::lit(4.0);
    let failure = |lo: T, hi: T, f_lo: T, f_hi: T| RootError::BracketFailure {
        j,
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        f_lo: f_lo.as_f64(),
        f_hi: f_hi.as_f64(),
    };
    for _ in 0..10_000 {
        if hi - lo <= width_rel * hi {
            break;
        }
        // geometric midpoint while the bracket spans orders of magnitude
        let mid = if lo > T::zero() && hi > four * lo { (lo * hi).sqrt() } else { (lo + hi) * T::lit(0.5) };
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm.is_nan() {
            return Err(failure(lo, hi, f(lo), f(hi)));
        }
        match sign(fm) {
            0 => return Ok(mid),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    if sign(f(lo)) * sign(f(hi)) > 0 {
        return Err(failure(lo, hi, f(lo), f(hi)));
    }
    let mut x = (lo + hi) * T::lit(0.5);
    let mut fx = f(x).abs();
    for _ in 0..4 {
        let d = df(x);
        if d == T::zero() || !d.is_finite() {
            break;
        }
        let next = x - f(x) / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        let fn_ = f(next).abs();
        if fn_ >= fx {
            break;
        }
        x = next;
        fx = fn_;
    }
    Ok(x)
}

/// Point on ray `j` at radius `r`, with the direction reduced exactly so
/// that rays `j` and `2m - j` are exact conjugates.
pub fn ray_point<T: Scalar>(m: i64, j: i64, r: T) -> Complex<T> {
    Complex::new(r * cos_pi_ratio::<T>(j, m), r * sin_pi_ratio::<T>(j, m))
}

fn record<T: Scalar>(params: &FamilyParams<T>, j: i64, r: T, degenerate: bool) -> Result<ZeroRecord<T>, RootError> {
    let z = ray_point(params.m(), j, r);
    let residual = evaluate(params, z)?.norm();
    Ok(ZeroRecord { j, r, z, residual, degenerate })
}

pub fn solve_ray<T: Scalar>(
    params: &FamilyParams<T>,
    analysis: &RayAnalysis<T>,
) -> Result<Vec<ZeroRecord<T>>, RootError> {
    solve_ray_with(params, analysis, &Tolerances::default())
}

/// All zeros on one ray at `params.c()`, ordered by radius.
pub fn solve_ray_with<T: Scalar>(
    params: &FamilyParams<T>,
    analysis: &RayAnalysis<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<ZeroRecord<T>>, RootError> {
    if analysis.m != params.m() || analysis.k != params.k() {
        return Err(RootError::ParamsMismatch { m: analysis.m, k: analysis.k });
    }
    let j = analysis.ray.j;
    let brackets = match bracket_with(analysis, params.c(), tol.degenerate_band) {
        Ok(b) => b,
        Err(RootError::DegenerateTangency { .. }) => {
            let r0 = analysis.r0_at(params.c()).expect("threshold case has r0");
            return Ok(vec![record(params, j, r0, true)?]);
        }
        Err(e) => return Err(e),
    };
    let mut out = Vec::with_capacity(brackets.len());
    for b in brackets {
        let r = refine(
            |r| f_value(params, &analysis.ray, r),
            |r| f_derivative(params, &analysis.ray, r),
            b,
            tol.radius_rel,
            j,
        )?;
        let rec = record(params, j, r, false)?;
        // rounding in p is proportional to its largest term, and for large c
        // that is the harmonic one rather than z^m
        let scale = T::one().max(r.powi(params.m() as i32)).max(T::lit(2.0) * params.c() * r.powi(params.k() as i32));
        let bound = tol.residual * scale;
        if rec.residual.is_nan() || rec.residual > bound {
            return Err(RootError::ResidualExceeded {
                j,
                r: r.as_f64(),
                residual: rec.residual.as_f64(),
                bound: bound.as_f64(),
            });
        }
        out.push(rec);
    }
    Ok(out)
}

pub fn all_zeros<T: Scalar>(params: &FamilyParams<T>) -> Result<Vec<ZeroRecord<T>>, RootError> {
    all_zeros_with(params, &Tolerances::default())
}

/// Every zero of `p`, sorted by ray index and then by radius.
pub fn all_zeros_with<T: Scalar>(
    params: &FamilyParams<T>,
    tol: &Tolerances<T>,
) -> Result<Vec<ZeroRecord<T>>, RootError> {
    let mut out = Vec::new();
    for analysis in analyze_all(params) {
        out.extend(solve_ray_with(params, &analysis, tol)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ray::{analyze_ray, count_at};

    #[test]
    fn quadratic_ray() {
        let p = validate(2, 1, 1.0f64).unwrap();
        let a = analyze_ray(&p, 0).unwrap();
        let b = bracket(&a, 1.0).unwrap();
        let root = 2f64.sqrt() - 1.0;
        assert_eq!(b.len(), 1);
        assert!(b[0].lo < root && root < b[0].hi);
        let z = solve_ray(&p, &a).unwrap();
        assert_eq!(z.len(), 1);
        assert!((z[0].r - root).abs() < 1e-14);
        assert_eq!(z[0].z.im, 0.0);
    }

    #[test]
    fn two_brackets_above_threshold() {
        let p = validate(3, 1, 1.0f64).unwrap();
        let a = analyze_ray(&p, 1).unwrap();
        let c = a.c0.unwrap() * 1.5;
        let b = bracket(&a, c).unwrap();
        let r0 = a.r0_at(c).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].hi, r0);
        assert_eq!(b[1].lo, r0);
        assert!(bracket(&a, a.c0.unwrap() * 0.5).unwrap().is_empty());
        assert!(matches!(bracket(&a, a.c0.unwrap()), Err(RootError::DegenerateTangency { j: 1, .. })));
    }

    #[test]
    fn alpha_zero_ray_has_unit_zero() {
        let p = validate(4, 1, 2.5f64).unwrap();
        let a = analyze_ray(&p, 2).unwrap();
        assert_eq!(a.case, RayCase::EvenAlphaZero);
        let b = bracket(&a, 2.5).unwrap();
        assert!(b[0].lo < 1.0 && 1.0 < b[0].hi);
        let z = solve_ray(&p, &a).unwrap();
        assert!((z[0].r - 1.0).abs() < 1e-13);
        let n = validate(4, -1, 2.5f64).unwrap();
        let a = analyze_ray(&n, 6).unwrap();
        assert_eq!(a.case, RayCase::EvenAlphaZero);
        assert!((solve_ray(&n, &a).unwrap()[0].r - 1.0).abs() < 1e-13);
    }

    #[test]
    fn counts_across_c_for_m5() {
        let p = validate(5, 4, 3.0f64).unwrap();
        assert_eq!(all_zeros(&p).unwrap().len(), 11);
        let n = validate(5, -4, 1.0f64).unwrap();
        assert_eq!(all_zeros(&n).unwrap().len(), 5);
        let q = validate(5, 4, 0.1f64).unwrap();
        let a = analyze_ray(&q, 0).unwrap();
        let z = solve_ray(&q, &a).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].r < 1.0);
    }

    #[test]
    fn example_counts() {
        assert_eq!(all_zeros(&validate(5, 4, 1.0f64).unwrap()).unwrap().len(), 7);
        assert_eq!(all_zeros(&validate(5, -4, 0.2f64).unwrap()).unwrap().len(), 9);
    }

    #[test]
    fn degenerate_record_at_threshold() {
        let p = validate(3, 1, 1.0f64).unwrap();
        let a = analyze_ray(&p, 1).unwrap();
        let c0 = a.c0.unwrap();
        let at = p.with_c(c0).unwrap();
        let z = solve_ray(&at, &a).unwrap();
        assert_eq!(z.len(), 1);
        assert!(z[0].degenerate);
        assert!((z[0].r - a.r0_at(c0).unwrap()).abs() < 1e-15);
        assert!(z[0].residual < 1e-12);
    }

    #[test]
    fn mismatched_analysis_is_rejected() {
        let p = validate(3, 1, 1.0f64).unwrap();
        let q = validate(5, 2, 1.0f64).unwrap();
        let a = analyze_ray(&q, 1).unwrap();
        assert_eq!(solve_ray(&p, &a), Err(RootError::ParamsMismatch { m: 5, k: 2 }));
    }

    #[test]
    fn extreme_parameters() {
        for (m, k, c) in [(13, 12, 1e3), (13, -12, 1e-3), (13, -12, 1e3), (2, -1, 1e-3), (2, 1, 1e3), (13, 1, 1e-3)] {
            let p = validate(m, k, c).unwrap();
            let zs = all_zeros(&p).unwrap();
            let expected: usize = analyze_all(&p).iter().map(|a| count_at(a, c).zeros).sum();
            assert_eq!(zs.len(), expected, "m={m} k={k} c={c}");
        }
    }

    #[test]
    fn single_precision_counts() {
        let tol = Tolerances::<f32>::default();
        for (c, n) in [(0.1f32, 5), (1.0, 7), (3.0, 11)] {
            let p = validate(5, 4, c).unwrap();
            assert_eq!(all_zeros_with(&p, &tol).unwrap().len(), n);
        }
        for (c, n) in [(0.1f32, 11), (0.2, 9), (1.0, 5)] {
            let p = validate(5, -4, c).unwrap();
            assert_eq!(all_zeros_with(&p, &tol).unwrap().len(), n);
        }
    }

    #[test]
    fn conjugate_closure_is_exact() {
        let p = validate(7, 3, 2.0f64).unwrap();
        let zs = all_zeros(&p).unwrap();
        let m = p.m();
        for z in &zs {
            if z.j == 0 || z.j == m {
                assert_eq!(z.z.im, 0.0);
                continue;
            }
            let mate = zs.iter().find(|w| w.j == 2 * m - z.j && (w.r - z.r).abs() <= 1e-12 * z.r);
            let mate = mate.expect("conjugate partner");
            assert_eq!(mate.z, z.z.conj());
        }
    }
}
