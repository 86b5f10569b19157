//! Per-ray reduction to the real function
//! `f_j(r) = (-1)^j r^m + 2 c alpha r^k - 1` and its zero count.
//!
//! Each ray falls into one of ten cases keyed by the sign of `k`, the parity
//! of `j` and the sign of `alpha`. Eight of them have a count independent of
//! `c`. The remaining two are unimodal with an extremum at `r0`, and their
//! count jumps by two when `c` crosses a critical value `c0`:
//!
//! * `k > 0`, odd `j`, `alpha > 0`: maximum at `r0`, count `0 -> 2`.
//! * `k < 0`, even `j`, `alpha > 0`: minimum at `r0`, count `2 -> 0`.
//!
//! In both, `f(r0) = c^{m/(m-k)} beta - 1`, so `c0 = beta^{-(m-k)/m}`.

use std::collections::BTreeMap;

use crate::family::{classify_ray, ray_real_part, AlphaSign, FamilyError, FamilyParams, Parity, RayDescriptor};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RayCase {
    /// `alpha = 0`, even `j`: `f = r^m - 1`.
    EvenAlphaZero,
    /// `alpha = 0`, odd `j`: `f = -r^m - 1`.
    OddAlphaZero,
    PosKEvenPos,
    PosKOddNeg,
    PosKEvenNeg,
    PosKOddPos,
    NegKOddNeg,
    NegKEvenNeg,
    NegKOddPos,
    NegKEvenPos,
}

impl RayCase {
    pub const ALL: [RayCase; 10] = [
        RayCase::EvenAlphaZero,
        RayCase::OddAlphaZero,
        RayCase::PosKEvenPos,
        RayCase::PosKOddNeg,
        RayCase::PosKEvenNeg,
        RayCase::PosKOddPos,
        RayCase::NegKOddNeg,
        RayCase::NegKEvenNeg,
        RayCase::NegKOddPos,
        RayCase::NegKEvenPos,
    ];

    pub fn classify(k_positive: bool, parity: Parity, alpha: AlphaSign) -> Self {
        use AlphaSign::*;
        use Parity::*;
        match (k_positive, parity, alpha) {
            (_, Even, Zero) => RayCase::EvenAlphaZero,
            (_, Odd, Zero) => RayCase::OddAlphaZero,
            (true, Even, Positive) => RayCase::PosKEvenPos,
            (true, Odd, Negative) => RayCase::PosKOddNeg,
            (true, Even, Negative) => RayCase::PosKEvenNeg,
            (true, Odd, Positive) => RayCase::PosKOddPos,
            (false, Odd, Negative) => RayCase::NegKOddNeg,
            (false, Even, Negative) => RayCase::NegKEvenNeg,
            (false, Odd, Positive) => RayCase::NegKOddPos,
            (false, Even, Positive) => RayCase::NegKEvenPos,
        }
    }

    /// The two cases whose count depends on `c`.
    pub fn has_threshold(self) -> bool {
        matches!(self, RayCase::PosKOddPos | RayCase::NegKEvenPos)
    }

    /// Cases where `f` has a single interior extremum at `r0`.
    pub fn has_extremum(self) -> bool {
        self.has_threshold() || self == RayCase::PosKEvenNeg
    }

    pub fn profile(self) -> CountProfile {
        match self {
            RayCase::EvenAlphaZero
            | RayCase::PosKEvenPos
            | RayCase::PosKEvenNeg
            | RayCase::NegKEvenNeg
            | RayCase::NegKOddPos => CountProfile::Constant(1),
            RayCase::OddAlphaZero | RayCase::PosKOddNeg | RayCase::NegKOddNeg => CountProfile::Constant(0),
            RayCase::PosKOddPos => CountProfile::Threshold { below: 0, above: 2 },
            RayCase::NegKEvenPos => CountProfile::Threshold { below: 2, above: 0 },
        }
    }
}

/// Number of positive zeros of `f_j` as a function of `c`. At `c = c0` the
/// threshold cases have a single tangential zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountProfile {
    Constant(usize),
    Threshold { below: usize, above: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RayCount {
    pub zeros: usize,
    /// `c` sits on the threshold (within tolerance): one double zero at `r0`.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayAnalysis<T> {
    pub ray: RayDescriptor,
    pub m: i64,
    pub k: i64,
    /// The parameter `r0` was evaluated at.
    pub c: T,
    pub alpha: T,
    pub case: RayCase,
    pub r0: Option<T>,
    pub beta: Option<T>,
    pub c0: Option<T>,
    pub profile: CountProfile,
}

/// Relative band around `c0` treated as the tangency itself.
pub fn default_degenerate_band<T: Scalar>() -> T {
    T::lit(1e-9).max(T::lit(16.0) * T::epsilon())
}

/// `f_j(r)` with `alpha` taken from the exact residue.
pub fn f_value<T: Scalar>(params: &FamilyParams<T>, ray: &RayDescriptor, r: T) -> T {
    ray_real_part(params, ray, ray.alpha(), r)
}

/// `f_j'(r) = (-1)^j m r^{m-1} + 2 c k alpha r^{k-1}`.
pub fn f_derivative<T: Scalar>(params: &FamilyParams<T>, ray: &RayDescriptor, r: T) -> T {
    let m = params.m();
    let k = params.k();
    let lead = T::from_int(m) * r.powi((m - 1) as i32);
    let lead = if ray.parity == Parity::Even { lead } else { -lead };
    let alpha: T = ray.alpha();
    lead + T::lit(2.0) * params.c() * T::from_int(k) * alpha * r.powi((k - 1) as i32)
}

/// `ln beta` for a threshold case, using `rho^{m/(m-k)} = rho * rho^{k/(m-k)}`
/// with `rho = |k|/m`:
///
/// * `k > 0`: `beta = (2 alpha)^{m/(m-k)} rho^{k/(m-k)} (1 - rho)`
/// * `k < 0`: `beta = (2 alpha)^{m/(m-k)} rho^{k/(m-k)} (1 + rho)`
fn ln_beta<T: Scalar>(m: i64, k: i64, alpha: T) -> T {
    let span = T::from_int(m - k);
    let rho = T::from_int(k.abs()) / T::from_int(m);
    let tail = if k > 0 { (-rho).ln_1p() } else { rho.ln_1p() };
    T::from_int(m) / span * (T::lit(2.0) * alpha).ln() + T::from_int(k) / span * rho.ln() + tail
}

fn extremum_radius<T: Scalar>(m: i64, k: i64, alpha: T, c: T) -> T {
    // r0^{m-k} = 2 c |k| |alpha| / m
    let base = T::lit(2.0) * c * T::from_int(k.abs()) * alpha.abs() / T::from_int(m);
    (base.ln() / T::from_int(m - k)).exp()
}

impl<T: Scalar> RayAnalysis<T> {
    /// `r0` at another value of `c`, where an extremum exists.
    pub fn r0_at(&self, c: T) -> Option<T> {
        self.case.has_extremum().then(|| extremum_radius(self.m, self.k, self.alpha, c))
    }

    /// `f(r0)` through the closed form `c^{m/(m-k)} beta - 1` (threshold cases).
    pub fn extremum_value_closed_form(&self, c: T) -> Option<T> {
        let beta = self.beta?;
        let e = T::from_int(self.m) / T::from_int(self.m - self.k);
        Some((e * c.ln() + beta.ln()).exp() - T::one())
    }
}

pub fn analyze_ray<T: Scalar>(params: &FamilyParams<T>, j: i64) -> Result<RayAnalysis<T>, FamilyError> {
    let ray = classify_ray(params, j)?;
    Ok(analyze_descriptor(params, ray))
}

pub(crate) fn analyze_descriptor<T: Scalar>(params: &FamilyParams<T>, ray: RayDescriptor) -> RayAnalysis<T> {
    let (m, k, c) = (params.m(), params.k(), params.c());
    let alpha: T = ray.alpha();
    let case = RayCase::classify(k > 0, ray.parity, ray.alpha_sign);
    let r0 = case.has_extremum().then(|| extremum_radius(m, k, alpha, c));
    let (beta, c0) = if case.has_threshold() {
        let lb = ln_beta(m, k, alpha);
        let lc0 = -(T::from_int(m - k) / T::from_int(m)) * lb;
        (Some(lb.exp()), Some(lc0.exp()))
    } else {
        (None, None)
    };
    RayAnalysis { ray, m, k, c, alpha, case, r0, beta, c0, profile: case.profile() }
}

/// Zero count on the ray at parameter `c`, with the default tangency band.
pub fn count_at<T: Scalar>(analysis: &RayAnalysis<T>, c: T) -> RayCount {
    count_at_with(analysis, c, default_degenerate_band())
}

pub fn count_at_with<T: Scalar>(analysis: &RayAnalysis<T>, c: T, band: T) -> RayCount {
    match (analysis.profile, analysis.c0) {
        (CountProfile::Constant(n), _) => RayCount { zeros: n, degenerate: false },
        (CountProfile::Threshold { below, above }, Some(c0)) => {
            if ((c - c0) / c0).abs() < band {
                RayCount { zeros: 1, degenerate: true }
            } else if c < c0 {
                RayCount { zeros: below, degenerate: false }
            } else {
                RayCount { zeros: above, degenerate: false }
            }
        }
        (CountProfile::Threshold { .. }, None) => unreachable!("threshold case without c0"),
    }
}

/// A critical parameter shared by every ray in one `alpha` residue class.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold<T> {
    pub c0: T,
    /// `min(t, 2m - t)` for the rays below.
    pub alpha_class: i64,
    pub rays: Vec<i64>,
}

/// Distinct critical values of `c`, ascending, grouped by exact residue class.
pub fn thresholds<T: Scalar>(params: &FamilyParams<T>) -> Vec<Threshold<T>> {
    let mut groups: BTreeMap<i64, Threshold<T>> = BTreeMap::new();
    for ray in params.rays() {
        let a = analyze_descriptor(params, ray);
        if let Some(c0) = a.c0 {
            groups
                .entry(ray.alpha_class())
                .or_insert_with(|| Threshold { c0, alpha_class: ray.alpha_class(), rays: Vec::new() })
                .rays
                .push(ray.j);
        }
    }
    let mut out: Vec<_> = groups.into_values().collect();
    out.sort_by(|a, b| a.c0.partial_cmp(&b.c0).unwrap().then(a.alpha_class.cmp(&b.alpha_class)));
    out
}

/// Analyses for every ray `j = 0..2m`.
pub fn analyze_all<T: Scalar>(params: &FamilyParams<T>) -> Vec<RayAnalysis<T>> {
    params.rays().map(|ray| analyze_descriptor(params, ray)).collect()
}
