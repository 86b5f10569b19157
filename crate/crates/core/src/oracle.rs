//! Ray-agnostic zero finder used to cross-check the per-ray engine.
//!
//! Nothing here uses ray classification or the per-ray functions: `p` is
//! evaluated directly in Cartesian complex arithmetic, an annulus is scanned
//! on a log-polar grid, cells where both `Re p` and `Im p` can vanish are
//! refined by two-dimensional Newton iteration, and the results are deduped.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::family::FamilyParams;
use crate::roots::ZeroRecord;

/// Accepted `|p(z)|` for a reported zero, scaled by `max(1, |z|^m)`.
pub const ORACLE_RESIDUAL: f64 = 1e-8;
/// Newton stopping tolerance (relative step size).
pub const REFINE_TOL: f64 = 1e-10;
/// Subdivision depth for cells whose sign pattern is inconclusive.
pub const MAX_SUBDIVISION: u32 = 4;
/// Depth limit for definite cells whose Newton iteration fails. The zero
/// curves of `Re p` and `Im p` can run very close without meeting (near a
/// ray where one of them vanishes identically), so these cells get more room.
pub const MAX_DEFINITE_SUBDIVISION: u32 = 14;
pub const MIN_RESOLUTION: usize = 64;

// irrational shift of the angular grid so that grid lines avoid any
// particular rational angle
const ANGLE_OFFSET: f64 = 0.381_966_011_250_105_2;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OracleError {
    #[error("resolution {resolution} is below the minimum {min}", min = MIN_RESOLUTION)]
    ResolutionTooLow { resolution: usize },
    #[error("grid at resolution {resolution} could not resolve a candidate near {re} + {im}i")]
    ResolutionTooCoarse { resolution: usize, re: f64, im: f64 },
    #[error("inputs were computed for different parameters")]
    ParamsMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub params: FamilyParams<f64>,
    /// Deduplicated zeros, ordered by argument in `[0, 2 pi)` then modulus.
    pub zeros: Vec<Complex64>,
    pub grid_resolution: usize,
    pub annulus: Annulus,
    /// Candidate cells whose refinement converged onto a reported zero.
    pub matched_count: usize,
}

/// `p(z)` and its real Jacobian `[[u_x, u_y], [v_x, v_y]]`.
fn eval_with_jacobian(params: &FamilyParams<f64>, z: Complex64) -> (Complex64, [[f64; 2]; 2]) {
    let (m, k, c) = (params.m() as i32, params.k() as i32, params.c());
    let zk = z.powi(k);
    let p = z.powi(m) + c * (zk + zk.conj()) - 1.0;
    // p_x = p_z + p_zbar and p_y = i (p_z - p_zbar), with the c-terms
    // combined by hand so the z^m part never cancels against them
    let lead = m as f64 * z.powi(m - 1);
    let gk = c * k as f64 * z.powi(k - 1);
    let dx = lead + 2.0 * gk.re;
    let dy = Complex64::i() * lead - 2.0 * gk.im;
    (p, [[dx.re, dy.re], [dx.im, dy.im]])
}

fn eval(params: &FamilyParams<f64>, z: Complex64) -> Complex64 {
    let (m, k, c) = (params.m() as i32, params.k() as i32, params.c());
    let zk = z.powi(k);
    z.powi(m) + c * (zk + zk.conj()) - 1.0
}

/// Annulus guaranteed to contain every zero, with 10% margins.
///
/// Outside `R = max(1, (2c+2)^{1/(m-|k|)}) + 1` the `z^m` term dominates.
/// For `k > 0` the disk `|z| < min(1/2, (4c)^{-1/k})` has `|p| > 1/4`. For
/// `k < 0` the bound uses that a zero `z` satisfies `Im z^m = 0`, so
/// `cos(k arg z)` is either zero or at least `sin(pi/(2m))` in magnitude.
pub fn search_annulus(params: &FamilyParams<f64>) -> Annulus {
    let (m, k, c) = (params.m(), params.k(), params.c());
    let outer = (2.0 * c + 2.0).powf(1.0 / (m - k.abs()) as f64).max(1.0) + 1.0;
    let inner = if k > 0 {
        (0.25 / c).powf(1.0 / k as f64).min(0.5)
    } else {
        let weight = (std::f64::consts::PI / (2.0 * m as f64)).sin();
        (c * weight).powf(1.0 / (-k) as f64).min(1.0) * 0.5
    };
    Annulus { inner: 0.9 * inner, outer: 1.1 * outer }
}

#[derive(Clone, Copy)]
struct Sample {
    p: Complex64,
    grad_u: f64,
    grad_v: f64,
}

fn sample(params: &FamilyParams<f64>, ln_r: f64, theta: f64) -> Sample {
    let z = Complex64::from_polar(ln_r.exp(), theta);
    let (p, j) = eval_with_jacobian(params, z);
    Sample { p, grad_u: j[0][0].hypot(j[0][1]), grad_v: j[1][0].hypot(j[1][1]) }
}

#[derive(Clone, Copy)]
struct Cell {
    ln_r: (f64, f64),
    theta: (f64, f64),
}

impl Cell {
    fn diameter(&self) -> f64 {
        let (r0, r1) = (self.ln_r.0.exp(), self.ln_r.1.exp());
        (r1 - r0).hypot(r1 * (self.theta.1 - self.theta.0))
    }

    fn center(&self) -> Complex64 {
        Complex64::from_polar((0.5 * (self.ln_r.0 + self.ln_r.1)).exp(), 0.5 * (self.theta.0 + self.theta.1))
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [
            (self.ln_r.0, self.theta.0),
            (self.ln_r.1, self.theta.0),
            (self.ln_r.0, self.theta.1),
            (self.ln_r.1, self.theta.1),
        ]
    }

    fn split(&self) -> [Cell; 4] {
        let rm = 0.5 * (self.ln_r.0 + self.ln_r.1);
        let tm = 0.5 * (self.theta.0 + self.theta.1);
        [
            Cell { ln_r: (self.ln_r.0, rm), theta: (self.theta.0, tm) },
            Cell { ln_r: (rm, self.ln_r.1), theta: (self.theta.0, tm) },
            Cell { ln_r: (self.ln_r.0, rm), theta: (tm, self.theta.1) },
            Cell { ln_r: (rm, self.ln_r.1), theta: (tm, self.theta.1) },
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Pattern {
    /// Both components change sign across the corners.
    Definite,
    /// At least one component could vanish inside without a corner sign change.
    Ambiguous,
    Empty,
}

fn classify(corners: &[Sample; 4], diameter: f64) -> Pattern {
    let component = |value: fn(&Sample) -> f64, grad: fn(&Sample) -> f64| {
        let lo = corners.iter().map(value).fold(f64::INFINITY, f64::min);
        let hi = corners.iter().map(value).fold(f64::NEG_INFINITY, f64::max);
        let change = lo <= 0.0 && hi >= 0.0;
        let nearest = corners.iter().map(|s| value(s).abs()).fold(f64::INFINITY, f64::min);
        let slope = corners.iter().map(grad).fold(0.0, f64::max);
        (change, nearest <= 1.5 * slope * diameter)
    };
    let (u_change, u_near) = component(|s| s.p.re, |s| s.grad_u);
    let (v_change, v_near) = component(|s| s.p.im, |s| s.grad_v);
    if u_change && v_change {
        Pattern::Definite
    } else if (u_change || u_near) && (v_change || v_near) {
        Pattern::Ambiguous
    } else {
        Pattern::Empty
    }
}

struct Candidate {
    cell: Cell,
    depth: u32,
    definite: bool,
}

fn scan_cell(params: &FamilyParams<f64>, cell: Cell, corners: [Sample; 4], depth: u32, out: &mut Vec<Candidate>) {
    match classify(&corners, cell.diameter()) {
        Pattern::Empty => {}
        Pattern::Definite => out.push(Candidate { cell, depth, definite: true }),
        Pattern::Ambiguous if depth >= MAX_SUBDIVISION => out.push(Candidate { cell, depth, definite: false }),
        Pattern::Ambiguous => out.extend(scan_split(params, &cell, depth)),
    }
}

fn scan_split(params: &FamilyParams<f64>, cell: &Cell, depth: u32) -> Vec<Candidate> {
    let mut out = Vec::new();
    for sub in cell.split() {
        let corners = sub.corners().map(|(lr, t)| sample(params, lr, t));
        scan_cell(params, sub, corners, depth + 1, &mut out);
    }
    out
}

/// Newton from the cell center. A definite cell whose iteration fails is
/// split and retried, since both components can change sign across a cell
/// without their zero curves crossing inside it.
fn refine_candidate(
    params: &FamilyParams<f64>,
    cand: &Candidate,
    annulus: &Annulus,
    resolution: usize,
) -> Result<Vec<Complex64>, OracleError> {
    let start = cand.cell.center();
    if let Some(z) = newton(params, start, annulus) {
        return Ok(vec![z]);
    }
    if !cand.definite {
        return Ok(Vec::new());
    }
    if cand.depth >= MAX_DEFINITE_SUBDIVISION {
        return Err(OracleError::ResolutionTooCoarse { resolution, re: start.re, im: start.im });
    }
    let mut found = Vec::new();
    for sub in scan_split(params, &cand.cell, cand.depth) {
        found.extend(refine_candidate(params, &sub, annulus, resolution)?);
    }
    Ok(found)
}

fn accepted_residual(params: &FamilyParams<f64>, z: Complex64) -> f64 {
    ORACLE_RESIDUAL * z.norm().powi(params.m() as i32).max(1.0)
}

fn newton_correction(jac: &[[f64; 2]; 2], p: Complex64) -> Option<Complex64> {
    let det = jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let dx = -(jac[1][1] * p.re - jac[0][1] * p.im) / det;
    let dy = -(-jac[1][0] * p.re + jac[0][0] * p.im) / det;
    Some(Complex64::new(dx, dy))
}

/// Damped Newton on `(Re p, Im p)`.
///
/// Damping uses the natural monotonicity test: a step is kept when the
/// correction computed with the current Jacobian shrinks. Plain `|p|` is a
/// poor merit function here because `Re p` and `Im p` can differ in scale by
/// many orders of magnitude. A point is returned only when the full step is
/// below [`REFINE_TOL`] relative to `|z|` and the scaled residual is within
/// [`ORACLE_RESIDUAL`].
fn newton(params: &FamilyParams<f64>, start: Complex64, annulus: &Annulus) -> Option<Complex64> {
    let mut z = start;
    for _ in 0..100 {
        let (p, jac) = eval_with_jacobian(params, z);
        let full = newton_correction(&jac, p)?;
        if full.norm() <= REFINE_TOL * z.norm() {
            let next = z + full;
            return (eval(params, next).norm() <= accepted_residual(params, next)).then_some(next);
        }
        let mut step = full;
        let cap = 0.5 * z.norm();
        if step.norm() > cap {
            step *= cap / step.norm();
        }
        let mut accepted = false;
        for _ in 0..30 {
            let next = z + step;
            let trial = newton_correction(&jac, eval(params, next))?;
            if trial.norm() < full.norm() {
                z = next;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        let r = z.norm();
        if !accepted || r < 0.5 * annulus.inner || r > 2.0 * annulus.outer {
            return None;
        }
    }
    None
}

/// Scan the annulus with `resolution` angular cells and a matching number
/// of log-spaced radial cells.
pub fn find_zeros_grid(params: &FamilyParams<f64>, resolution: usize) -> Result<OracleResult, OracleError> {
    if resolution < MIN_RESOLUTION {
        return Err(OracleError::ResolutionTooLow { resolution });
    }
    let annulus = search_annulus(params);
    let tau = std::f64::consts::TAU;
    let (ln_in, ln_out) = (annulus.inner.ln(), annulus.outer.ln());
    let span = ln_out - ln_in;
    let radial = resolution.max((resolution as f64 * span / tau).ceil() as usize);
    let ln_r = |i: usize| ln_in + span * i as f64 / radial as f64;
    let theta = |i: usize| tau * (i as f64 + ANGLE_OFFSET) / resolution as f64;

    let nodes: Vec<Vec<Sample>> = (0..=radial)
        .into_par_iter()
        .map(|i| (0..=resolution).map(|t| sample(params, ln_r(i), theta(t))).collect())
        .collect();

    let candidates: Vec<Candidate> = (0..radial)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut out = Vec::new();
            for t in 0..resolution {
                let cell = Cell { ln_r: (ln_r(i), ln_r(i + 1)), theta: (theta(t), theta(t + 1)) };
                let corners = [nodes[i][t], nodes[i + 1][t], nodes[i][t + 1], nodes[i + 1][t + 1]];
                scan_cell(params, cell, corners, 0, &mut out);
            }
            out
        })
        .collect();

    let refined: Vec<Result<Vec<Complex64>, OracleError>> =
        candidates.par_iter().map(|cand| refine_candidate(params, cand, &annulus, resolution)).collect();

    let mut zeros: Vec<Complex64> = Vec::new();
    let mut matched = 0;
    let refined: Vec<Vec<Complex64>> = refined.into_iter().collect::<Result<_, _>>()?;
    for z in refined.into_iter().flatten() {
        let r = z.norm();
        if r < annulus.inner || r > annulus.outer {
            continue;
        }
        matched += 1;
        let merge = 10.0 * REFINE_TOL * r.max(1.0);
        if !zeros.iter().any(|w| (w - z).norm() <= merge) {
            zeros.push(z);
        }
    }
    zeros.sort_by(|a, b| {
        let key = |z: &Complex64| (z.arg().rem_euclid(tau), z.norm());
        key(a).partial_cmp(&key(b)).unwrap()
    });
    Ok(OracleResult { params: *params, zeros, grid_resolution: resolution, annulus, matched_count: matched })
}

/// Retry [`find_zeros_grid`] at doubled resolution while it reports the grid
/// as too coarse.
pub fn find_zeros_adaptive(
    params: &FamilyParams<f64>,
    resolution: usize,
    max_resolution: usize,
) -> Result<OracleResult, OracleError> {
    let mut res = resolution;
    loop {
        match find_zeros_grid(params, res) {
            Err(OracleError::ResolutionTooCoarse { .. }) if res * 2 <= max_resolution => res *= 2,
            other => return other,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchedPair {
    pub oracle_index: usize,
    pub ray_index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub pairs: Vec<MatchedPair>,
    pub unmatched_oracle: Vec<usize>,
    pub unmatched_rays: Vec<usize>,
    /// Largest distance among matched pairs (0 when nothing matched).
    pub max_distance: f64,
}

impl Comparison {
    pub fn agrees(&self, tolerance: f64) -> bool {
        self.unmatched_oracle.is_empty() && self.unmatched_rays.is_empty() && self.max_distance < tolerance
    }
}

/// Pair oracle zeros with ray zeros, closest pairs first.
pub fn compare(
    params: &FamilyParams<f64>,
    oracle: &OracleResult,
    ray_zeros: &[ZeroRecord<f64>],
) -> Result<Comparison, OracleError> {
    if oracle.params != *params || ray_zeros.iter().any(|z| z.j < 0 || z.j >= 2 * params.m()) {
        return Err(OracleError::ParamsMismatch);
    }
    let mut all: Vec<(f64, usize, usize)> = Vec::new();
    for (a, oz) in oracle.zeros.iter().enumerate() {
        for (b, rz) in ray_zeros.iter().enumerate() {
            all.push(((oz - rz.z).norm(), a, b));
        }
    }
    all.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut used_o = vec![false; oracle.zeros.len()];
    let mut used_r = vec![false; ray_zeros.len()];
    let mut pairs = Vec::new();
    for (d, a, b) in all {
        if used_o[a] || used_r[b] {
            continue;
        }
        used_o[a] = true;
        used_r[b] = true;
        pairs.push(MatchedPair { oracle_index: a, ray_index: b, distance: d });
    }
    let max_distance = pairs.iter().map(|p| p.distance).fold(0.0, f64::max);
    pairs.sort_by_key(|p| p.oracle_index);
    Ok(Comparison {
        pairs,
        unmatched_oracle: (0..used_o.len()).filter(|&i| !used_o[i]).collect(),
        unmatched_rays: (0..used_r.len()).filter(|&i| !used_r[i]).collect(),
        max_distance,
    })
}
