use std::fmt;

use rayzeros::oracle::find_zeros_adaptive;
use rayzeros::{
    all_zeros_with, analyze_all, compare, count_at_with, predict_at, predict_census, predict_table, thresholds,
    validate, AlphaSign, CountPrediction, Direction, FamilyParamsF64, Parity, RootError, Source, TolerancesF64,
};

use crate::args::{Common, PointArgs, Spacing, SweepArgs, VerifyArgs};
use crate::output::{
    emit, join, CheckRow, Envelope, Meta, ParamsOut, PredictionRow, RayRow, Row, SweepRow, ThresholdRow, TolerancesOut,
    ZeroRow,
};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Mismatch,
    Numerical(String),
    Io(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) | Failure::Io(_) => 1,
            Failure::Mismatch => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Invalid(msg) => write!(f, "invalid parameters: {msg}"),
            Failure::Mismatch => write!(f, "verification failed"),
            Failure::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            Failure::Io(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<RootError> for Failure {
    fn from(e: RootError) -> Self {
        match e {
            RootError::Family(f) => Failure::Invalid(f.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn params_for(common: &Common, c: f64) -> Result<FamilyParamsF64, Failure> {
    validate(common.m, common.k, c).map_err(|e| Failure::Invalid(e.to_string()))
}

fn tolerances(common: &Common) -> Result<TolerancesF64, Failure> {
    let mut tol = TolerancesF64::default();
    for (name, value, slot) in [
        ("tol-radius", common.tol_radius, &mut tol.radius_rel),
        ("tol-residual", common.tol_residual, &mut tol.residual),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(Failure::Invalid(format!("--{name} must be positive and finite, got {v}")));
            }
            *slot = v;
        }
    }
    Ok(tol)
}

fn envelope<R>(common: &Common, c: Option<f64>, tol: &TolerancesF64, results: Vec<R>) -> Envelope<R> {
    Envelope {
        params: ParamsOut { m: common.m, k: common.k, c },
        results,
        meta: Meta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            tolerances: TolerancesOut {
                radius_rel: tol.radius_rel,
                residual: tol.residual,
                degenerate_band: tol.degenerate_band,
            },
        },
        thresholds: None,
    }
}

fn write<R: Row>(common: &Common, env: &Envelope<R>) -> Outcome {
    emit(env, common.format, common.output.as_deref()).map_err(Failure::Io)
}

fn parity_name(p: Parity) -> &'static str {
    match p {
        Parity::Even => "even",
        Parity::Odd => "odd",
    }
}

fn sign_name(s: AlphaSign) -> &'static str {
    match s {
        AlphaSign::Positive => "positive",
        AlphaSign::Zero => "zero",
        AlphaSign::Negative => "negative",
    }
}

fn direction_name(d: Direction) -> &'static str {
    match d {
        Direction::Increasing => "increasing",
        Direction::Decreasing => "decreasing",
    }
}

fn threshold_rows(params: &FamilyParamsF64) -> Vec<ThresholdRow> {
    thresholds(params)
        .into_iter()
        .map(|t| ThresholdRow { c0: t.c0, alpha_class: t.alpha_class, rays: join(t.rays) })
        .collect()
}

pub fn classify(args: &PointArgs) -> Outcome {
    let params = params_for(&args.common, args.c)?;
    let tol = tolerances(&args.common)?;
    let rows = analyze_all(&params)
        .into_iter()
        .map(|a| {
            let count = count_at_with(&a, args.c, tol.degenerate_band);
            RayRow {
                j: a.ray.j,
                angle: a.ray.angle(),
                residue: a.ray.residue,
                parity: parity_name(a.ray.parity).into(),
                alpha: a.alpha,
                alpha_sign: sign_name(a.ray.alpha_sign).into(),
                case: format!("{:?}", a.case),
                zeros: count.zeros,
                degenerate: count.degenerate,
                r0: a.r0,
                c0: a.c0,
            }
        })
        .collect();
    write(&args.common, &envelope(&args.common, Some(args.c), &tol, rows))
}

fn prediction_row(p: &CountPrediction, count: u64) -> PredictionRow {
    PredictionRow {
        source: match p.source {
            Source::CaseTable => "case_table".into(),
            Source::Census => "census".into(),
        },
        min_count: p.min_count,
        max_count: p.max_count,
        direction: direction_name(p.direction).into(),
        count_at_c: count,
    }
}

pub fn predict(args: &PointArgs) -> Outcome {
    let params = params_for(&args.common, args.c)?;
    let tol = tolerances(&args.common)?;
    let count = predict_at(&params, args.c);
    let rows = vec![prediction_row(&predict_table(&params), count), prediction_row(&predict_census(&params), count)];
    write(&args.common, &envelope(&args.common, Some(args.c), &tol, rows))
}

pub fn zeros(args: &PointArgs) -> Outcome {
    let params = params_for(&args.common, args.c)?;
    let tol = tolerances(&args.common)?;
    let rows = all_zeros_with(&params, &tol)?
        .into_iter()
        .map(|z| ZeroRow { j: z.j, r: z.r, re: z.z.re, im: z.z.im, residual: z.residual, degenerate: z.degenerate })
        .collect();
    write(&args.common, &envelope(&args.common, Some(args.c), &tol, rows))
}

pub fn list_thresholds(args: &PointArgs) -> Outcome {
    let params = params_for(&args.common, args.c)?;
    let tol = tolerances(&args.common)?;
    write(&args.common, &envelope(&args.common, Some(args.c), &tol, threshold_rows(&params)))
}

pub fn sweep_grid(c_min: f64, c_max: f64, steps: usize, spacing: Spacing) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps)
        .map(|i| {
            let t = i as f64 / last;
            match (i, spacing) {
                (0, _) => c_min,
                (i, _) if i == steps - 1 => c_max,
                (_, Spacing::Linear) => c_min + (c_max - c_min) * t,
                (_, Spacing::Log) => (c_min.ln() + (c_max.ln() - c_min.ln()) * t).exp(),
            }
        })
        .collect()
}

pub fn sweep(args: &SweepArgs) -> Outcome {
    if !(args.c_min.is_finite() && args.c_max.is_finite() && args.c_min > 0.0 && args.c_min < args.c_max) {
        return Err(Failure::Invalid(format!(
            "need 0 < c-min < c-max, got c-min = {}, c-max = {}",
            args.c_min, args.c_max
        )));
    }
    if args.steps < 2 {
        return Err(Failure::Invalid(format!("steps must be at least 2, got {}", args.steps)));
    }
    let params = params_for(&args.common, args.c_min)?;
    let tol = tolerances(&args.common)?;
    let critical: Vec<f64> = thresholds(&params).iter().map(|t| t.c0).collect();
    let mut prev: Option<f64> = None;
    let rows = sweep_grid(args.c_min, args.c_max, args.steps, args.spacing)
        .into_iter()
        .map(|c| {
            let crossed = match prev {
                Some(p) => join(critical.iter().filter(|&&c0| p < c0 && c0 <= c)),
                None => String::new(),
            };
            prev = Some(c);
            SweepRow { c, count: predict_at(&params, c), crossed }
        })
        .collect();
    let mut env = envelope(&args.common, None, &tol, rows);
    env.thresholds = Some(threshold_rows(&params));
    write(&args.common, &env)
}

/// Five log-spaced values in `[0.01, 100]`, minus any within relative
/// `1e-3` of a critical value.
pub fn verify_grid(params: &FamilyParamsF64) -> Vec<f64> {
    let critical: Vec<f64> = thresholds(params).iter().map(|t| t.c0).collect();
    (0..5).map(|i| 10f64.powi(i - 2)).filter(|c| critical.iter().all(|c0| ((c - c0) / c0).abs() >= 1e-3)).collect()
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let base = params_for(&args.common, args.c.unwrap_or(1.0))?;
    let tol = tolerances(&args.common)?;
    if args.resolution < rayzeros::oracle::MIN_RESOLUTION {
        return Err(Failure::Invalid(format!(
            "resolution must be at least {}, got {}",
            rayzeros::oracle::MIN_RESOLUTION,
            args.resolution
        )));
    }
    let describe = |p: &CountPrediction| format!("{}..{} {}", p.min_count, p.max_count, direction_name(p.direction));
    let (table, census) = (predict_table(&base), predict_census(&base));
    let mut rows = vec![CheckRow {
        check: "table_equals_census".into(),
        c: None,
        expected: describe(&table),
        observed: describe(&census),
        passed: table.agrees_with(&census),
        max_distance: None,
        resolution: None,
    }];

    let cs = match args.c {
        Some(c) => vec![c],
        None => verify_grid(&base),
    };
    for c in cs {
        let params = params_for(&args.common, c)?;
        let located = all_zeros_with(&params, &tol)?;
        let predicted = predict_at(&params, c);
        rows.push(CheckRow {
            check: "zeros_match_prediction".into(),
            c: Some(c),
            expected: predicted.to_string(),
            observed: located.len().to_string(),
            passed: located.len() as u64 == predicted,
            max_distance: None,
            resolution: None,
        });
        let oracle = find_zeros_adaptive(&params, args.resolution, args.resolution.max(1024))
            .map_err(|e| Failure::Numerical(e.to_string()))?;
        let cmp = compare(&params, &oracle, &located).map_err(|e| Failure::Numerical(e.to_string()))?;
        rows.push(CheckRow {
            check: "oracle_agreement".into(),
            c: Some(c),
            expected: located.len().to_string(),
            observed: oracle.zeros.len().to_string(),
            passed: cmp.agrees(1e-6),
            max_distance: Some(cmp.max_distance),
            resolution: Some(oracle.grid_resolution),
        });
    }
    let failed = rows.iter().any(|r| !r.passed);
    write(&args.common, &envelope(&args.common, args.c, &tol, rows))?;
    if failed {
        Err(Failure::Mismatch)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_grid_hits_both_ends() {
        for spacing in [Spacing::Linear, Spacing::Log] {
            let g = sweep_grid(0.05, 5.0, 200, spacing);
            assert_eq!(g.len(), 200);
            assert_eq!((g[0], g[199]), (0.05, 5.0));
            assert!(g.windows(2).all(|w| w[0] < w[1]));
        }
        let g = sweep_grid(1e-3, 1e3, 7, Spacing::Log);
        assert!((g[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn verify_grid_skips_critical_values() {
        let p = validate(5, 4, 1.0).unwrap();
        assert_eq!(verify_grid(&p), vec![0.01, 0.1, 1.0, 10.0, 100.0]);
        // m = 2, k = 1 has no threshold rays at all
        assert_eq!(verify_grid(&validate(2, 1, 1.0).unwrap()).len(), 5);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(Failure::Invalid(String::new()).exit_code(), 1);
        assert_eq!(Failure::Mismatch.exit_code(), 2);
        assert_eq!(Failure::Numerical(String::new()).exit_code(), 3);
        let bracket = RootError::BracketFailure { j: 0, lo: 0.0, hi: 1.0, f_lo: 1.0, f_hi: 1.0 };
        assert_eq!(Failure::from(bracket).exit_code(), 3);
    }
}
