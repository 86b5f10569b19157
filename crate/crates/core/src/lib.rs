//! Zero counting and zero location for the harmonic family
//! `p(z) = z^m + c(z^k + conj(z)^k) - 1`.
//!
//! Every zero lies on one of the `2m` rays `arg z = j pi / m`. Each ray
//! reduces to a real polynomial in `r` whose shape is fixed by the parity of
//! `j` and the sign of `cos(k j pi / m)`. The [`ray`] module classifies rays
//! and computes threshold values of `c`; [`roots`] locates the zeros;
//! [`predict`] gives the global counts; [`oracle`] is an independent grid
//! search used for cross-checking.
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`). The aliases
//! below fix the scalar for the common cases.

pub mod family;
pub mod oracle;
pub mod predict;
pub mod ray;
pub mod roots;
pub mod scalar;
pub mod unity;

pub use family::{
    classify_ray, evaluate, evaluate_on_ray, validate, AlphaSign, FamilyError, FamilyParams, Parity, RayDescriptor,
};
pub use oracle::{compare, find_zeros_adaptive, find_zeros_grid, Comparison, OracleError, OracleResult};
pub use predict::{predict_at, predict_census, predict_table, CountPrediction, Direction, Source};
pub use ray::{
    analyze_all, analyze_ray, count_at, count_at_with, thresholds, CountProfile, RayAnalysis, RayCase, RayCount,
    Threshold,
};
pub use roots::{all_zeros, all_zeros_with, solve_ray, solve_ray_with, RootError, Tolerances, ZeroRecord};
pub use scalar::Scalar;
pub use unity::{census, positive_halfplane_count, ParityCensus};

pub type FamilyParamsF64 = FamilyParams<f64>;
pub type FamilyParamsF32 = FamilyParams<f32>;
pub type RayAnalysisF64 = RayAnalysis<f64>;
pub type RayAnalysisF32 = RayAnalysis<f32>;
pub type ThresholdF64 = Threshold<f64>;
pub type ThresholdF32 = Threshold<f32>;
pub type ZeroRecordF64 = ZeroRecord<f64>;
pub type ZeroRecordF32 = ZeroRecord<f32>;
pub type TolerancesF64 = Tolerances<f64>;
pub type TolerancesF32 = Tolerances<f32>;
