//! Quantities built on the jump space: doubling ratios, porosity witnesses
//! and cones, measure porosity, the chart uniqueness constant and the
//! approximate-differentiability defect.

pub mod approx;
pub mod doubling;
pub mod gamma;
pub mod porosity;
pub mod uniqueness;

pub use approx::{approx_diff_defect, vertical_derivative, DefectEstimate, VerticalDerivative};
pub use doubling::{doubling_ratio, is_in_ek, non_doubling_scan, NonDoublingRow, NonDoublingValues, SkipReason};
pub use gamma::{measure_porosity_gamma, GammaCertificate, GammaConfig};
pub use porosity::{
    cone_value, nondiff_score, porosity_scan, sup_cones, PorosityConfig, PorosityScan, RadiusResult, WitnessCertificate,
};
pub use uniqueness::{chart_uniqueness_lambda, Increment, LambdaEstimate};
