//! Ground truth: filament curves with tangent/normal fields, tube and support
//! geometry, thickness, and the analytic distance transform used to validate
//! the estimators.

mod curve;
mod support;
mod thickness;

pub use curve::{build_curve, CurveFamily, FilamentCurve, DEFAULT_RESOLUTION};
pub use support::SupportModel;
pub use thickness::{thickness, ThicknessReport, THICKNESS_INFINITE};
