//! Experiment orchestration: scaling plans and curves, method-comparison
//! reports and utility comparisons.

pub mod report;
pub mod scaling;

pub use report::{
    build_report, render_report, utility_comparison, CerSummary, MetricInput, MetricReport,
    MetricValue, ReportFormat, UtilityComparison, UtilityRow, TABLE_COLUMNS,
};
pub use scaling::{
    scaling_curve, scaling_sizes, scaling_subsets, CurvePoint, ScalingCurve, ScalingPlan,
};
