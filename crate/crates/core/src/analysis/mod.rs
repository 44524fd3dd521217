//! Statistical analysis of result tables: automatic hypothesis-test
//! selection, distribution fitting, feature scoring, Pareto fronts, outlier
//! detection, exploratory summaries and SVG plots.
//!
//! Every report serializes to JSON with a `schema_version` field.

pub mod descriptive;
pub mod eda;
pub mod features;
pub mod fit;
pub mod hypothesis;
pub mod normality;
pub mod outliers;
pub mod pareto;
pub mod plot;

pub use eda::{eda_summary, EdaReport};
pub use features::{feature_scores, FeatureScore};
pub use fit::{fit_distributions, Family, FitOptions, FitReport};
pub use hypothesis::{run_hypothesis_test, Decision, TestKind, TestReport};
pub use outliers::{detect_outliers, OutlierMethod, OutlierReport};
pub use pareto::{pareto_front, Direction, ParetoResult};
pub use plot::{emit_plot, render_svg, Plot, PlotOptions};

use crate::table::TableError;
use thiserror::Error;

/// Version stamped into every analysis report.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
