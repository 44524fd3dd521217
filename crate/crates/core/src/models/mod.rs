//! Surrogate models over result tables.
//!
//! A [`ModelSpec`] names a family, a task, the target column, per-column
//! preprocessing directives and hyperparameter ranges. [`train`] fits one
//! configuration; [`random_search_cv`] samples configurations, scores each
//! by k-fold cross-validation and refits the best on all data. Trained
//! models serialize to versioned JSON.

pub mod forest;
pub mod kfold;
pub mod knn;
pub mod linear;
pub mod metrics;
pub mod mlp;
pub mod preprocess;
pub mod search;
pub mod smote;
pub mod spec;
pub mod trained;
pub mod tree;

pub use kfold::kfold_split;
pub use metrics::{evaluate_metrics, ClassificationMetrics, MetricSet, RegressionMetrics};
pub use preprocess::{preprocess, ColumnDirective, FittedPreprocessor, PreprocessorSpec, Transformed};
pub use search::{random_search_cv, ConfigResult, CvReport};
pub use smote::{smote, SmoteOutput};
pub use spec::{Hyperparams, ModelFamily, ModelSpec, ParamRange, ParamSpec, Task};
pub use trained::{train, train_with, Prediction, TrainedModel, FORMAT_VERSION};

use crate::table::TableError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("model spec error: {0}")]
    Spec(String),
    #[error("training error: {0}")]
    Training(String),
    #[error("model format version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Training targets in the form the learners consume.
#[derive(Debug, Clone, PartialEq)]
pub enum Targets {
    Regression(Vec<f64>),
    /// Class indices into `classes`.
    Classification {
        labels: Vec<usize>,
        classes: Vec<String>,
    },
}

impl Targets {
    pub fn len(&self) -> usize {
        match self {
            Targets::Regression(y) => y.len(),
            Targets::Classification { labels, .. } => labels.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn select(&self, rows: &[usize]) -> Targets {
        match self {
            Targets::Regression(y) => Targets::Regression(rows.iter().map(|&r| y[r]).collect()),
            Targets::Classification { labels, classes } => Targets::Classification {
                labels: rows.iter().map(|&r| labels[r]).collect(),
                classes: classes.clone(),
            },
        }
    }
}

/// Index of the largest count; ties go to the lowest index.
pub(crate) fn argmax(counts: &[f64]) -> usize {
    let mut best = 0;
    for (i, c) in counts.iter().enumerate() {
        if *c > counts[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
