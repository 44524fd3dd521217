//! Feature importance scores against a numeric target.
//!
//! Numeric features score `|r|` (Pearson); categorical features score the
//! correlation ratio `η = sqrt(SS_between / SS_total)` of the target
//! grouped by level. Both lie in [0, 1]. Rows with a missing feature or
//! target value are ignored pairwise. Constant features (and constant
//! targets) score 0.

use super::descriptive::{mean, pearson};
use super::{AnalysisError, SCHEMA_VERSION};
use crate::table::{ColumnData, ColumnKind, DataColumn};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature: String,
    pub kind: ColumnKind,
    /// `abs_pearson` or `correlation_ratio`.
    pub method: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub schema_version: u32,
    pub target: String,
    pub scores: Vec<FeatureScore>,
}

impl FeatureReport {
    pub fn new(target: &str, scores: Vec<FeatureScore>) -> Self {
        FeatureReport {
            schema_version: SCHEMA_VERSION,
            target: target.to_string(),
            scores,
        }
    }
}

/// Scores every feature and sorts descending; ties keep column order.
pub fn feature_scores(
    features: &[DataColumn],
    target: &DataColumn,
) -> Result<Vec<FeatureScore>, AnalysisError> {
    if features.is_empty() {
        return Err(AnalysisError::InvalidArgument("no feature columns".into()));
    }
    let y = target.as_numeric()?;
    let mut scores = Vec::with_capacity(features.len());
    for f in features {
        if f.len() != y.len() {
            return Err(AnalysisError::InvalidArgument(format!(
                "feature `{}` has {} rows, target `{}` has {}",
                f.name,
                f.len(),
                target.name,
                y.len()
            )));
        }
        let (method, score) = match &f.data {
            ColumnData::Numeric(x) => {
                let (a, b): (Vec<f64>, Vec<f64>) =
                    x.iter().zip(y).filter_map(|(a, b)| Some(((*a)?, (*b)?))).unzip();
                ("abs_pearson", pearson(&a, &b).map_or(0.0, f64::abs))
            }
            ColumnData::Categorical(x) => {
                let pairs: Vec<(&str, f64)> = x
                    .iter()
                    .zip(y)
                    .filter_map(|(a, b)| Some((a.as_deref()?, (*b)?)))
                    .collect();
                ("correlation_ratio", correlation_ratio(&pairs))
            }
        };
        scores.push(FeatureScore {
            feature: f.name.clone(),
            kind: f.kind(),
            method: method.into(),
            score: score.clamp(0.0, 1.0),
        });
    }
    scores.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(scores)
}

/// η for (level, value) pairs; 0 when the values are constant.
pub fn correlation_ratio(pairs: &[(&str, f64)]) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    let values: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let grand = mean(&values);
    let sst: f64 = values.iter().map(|v| (v - grand).powi(2)).sum();
    if sst <= 0.0 {
        return 0.0;
    }
    let mut groups: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
    for (level, v) in pairs {
        let e = groups.entry(level).or_insert((0.0, 0));
        e.0 += v;
        e.1 += 1;
    }
    let ssb: f64 = groups
        .values()
        .map(|(s, c)| *c as f64 * (s / *c as f64 - grand).powi(2))
        .sum();
    (ssb / sst).sqrt()
}
