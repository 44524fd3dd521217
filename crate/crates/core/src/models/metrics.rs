//! Regression and classification metrics.
//!
//! Regression: MSE, MAE and `R² = 1 − SS_res / SS_tot`; R² is `None`
//! (serialized as `null`) when the truth is constant. Classification:
//! accuracy plus per-class precision, recall and F1 and their macro
//! averages over the classes present in either vector. A ratio with a zero
//! denominator counts as 0.

use super::ModelError;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionMetrics {
    pub mse: f64,
    pub mae: f64,
    pub r2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub class: String,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationMetrics {
    pub accuracy: f64,
    pub per_class: Vec<ClassMetrics>,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum MetricSet {
    Regression(RegressionMetrics),
    Classification(ClassificationMetrics),
}

fn check_lengths(a: usize, b: usize) -> Result<(), ModelError> {
    if a != b {
        return Err(ModelError::InvalidArgument(format!(
            "{a} predictions but {b} truth values"
        )));
    }
    if a == 0 {
        return Err(ModelError::InvalidArgument("no predictions".into()));
    }
    Ok(())
}

pub fn regression_metrics(pred: &[f64], truth: &[f64]) -> Result<RegressionMetrics, ModelError> {
    check_lengths(pred.len(), truth.len())?;
    let n = pred.len() as f64;
    let ss_res: f64 = pred.iter().zip(truth).map(|(p, t)| (p - t).powi(2)).sum();
    let mae = pred.iter().zip(truth).map(|(p, t)| (p - t).abs()).sum::<f64>() / n;
    let m = truth.iter().sum::<f64>() / n;
    let ss_tot: f64 = truth.iter().map(|t| (t - m).powi(2)).sum();
    Ok(RegressionMetrics {
        mse: ss_res / n,
        mae,
        r2: (ss_tot > 0.0).then(|| 1.0 - ss_res / ss_tot),
    })
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

pub fn classification_metrics(
    pred: &[String],
    truth: &[String],
) -> Result<ClassificationMetrics, ModelError> {
    check_lengths(pred.len(), truth.len())?;
    let classes: BTreeSet<&str> = pred.iter().chain(truth).map(String::as_str).collect();
    let correct = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    let mut per_class = Vec::with_capacity(classes.len());
    for c in &classes {
        let tp = pred.iter().zip(truth).filter(|(p, t)| p == c && t == c).count();
        let predicted = pred.iter().filter(|p| p == c).count();
        let actual = truth.iter().filter(|t| t == c).count();
        let precision = ratio(tp, predicted);
        let recall = ratio(tp, actual);
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        per_class.push(ClassMetrics {
            class: c.to_string(),
            precision,
            recall,
            f1,
            support: actual,
        });
    }
    let k = per_class.len() as f64;
    Ok(ClassificationMetrics {
        accuracy: ratio(correct, pred.len()),
        macro_precision: per_class.iter().map(|c| c.precision).sum::<f64>() / k,
        macro_recall: per_class.iter().map(|c| c.recall).sum::<f64>() / k,
        macro_f1: per_class.iter().map(|c| c.f1).sum::<f64>() / k,
        per_class,
    })
}

/// Metrics for predictions of the same kind as the truth.
pub fn evaluate_metrics(
    pred: &super::Prediction,
    truth: &super::Prediction,
) -> Result<MetricSet, ModelError> {
    use super::Prediction as P;
    match (pred, truth) {
        (P::Regression(p), P::Regression(t)) => Ok(MetricSet::Regression(regression_metrics(p, t)?)),
        (P::Classification(p), P::Classification(t)) => {
            Ok(MetricSet::Classification(classification_metrics(p, t)?))
        }
        _ => Err(ModelError::InvalidArgument(
            "predictions and truth are of different task types".into(),
        )),
    }
}
