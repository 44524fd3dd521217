//! Random-search hyperparameter tuning scored by k-fold cross-validation.
//!
//! Configurations are drawn sequentially from `Stream::new(seed).substream(0)`;
//! configuration `i` trains with the seed `Stream::new(seed).substream(i + 1)`
//! yields first. Every configuration sees the same folds
//! (`kfold_split(n, k, seed)`), and preprocessing is re-fitted on each
//! training fold so validation rows never influence their own transform.
//! Configurations are evaluated in parallel; the report does not depend on
//! scheduling. The score is MSE (lower is better) for regression and
//! accuracy (higher is better) for classification; ties go to the earlier
//! configuration. A configuration that fails to train is recorded with its
//! error and no score.

use super::kfold::{kfold_split, training_indices};
use super::spec::{Hyperparams, ModelSpec, Task};
use super::trained::{extract_targets, fit_model, train_with, TrainedModel};
use super::{ModelError, Targets};
use crate::analysis::SCHEMA_VERSION;
use crate::rng::Stream;
use crate::table::DataColumn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigResult {
    pub index: usize,
    pub hyperparams: Hyperparams,
    pub seed: u64,
    pub fold_scores: Vec<f64>,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub schema_version: u32,
    pub k: usize,
    pub budget: usize,
    pub seed: u64,
    /// `mse` or `accuracy`.
    pub metric: String,
    pub configurations: Vec<ConfigResult>,
    pub best_index: usize,
    pub best_hyperparams: Hyperparams,
    pub fold_scores: Vec<f64>,
    pub mean: f64,
    pub sd: f64,
}

fn fold_score(task: Task, pred: &[f64], truth: &Targets) -> f64 {
    match truth {
        Targets::Regression(y) => {
            debug_assert_eq!(task, Task::Regression);
            pred.iter().zip(y).map(|(p, t)| (p - t).powi(2)).sum::<f64>() / y.len() as f64
        }
        Targets::Classification { labels, .. } => {
            let hits = pred
                .iter()
                .zip(labels)
                .filter(|(p, l)| **p as usize == **l)
                .count();
            hits as f64 / labels.len() as f64
        }
    }
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    let sd = if v.len() > 1 {
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (m, sd)
}

fn cross_validate(
    spec: &ModelSpec,
    hp: &Hyperparams,
    table: &[DataColumn],
    targets: &Targets,
    folds: &[Vec<usize>],
    seed: u64,
) -> Result<Vec<f64>, ModelError> {
    let n = targets.len();
    folds
        .iter()
        .map(|fold| {
            let train_rows = training_indices(n, fold);
            let train_table: Vec<DataColumn> = table.iter().map(|c| c.select(&train_rows)).collect();
            let valid_table: Vec<DataColumn> = table.iter().map(|c| c.select(fold)).collect();
            let pre = spec.preprocess.fit(&train_table)?;
            let xt = pre.apply(&train_table)?;
            let xv = pre.apply(&valid_table)?;
            let model = fit_model(hp, &xt.rows, &targets.select(&train_rows), seed)?;
            let tm_pred: Vec<f64> = xv.rows.iter().map(|r| model.predict_row(r)).collect();
            Ok(fold_score(spec.task, &tm_pred, &targets.select(fold)))
        })
        .collect()
}

/// Samples `budget` configurations, cross-validates each with `k` folds
/// and refits the best on all rows.
pub fn random_search_cv(
    spec: &ModelSpec,
    data: &[DataColumn],
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<(TrainedModel, CvReport), ModelError> {
    spec.validate()?;
    if budget == 0 {
        return Err(ModelError::InvalidArgument("budget must be >= 1".into()));
    }
    let (targets, keep) = extract_targets(spec.task, data, &spec.target)?;
    let table: Vec<DataColumn> = data.iter().map(|c| c.select(&keep)).collect();
    spec.preprocess.validate(&table)?;
    let folds = kfold_split(targets.len(), k, seed)?;

    let root = Stream::new(seed);
    let mut sampler = root.substream(0);
    let configs: Vec<(Hyperparams, u64)> = (0..budget)
        .map(|i| {
            Ok((
                spec.sample(&mut sampler)?,
                root.substream(i as u64 + 1).next_u64(),
            ))
        })
        .collect::<Result<_, ModelError>>()?;

    let configurations: Vec<ConfigResult> = configs
        .into_par_iter()
        .enumerate()
        .map(
            |(index, (hp, cfg_seed))| match cross_validate(spec, &hp, &table, &targets, &folds, cfg_seed) {
                Ok(scores) => {
                    let (m, sd) = mean_sd(&scores);
                    ConfigResult {
                        index,
                        hyperparams: hp,
                        seed: cfg_seed,
                        fold_scores: scores,
                        mean: m.is_finite().then_some(m),
                        sd: m.is_finite().then_some(sd),
                        error: (!m.is_finite()).then(|| "non-finite score".to_string()),
                    }
                }
                Err(e) => ConfigResult {
                    index,
                    hyperparams: hp,
                    seed: cfg_seed,
                    fold_scores: Vec::new(),
                    mean: None,
                    sd: None,
                    error: Some(e.to_string()),
                },
            },
        )
        .collect();

    let better = |a: f64, b: f64| match spec.task {
        Task::Regression => a < b,
        Task::Classification => a > b,
    };
    let mut best: Option<&ConfigResult> = None;
    for c in &configurations {
        if let Some(m) = c.mean {
            if best.is_none_or(|b| better(m, b.mean.expect("scored"))) {
                best = Some(c);
            }
        }
    }
    let best = best.ok_or_else(|| {
        ModelError::Training(format!(
            "no configuration could be trained; first error: {}",
            configurations[0].error.as_deref().unwrap_or("unknown")
        ))
    })?;
    let model = train_with(spec, &best.hyperparams, data, best.seed)?;
    let report = CvReport {
        schema_version: SCHEMA_VERSION,
        k,
        budget,
        seed,
        metric: match spec.task {
            Task::Regression => "mse",
            Task::Classification => "accuracy",
        }
        .to_string(),
        best_index: best.index,
        best_hyperparams: best.hyperparams.clone(),
        fold_scores: best.fold_scores.clone(),
        mean: best.mean.expect("scored"),
        sd: best.sd.unwrap_or(0.0),
        configurations: configurations.clone(),
    };
    Ok((model, report))
}
