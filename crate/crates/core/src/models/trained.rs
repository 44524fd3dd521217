//! Training a single configuration, prediction and model persistence.
//!
//! Rows whose target is missing are dropped before training. Classification
//! targets may be categorical or numeric (numbers become their shortest
//! round-trip text); classes are ordered lexicographically and at least two
//! must be present. A trained model is self-contained JSON carrying
//! `format_version`; loading any other version fails with
//! [`ModelError::Version`].

use super::forest::{ForestModel, ForestParams};
use super::knn::KnnModel;
use super::linear::RidgeModel;
use super::mlp::{MlpModel, MlpParams};
use super::preprocess::FittedPreprocessor;
use super::spec::{Hyperparams, ModelFamily, ModelSpec, Task};
use super::tree::{TreeModel, TreeParams};
use super::{ModelError, Targets};
use crate::rng::Stream;
use crate::table::{format_real, ColumnData, DataColumn};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", content = "values", rename_all = "snake_case")]
pub enum Prediction {
    Regression(Vec<f64>),
    Classification(Vec<String>),
}

impl Prediction {
    pub fn len(&self) -> usize {
        match self {
            Prediction::Regression(v) => v.len(),
            Prediction::Classification(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FittedModel {
    LinearRidge(RidgeModel),
    Knn(KnnModel),
    CartTree(TreeModel),
    RandomForest(ForestModel),
    Mlp(MlpModel),
}

impl FittedModel {
    pub(crate) fn predict_row(&self, row: &[f64]) -> f64 {
        match self {
            FittedModel::LinearRidge(m) => m.predict_row(row),
            FittedModel::Knn(m) => m.predict_row(row),
            FittedModel::CartTree(m) => m.predict_row(row),
            FittedModel::RandomForest(m) => m.predict_row(row),
            FittedModel::Mlp(m) => m.predict_row(row),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub format_version: u32,
    pub family: ModelFamily,
    pub task: Task,
    pub target: String,
    pub seed: u64,
    pub hyperparams: Hyperparams,
    pub feature_names: Vec<String>,
    pub preprocessor: FittedPreprocessor,
    /// Class labels in index order (classification only).
    pub classes: Option<Vec<String>>,
    pub model: FittedModel,
}

/// Target column as learner targets plus the rows that carry a target.
pub(crate) fn extract_targets(
    task: Task,
    data: &[DataColumn],
    target: &str,
) -> Result<(Targets, Vec<usize>), ModelError> {
    let col = data
        .iter()
        .find(|c| c.name == target)
        .ok_or_else(|| ModelError::Spec(format!("target column `{target}` not found")))?;
    let keep: Vec<usize> = (0..col.len()).filter(|&r| !col.is_missing(r)).collect();
    if keep.len() < 2 {
        return Err(ModelError::Training(format!(
            "target `{target}` has {} non-missing values; need at least 2",
            keep.len()
        )));
    }
    let targets = match (task, &col.data) {
        (Task::Regression, ColumnData::Numeric(v)) => {
            let y: Vec<f64> = keep.iter().map(|&r| v[r].unwrap_or(f64::NAN)).collect();
            if y.iter().any(|v| !v.is_finite()) {
                return Err(ModelError::Training(format!(
                    "target `{target}` has non-finite values"
                )));
            }
            Targets::Regression(y)
        }
        (Task::Regression, ColumnData::Categorical(_)) => {
            return Err(ModelError::Spec(format!(
                "regression target `{target}` must be numeric"
            )))
        }
        (Task::Classification, data) => {
            let text: Vec<String> = keep
                .iter()
                .map(|&r| match data {
                    ColumnData::Numeric(v) => format_real(v[r].unwrap_or(f64::NAN)),
                    ColumnData::Categorical(v) => v[r].clone().unwrap_or_default(),
                })
                .collect();
            let classes: Vec<String> = text
                .iter()
                .cloned()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            if classes.len() < 2 {
                return Err(ModelError::Training(format!(
                    "target `{target}` has a single class; need at least 2"
                )));
            }
            let labels = text
                .iter()
                .map(|t| classes.binary_search(t).expect("class present"))
                .collect();
            Targets::Classification { labels, classes }
        }
    };
    Ok((targets, keep))
}

/// Fits `hp` on already transformed rows.
pub(crate) fn fit_model(
    hp: &Hyperparams,
    x: &[Vec<f64>],
    targets: &Targets,
    seed: u64,
) -> Result<FittedModel, ModelError> {
    hp.check()?;
    let class_count = match targets {
        Targets::Regression(_) => None,
        Targets::Classification { classes, .. } => Some(classes.len()),
    };
    Ok(match hp {
        Hyperparams::LinearRidge { lambda } => match targets {
            Targets::Regression(y) => FittedModel::LinearRidge(RidgeModel::fit(x, y, *lambda)?),
            Targets::Classification { .. } => {
                return Err(ModelError::Spec("linear_ridge supports regression only".into()))
            }
        },
        Hyperparams::Knn { k } => FittedModel::Knn(KnnModel::fit(x, targets, *k)?),
        Hyperparams::CartTree { max_depth, min_leaf } => {
            let rows: Vec<usize> = (0..x.len()).collect();
            let params = TreeParams {
                max_depth: *max_depth,
                min_leaf: *min_leaf,
                max_features: None,
            };
            FittedModel::CartTree(TreeModel::fit(x, targets, &rows, params, &mut Stream::new(seed))?)
        }
        Hyperparams::RandomForest {
            n_trees,
            feature_fraction,
            bootstrap,
            max_depth,
            min_leaf,
        } => FittedModel::RandomForest(ForestModel::fit(
            x,
            targets,
            ForestParams {
                n_trees: *n_trees,
                feature_fraction: *feature_fraction,
                bootstrap: *bootstrap,
                max_depth: *max_depth,
                min_leaf: *min_leaf,
            },
            seed,
        )?),
        Hyperparams::Mlp {
            hidden,
            learning_rate,
            epochs,
            batch_size,
        } => {
            let y: Vec<f64> = match targets {
                Targets::Regression(y) => y.clone(),
                Targets::Classification { labels, .. } => labels.iter().map(|&l| l as f64).collect(),
            };
            let params = MlpParams {
                hidden: hidden.clone(),
                learning_rate: *learning_rate,
                epochs: *epochs,
                batch_size: *batch_size,
            };
            FittedModel::Mlp(MlpModel::fit(x, &y, class_count, &params, seed)?)
        }
    })
}

/// Trains the spec's single configuration; ranges are an error.
pub fn train(spec: &ModelSpec, data: &[DataColumn], seed: u64) -> Result<TrainedModel, ModelError> {
    spec.validate()?;
    let hp = spec.fixed_hyperparams()?;
    train_with(spec, &hp, data, seed)
}

/// Trains `hp` with the spec's task, target and preprocessing.
pub fn train_with(
    spec: &ModelSpec,
    hp: &Hyperparams,
    data: &[DataColumn],
    seed: u64,
) -> Result<TrainedModel, ModelError> {
    if hp.family() != spec.family {
        return Err(ModelError::Spec(
            "hyperparameters belong to a different family".into(),
        ));
    }
    let (targets, keep) = extract_targets(spec.task, data, &spec.target)?;
    let table: Vec<DataColumn> = data.iter().map(|c| c.select(&keep)).collect();
    spec.preprocess.validate(&table)?;
    let preprocessor = spec.preprocess.fit(&table)?;
    let x = preprocessor.apply(&table)?;
    let model = fit_model(hp, &x.rows, &targets, seed)?;
    Ok(TrainedModel {
        format_version: FORMAT_VERSION,
        family: spec.family,
        task: spec.task,
        target: spec.target.clone(),
        seed,
        hyperparams: hp.clone(),
        feature_names: x.feature_names,
        preprocessor,
        classes: match targets {
            Targets::Classification { classes, .. } => Some(classes),
            Targets::Regression(_) => None,
        },
        model,
    })
}

impl TrainedModel {
    /// Predictions for every row of `data`.
    pub fn predict(&self, data: &[DataColumn]) -> Result<Prediction, ModelError> {
        self.predict_with_unseen(data).map(|p| p.0)
    }

    /// Predictions plus the `(row, column)` pairs whose categorical level
    /// was not seen in training (encoded as all zeros).
    pub fn predict_with_unseen(
        &self,
        data: &[DataColumn],
    ) -> Result<(Prediction, Vec<(usize, String)>), ModelError> {
        let x = self.preprocessor.apply(data)?;
        let raw: Vec<f64> = x.rows.iter().map(|r| self.model.predict_row(r)).collect();
        let pred = match &self.classes {
            None => Prediction::Regression(raw),
            Some(c) => Prediction::Classification(raw.iter().map(|&i| c[i as usize].clone()).collect()),
        };
        Ok((pred, x.unseen))
    }

    pub fn to_json(&self) -> Result<String, ModelError> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<TrainedModel, ModelError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let found = value
            .get("format_version")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| ModelError::InvalidArgument("model file has no format_version".into()))?;
        if found != u64::from(FORMAT_VERSION) {
            return Err(ModelError::Version {
                found: u32::try_from(found).unwrap_or(u32::MAX),
                expected: FORMAT_VERSION,
            });
        }
        Ok(serde_json::from_value(value)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xor_table() -> Vec<DataColumn> {
        let mut s = Stream::new(4);
        let a: Vec<f64> = (0..200).map(|_| s.uniform()).collect();
        let b: Vec<f64> = (0..200).map(|_| s.uniform()).collect();
        let y: Vec<String> = a
            .iter()
            .zip(&b)
            .map(|(a, b)| if (*a > 0.5) != (*b > 0.5) { "one" } else { "zero" }.to_string())
            .collect();
        vec![
            DataColumn::numeric("a", a),
            DataColumn::numeric("b", b),
            DataColumn::categorical("y", y),
        ]
    }

    fn spec(family: &str, task: &str, target: &str, hp: &str) -> ModelSpec {
        ModelSpec::from_json(&format!(
            r#"{{"family": "{family}", "task": "{task}", "target": "{target}",
                "preprocess": {{"columns": [{{"column": "a"}}, {{"column": "b"}}]}},
                "hyperparameters": {hp}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn tree_learns_xor_and_round_trips() {
        let data = xor_table();
        let m = train(&spec("cart_tree", "classification", "y", "{}"), &data, 1).unwrap();
        let Prediction::Classification(p) = m.predict(&data).unwrap() else {
            panic!()
        };
        let truth = data[2].as_categorical().unwrap();
        let acc = p
            .iter()
            .zip(truth)
            .filter(|(p, t)| Some(*p) == t.as_ref())
            .count();
        assert!(acc >= 195, "accuracy {acc}/200");
        let back = TrainedModel::from_json(&m.to_json().unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.predict(&data).unwrap(), m.predict(&data).unwrap());
    }

    #[test]
    fn version_mismatch_is_rejected() {
        let data = xor_table();
        let m = train(&spec("knn", "classification", "y", "{}"), &data, 1).unwrap();
        let text = m
            .to_json()
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 99");
        assert!(matches!(
            TrainedModel::from_json(&text),
            Err(ModelError::Version {
                found: 99,
                expected: 1
            })
        ));
    }

    #[test]
    fn missing_targets_dropped_and_single_class_rejected() {
        let data = vec![
            DataColumn::numeric("a", [1.0, 2.0, 3.0, 4.0]),
            DataColumn::numeric("b", [0.0, 1.0, 0.0, 1.0]),
            DataColumn::numeric_opt("t", vec![Some(1.0), None, Some(3.0), Some(4.0)]),
        ];
        let m = train(
            &spec("linear_ridge", "regression", "t", r#"{"lambda": 0}"#),
            &data,
            0,
        )
        .unwrap();
        assert_eq!(m.predict(&data).unwrap().len(), 4);
        let one = vec![
            DataColumn::numeric("a", [1.0, 2.0]),
            DataColumn::numeric("b", [1.0, 2.0]),
            DataColumn::categorical("t", ["x", "x"]),
        ];
        assert!(matches!(
            train(&spec("knn", "classification", "t", "{}"), &one, 0),
            Err(ModelError::Training(_))
        ));
    }

    #[test]
    fn every_family_trains_with_defaults() {
        let mut s = Stream::new(8);
        let a: Vec<f64> = (0..60).map(|_| s.uniform()).collect();
        let b: Vec<f64> = (0..60).map(|_| s.uniform()).collect();
        let t: Vec<f64> = a.iter().zip(&b).map(|(a, b)| 2.0 * a - b).collect();
        let data = vec![
            DataColumn::numeric("a", a),
            DataColumn::numeric("b", b),
            DataColumn::numeric("t", t),
        ];
        for fam in ["linear_ridge", "knn", "cart_tree", "random_forest", "mlp"] {
            let m = train(&spec(fam, "regression", "t", "{}"), &data, 3).unwrap();
            assert_eq!(
                m,
                train(&spec(fam, "regression", "t", "{}"), &data, 3).unwrap(),
                "{fam}"
            );
            assert!(matches!(m.predict(&data).unwrap(), Prediction::Regression(v) if v.len() == 60));
        }
    }
}
