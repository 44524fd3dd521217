//! Model specifications and hyperparameters.
//!
//! A spec is a JSON document:
//!
//! ```json
//! {
//!   "family": "random_forest",
//!   "task": "regression",
//!   "target": "fuel_consumed",
//!   "preprocess": { "columns": [ { "column": "speed", "scaling": "zscore" } ] },
//!   "hyperparameters": {
//!     "n_trees": { "type": "int", "lo": 10, "hi": 60 },
//!     "feature_fraction": { "type": "float", "lo": 0.3, "hi": 1.0 },
//!     "max_depth": 8
//!   }
//! }
//! ```
//!
//! Each hyperparameter is a fixed JSON value or a range: `float` (uniform,
//! or log-uniform with `"log": true`), `int` (inclusive bounds) or `choice`.
//! Omitted hyperparameters take the family defaults listed on
//! [`Hyperparams::default_for`].

use super::preprocess::PreprocessorSpec;
use super::ModelError;
use crate::rng::Stream;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Regression,
    Classification,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelFamily {
    LinearRidge,
    Knn,
    CartTree,
    RandomForest,
    Mlp,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ParamRange {
    Float {
        lo: f64,
        hi: f64,
        #[serde(default)]
        log: bool,
    },
    Int {
        lo: i64,
        hi: i64,
    },
    Choice {
        values: Vec<Value>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamSpec {
    Range(ParamRange),
    Fixed(Value),
}

/// Concrete hyperparameters of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Hyperparams {
    LinearRidge {
        lambda: f64,
    },
    Knn {
        k: usize,
    },
    CartTree {
        max_depth: usize,
        min_leaf: usize,
    },
    RandomForest {
        n_trees: usize,
        feature_fraction: f64,
        bootstrap: bool,
        max_depth: usize,
        min_leaf: usize,
    },
    Mlp {
        hidden: Vec<usize>,
        learning_rate: f64,
        epochs: usize,
        batch_size: usize,
    },
}

impl Hyperparams {
    /// Family defaults: λ = 1; k = 5; depth 8, leaf 1; 50 bootstrapped
    /// trees with half the features; one hidden layer of 16, rate 0.01,
    /// 100 epochs, batches of 32.
    pub fn default_for(family: ModelFamily) -> Hyperparams {
        match family {
            ModelFamily::LinearRidge => Hyperparams::LinearRidge { lambda: 1.0 },
            ModelFamily::Knn => Hyperparams::Knn { k: 5 },
            ModelFamily::CartTree => Hyperparams::CartTree {
                max_depth: 8,
                min_leaf: 1,
            },
            ModelFamily::RandomForest => Hyperparams::RandomForest {
                n_trees: 50,
                feature_fraction: 0.5,
                bootstrap: true,
                max_depth: 8,
                min_leaf: 1,
            },
            ModelFamily::Mlp => Hyperparams::Mlp {
                hidden: vec![16],
                learning_rate: 0.01,
                epochs: 100,
                batch_size: 32,
            },
        }
    }

    pub fn family(&self) -> ModelFamily {
        match self {
            Hyperparams::LinearRidge { .. } => ModelFamily::LinearRidge,
            Hyperparams::Knn { .. } => ModelFamily::Knn,
            Hyperparams::CartTree { .. } => ModelFamily::CartTree,
            Hyperparams::RandomForest { .. } => ModelFamily::RandomForest,
            Hyperparams::Mlp { .. } => ModelFamily::Mlp,
        }
    }

    /// Value-level checks shared by validation and training.
    pub fn check(&self) -> Result<(), ModelError> {
        let bad = |m: String| Err(ModelError::Spec(m));
        match self {
            Hyperparams::LinearRidge { lambda } if !(*lambda >= 0.0 && lambda.is_finite()) => {
                bad(format!("lambda must be a finite value >= 0, got {lambda}"))
            }
            Hyperparams::Knn { k: 0 } => bad("k must be >= 1".into()),
            Hyperparams::CartTree { max_depth, min_leaf }
            | Hyperparams::RandomForest {
                max_depth, min_leaf, ..
            } if *max_depth == 0 || *min_leaf == 0 => bad("max_depth and min_leaf must be >= 1".into()),
            Hyperparams::RandomForest {
                n_trees,
                feature_fraction,
                ..
            } if *n_trees == 0 || !(*feature_fraction > 0.0 && *feature_fraction <= 1.0) => {
                bad("n_trees must be >= 1 and feature_fraction in (0, 1]".into())
            }
            Hyperparams::Mlp {
                hidden,
                learning_rate,
                batch_size,
                ..
            } if hidden.is_empty()
                || hidden.len() > 2
                || hidden.contains(&0)
                || !(*learning_rate > 0.0 && learning_rate.is_finite())
                || *batch_size == 0 =>
            {
                bad("mlp needs 1-2 hidden layers of width >= 1, learning_rate > 0, batch_size >= 1".into())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: ModelFamily,
    pub task: Task,
    pub target: String,
    pub preprocess: PreprocessorSpec,
    #[serde(default)]
    pub hyperparameters: BTreeMap<String, ParamSpec>,
}

impl ModelSpec {
    pub fn from_json(text: &str) -> Result<ModelSpec, ModelError> {
        let spec: ModelSpec = serde_json::from_str(text)
            .map_err(|e| ModelError::Spec(format!("cannot parse model spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    /// Builds hyperparameters from defaults plus `values`.
    fn build(&self, values: &BTreeMap<&str, Value>) -> Result<Hyperparams, ModelError> {
        let mut obj = serde_json::to_value(Hyperparams::default_for(self.family))?;
        let map = obj.as_object_mut().expect("hyperparams serialize to an object");
        for (k, v) in values {
            if *k == "family" || !map.contains_key(*k) {
                return Err(ModelError::Spec(format!(
                    "unknown hyperparameter `{k}` for this family"
                )));
            }
            map.insert(k.to_string(), v.clone());
        }
        let hp: Hyperparams = serde_json::from_value(obj)
            .map_err(|e| ModelError::Spec(format!("hyperparameter type mismatch: {e}")))?;
        hp.check()?;
        Ok(hp)
    }

    /// Checks ranges, types and task compatibility without training.
    pub fn validate(&self) -> Result<(), ModelError> {
        if self.family == ModelFamily::LinearRidge && self.task != Task::Regression {
            return Err(ModelError::Spec("linear_ridge supports regression only".into()));
        }
        if self.preprocess.columns.is_empty() {
            return Err(ModelError::Spec("no feature columns".into()));
        }
        if self.preprocess.columns.iter().any(|c| c.column == self.target) {
            return Err(ModelError::Spec(format!(
                "target `{}` is also listed as a feature",
                self.target
            )));
        }
        // Every extreme of every range must yield valid hyperparameters.
        let mut probes: Vec<BTreeMap<&str, Value>> = vec![BTreeMap::new(), BTreeMap::new()];
        for (name, p) in &self.hyperparameters {
            let (lo, hi): (Value, Value) = match p {
                ParamSpec::Fixed(v) => (v.clone(), v.clone()),
                ParamSpec::Range(ParamRange::Float { lo, hi, log }) => {
                    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || (*log && *lo <= 0.0) {
                        return Err(ModelError::Spec(format!(
                            "invalid float range for `{name}`: [{lo}, {hi}]{}",
                            if *log { " (log ranges need lo > 0)" } else { "" }
                        )));
                    }
                    (Value::from(*lo), Value::from(*hi))
                }
                ParamSpec::Range(ParamRange::Int { lo, hi }) => {
                    if lo > hi {
                        return Err(ModelError::Spec(format!(
                            "invalid int range for `{name}`: [{lo}, {hi}]"
                        )));
                    }
                    (Value::from(*lo), Value::from(*hi))
                }
                ParamSpec::Range(ParamRange::Choice { values }) => {
                    if values.is_empty() {
                        return Err(ModelError::Spec(format!("empty choice for `{name}`")));
                    }
                    for v in values {
                        self.build(&BTreeMap::from([(name.as_str(), v.clone())]))?;
                    }
                    (values[0].clone(), values[values.len() - 1].clone())
                }
            };
            probes[0].insert(name, lo);
            probes[1].insert(name, hi);
        }
        for p in &probes {
            self.build(p)?;
        }
        Ok(())
    }

    /// Draws one configuration.
    pub fn sample(&self, stream: &mut Stream) -> Result<Hyperparams, ModelError> {
        let mut values = BTreeMap::new();
        for (name, p) in &self.hyperparameters {
            let v = match p {
                ParamSpec::Fixed(v) => v.clone(),
                ParamSpec::Range(ParamRange::Float { lo, hi, log }) => Value::from(if *log {
                    stream.uniform_range(lo.ln(), hi.ln()).exp().clamp(*lo, *hi)
                } else {
                    stream.uniform_range(*lo, *hi)
                }),
                ParamSpec::Range(ParamRange::Int { lo, hi }) => {
                    let span = (hi - lo) as u64 + 1;
                    Value::from(lo + stream.below(span) as i64)
                }
                ParamSpec::Range(ParamRange::Choice { values }) => {
                    values[stream.below(values.len() as u64) as usize].clone()
                }
            };
            values.insert(name.as_str(), v);
        }
        self.build(&values)
    }

    /// The single configuration of a spec without ranges.
    pub fn fixed_hyperparams(&self) -> Result<Hyperparams, ModelError> {
        let mut values = BTreeMap::new();
        for (name, p) in &self.hyperparameters {
            match p {
                ParamSpec::Fixed(v) => {
                    values.insert(name.as_str(), v.clone());
                }
                ParamSpec::Range(ParamRange::Choice { values: c }) if c.len() == 1 => {
                    values.insert(name.as_str(), c[0].clone());
                }
                ParamSpec::Range(_) => {
                    return Err(ModelError::Spec(format!(
                        "hyperparameter `{name}` is a range; training needs fixed values"
                    )))
                }
            }
        }
        self.build(&values)
    }
}
