//! Random forests: bagged CART trees with per-split feature subsampling.
//!
//! Tree `t` draws its bootstrap sample and feature subsets from
//! `Stream::new(seed).substream(t)`, so trees are independent of build
//! order and can be grown in parallel. Predictions average the trees
//! (regression) or take a majority vote with ties to the lowest class.
//! One tree, no bootstrap and `feature_fraction = 1` reproduces a plain
//! CART tree exactly.

use super::tree::{TreeModel, TreeParams};
use super::{argmax, ModelError, Targets};
use crate::rng::Stream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub feature_fraction: f64,
    pub bootstrap: bool,
    pub max_depth: usize,
    pub min_leaf: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeModel>,
    pub n_classes: Option<usize>,
}

impl ForestModel {
    pub fn fit(
        x: &[Vec<f64>],
        targets: &Targets,
        params: ForestParams,
        seed: u64,
    ) -> Result<ForestModel, ModelError> {
        if params.n_trees == 0 {
            return Err(ModelError::Spec("n_trees must be >= 1".into()));
        }
        if !(params.feature_fraction > 0.0 && params.feature_fraction <= 1.0) {
            return Err(ModelError::Spec(format!(
                "feature_fraction must be in (0, 1], got {}",
                params.feature_fraction
            )));
        }
        if x.is_empty() {
            return Err(ModelError::Training("forest needs training rows".into()));
        }
        let n = x.len();
        let p = x[0].len();
        let m = ((params.feature_fraction * p as f64).round() as usize).clamp(1, p.max(1));
        let tree_params = TreeParams {
            max_depth: params.max_depth,
            min_leaf: params.min_leaf,
            max_features: (m < p).then_some(m),
        };
        let root = Stream::new(seed);
        let trees = (0..params.n_trees)
            .into_par_iter()
            .map(|t| {
                let mut s = root.substream(t as u64);
                let rows: Vec<usize> = if params.bootstrap {
                    (0..n).map(|_| s.below(n as u64) as usize).collect()
                } else {
                    (0..n).collect()
                };
                TreeModel::fit(x, targets, &rows, tree_params, &mut s)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let n_classes = match targets {
            Targets::Regression(_) => None,
            Targets::Classification { classes, .. } => Some(classes.len()),
        };
        Ok(ForestModel { trees, n_classes })
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        match self.n_classes {
            None => self.trees.iter().map(|t| t.predict_row(row)).sum::<f64>() / self.trees.len() as f64,
            Some(c) => {
                let mut votes = vec![0.0; c];
                for t in &self.trees {
                    votes[t.predict_row(row) as usize] += 1.0;
                }
                argmax(&votes) as f64
            }
        }
    }
}
