//! k-nearest-neighbour prediction with Euclidean distance.
//!
//! Neighbours are ordered by (distance, training row), so equal distances
//! resolve to the earlier row. Classification takes the majority class;
//! a tied vote goes to the tied class whose member is nearest.

use super::{squared_distance, ModelError, Targets};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub x: Vec<Vec<f64>>,
    /// Regression targets, or class indices stored as reals.
    pub y: Vec<f64>,
    pub n_classes: Option<usize>,
}

impl KnnModel {
    pub fn fit(x: &[Vec<f64>], y: &Targets, k: usize) -> Result<KnnModel, ModelError> {
        if k == 0 {
            return Err(ModelError::Spec("knn needs k >= 1".into()));
        }
        if x.is_empty() {
            return Err(ModelError::Training("knn needs training rows".into()));
        }
        let (y, n_classes) = match y {
            Targets::Regression(v) => (v.clone(), None),
            Targets::Classification { labels, classes } => {
                (labels.iter().map(|&l| l as f64).collect(), Some(classes.len()))
            }
        };
        Ok(KnnModel {
            k: k.min(x.len()),
            x: x.to_vec(),
            y,
            n_classes,
        })
    }

    fn neighbours(&self, row: &[f64]) -> Vec<usize> {
        let mut d: Vec<(f64, usize)> = self
            .x
            .iter()
            .enumerate()
            .map(|(i, t)| (squared_distance(t, row), i))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        d.into_iter().take(self.k).map(|p| p.1).collect()
    }

    /// Prediction for one row: a value (regression) or class index.
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let nn = self.neighbours(row);
        match self.n_classes {
            None => nn.iter().map(|&i| self.y[i]).sum::<f64>() / nn.len() as f64,
            Some(c) => {
                let mut votes = vec![0usize; c];
                for &i in &nn {
                    votes[self.y[i] as usize] += 1;
                }
                let top = *votes.iter().max().unwrap_or(&0);
                // Nearest neighbour belonging to a top-voted class.
                nn.iter()
                    .map(|&i| self.y[i] as usize)
                    .find(|&cls| votes[cls] == top)
                    .unwrap_or(0) as f64
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_nn_has_zero_training_error() {
        let x: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64).sin(), (i as f64 * 0.7).cos()])
            .collect();
        let y: Vec<f64> = (0..30).map(|i| (i * i) as f64).collect();
        let m = KnnModel::fit(&x, &Targets::Regression(y.clone()), 1).unwrap();
        for (r, t) in x.iter().zip(&y) {
            assert_eq!(m.predict_row(r), *t);
        }
    }

    #[test]
    fn majority_vote_with_nearest_tie_break() {
        let x = vec![vec![0.0], vec![1.0], vec![2.0], vec![10.0]];
        let t = Targets::Classification {
            labels: vec![1, 0, 1, 0],
            classes: vec!["a".into(), "b".into()],
        };
        let m = KnnModel::fit(&x, &t, 3).unwrap();
        assert_eq!(m.predict_row(&[0.9]), 1.0);
        let m2 = KnnModel::fit(&x, &t, 2).unwrap();
        // Neighbours of 0.9 are rows 1 (class 0) and 0 (class 1): nearest wins.
        assert_eq!(m2.predict_row(&[0.9]), 0.0);
    }
}
