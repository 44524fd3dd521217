//! SMOTE: synthetic minority oversampling.
//!
//! For `amount_pct = 100·m`, every minority point `x` (in row order)
//! produces `m` synthetic points `x + u·(x_nn − x)`, where `x_nn` is drawn
//! uniformly from the `k` nearest other minority points (Euclidean,
//! distance ties by row order) and `u ~ U[0, 1)`. When `k` is not smaller
//! than the minority count it is reduced to `count − 1` and the output says
//! so.

use super::{squared_distance, ModelError};
use crate::rng::Stream;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoteOutput {
    pub samples: Vec<Vec<f64>>,
    /// Input row of each sample's parent.
    pub parents: Vec<usize>,
    /// Input row of the neighbour each sample interpolates towards.
    pub neighbours: Vec<usize>,
    pub k_requested: usize,
    pub k_used: usize,
    pub k_reduced: bool,
}

pub fn smote(
    features: &[Vec<f64>],
    labels: &[String],
    minority: &str,
    k: usize,
    amount_pct: usize,
    seed: u64,
) -> Result<SmoteOutput, ModelError> {
    if features.len() != labels.len() {
        return Err(ModelError::InvalidArgument(format!(
            "{} feature rows but {} labels",
            features.len(),
            labels.len()
        )));
    }
    if amount_pct == 0 || !amount_pct.is_multiple_of(100) {
        return Err(ModelError::InvalidArgument(format!(
            "amount must be a positive multiple of 100, got {amount_pct}"
        )));
    }
    if k == 0 {
        return Err(ModelError::InvalidArgument("k must be >= 1".into()));
    }
    let rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == minority).collect();
    if rows.len() < 2 {
        return Err(ModelError::InvalidArgument(format!(
            "minority class `{minority}` has {} samples; SMOTE needs at least 2",
            rows.len()
        )));
    }
    let k_used = k.min(rows.len() - 1);
    let per_point = amount_pct / 100;
    let mut stream = Stream::new(seed);
    let mut out = SmoteOutput {
        samples: Vec::with_capacity(rows.len() * per_point),
        parents: Vec::new(),
        neighbours: Vec::new(),
        k_requested: k,
        k_used,
        k_reduced: k_used < k,
    };
    for &r in &rows {
        let mut d: Vec<(f64, usize)> = rows
            .iter()
            .filter(|&&o| o != r)
            .map(|&o| (squared_distance(&features[r], &features[o]), o))
            .collect();
        d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for _ in 0..per_point {
            let nn = d[stream.below(k_used as u64) as usize].1;
            let u = stream.uniform();
            let x = &features[r];
            let sample = x
                .iter()
                .zip(&features[nn])
                .map(|(a, b)| a + u * (b - a))
                .collect();
            out.samples.push(sample);
            out.parents.push(r);
            out.neighbours.push(nn);
        }
    }
    Ok(out)
}

/// The `k` nearest minority neighbours of `row` (used to audit outputs).
pub fn minority_neighbours(
    features: &[Vec<f64>],
    labels: &[String],
    minority: &str,
    row: usize,
    k: usize,
) -> Vec<usize> {
    let mut d: Vec<(f64, usize)> = (0..labels.len())
        .filter(|&o| o != row && labels[o] == minority)
        .map(|o| (squared_distance(&features[row], &features[o]), o))
        .collect();
    d.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    d.into_iter().take(k).map(|p| p.1).collect()
}

/// True when `p` lies on the segment `[a, b]` up to `tol`.
pub fn on_segment(p: &[f64], a: &[f64], b: &[f64], tol: f64) -> bool {
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let ap: Vec<f64> = a.iter().zip(p).map(|(x, y)| y - x).collect();
    let len2: f64 = ab.iter().map(|v| v * v).sum();
    if len2 == 0.0 {
        return squared_distance(p, a).sqrt() <= tol;
    }
    let t = ap.iter().zip(&ab).map(|(x, y)| x * y).sum::<f64>() / len2;
    if !(-tol..=1.0 + tol).contains(&t) {
        return false;
    }
    let proj: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + t * d).collect();
    squared_distance(p, &proj).sqrt() <= tol * (1.0 + len2.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(minority: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<String>) {
        let mut s = Stream::new(seed);
        let mut x = Vec::new();
        let mut y = Vec::new();
        for i in 0..(minority + 30) {
            x.push(vec![s.normal(), s.normal(), s.uniform()]);
            y.push(
                if i % 4 == 0 && y.iter().filter(|l: &&String| *l == "min").count() < minority {
                    "min".to_string()
                } else {
                    "maj".to_string()
                },
            );
        }
        (x, y)
    }

    #[test]
    fn count_and_segment_membership() {
        for seed in 0..20 {
            let (x, y) = data(10, seed);
            let out = smote(&x, &y, "min", 5, 200, seed).unwrap();
            assert_eq!(out.samples.len(), 20);
            for ((s, p), nb) in out.samples.iter().zip(&out.parents).zip(&out.neighbours) {
                assert!(minority_neighbours(&x, &y, "min", *p, 5).contains(nb));
                assert!(on_segment(s, &x[*p], &x[*nb], 1e-12));
            }
            assert_eq!(out, smote(&x, &y, "min", 5, 200, seed).unwrap());
        }
    }

    #[test]
    fn k_reduced_when_minority_small() {
        let (x, y) = data(3, 1);
        let out = smote(&x, &y, "min", 5, 100, 0).unwrap();
        assert_eq!(out.k_used, 2);
        assert!(out.k_reduced);
    }

    #[test]
    fn argument_errors() {
        let (x, y) = data(1, 1);
        assert!(smote(&x, &y, "min", 3, 100, 0).is_err());
        let (x, y) = data(5, 1);
        assert!(smote(&x, &y, "min", 3, 150, 0).is_err());
        assert!(smote(&x, &y, "min", 3, 0, 0).is_err());
    }
}
