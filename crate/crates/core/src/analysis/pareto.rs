//! Pareto fronts by fast non-dominated sorting.
//!
//! Objectives flagged [`Direction::Maximize`] are negated, after which a
//! point `p` dominates `q` when it is no worse in every objective and
//! strictly better in at least one. Exact duplicates never dominate each
//! other, so duplicates of a front point all stay on the front.

use super::{AnalysisError, SCHEMA_VERSION};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoResult {
    pub schema_version: u32,
    pub directions: Vec<Direction>,
    /// Row indices of the first (non-dominated) front, ascending.
    pub front: Vec<usize>,
    /// Front number of every point, 0 for the non-dominated set.
    pub ranks: Vec<usize>,
}

/// `true` when `p` dominates `q` (both already in minimization form).
pub fn dominates(p: &[f64], q: &[f64]) -> bool {
    let mut strictly = false;
    for (a, b) in p.iter().zip(q) {
        if a > b {
            return false;
        }
        if a < b {
            strictly = true;
        }
    }
    strictly
}

pub fn pareto_front(points: &[Vec<f64>], directions: &[Direction]) -> Result<ParetoResult, AnalysisError> {
    let m = directions.len();
    if points.is_empty() {
        return Err(AnalysisError::InvalidArgument("no points".into()));
    }
    if m < 2 {
        return Err(AnalysisError::InvalidArgument(
            "at least two objectives are required".into(),
        ));
    }
    let mut norm = Vec::with_capacity(points.len());
    for (i, p) in points.iter().enumerate() {
        if p.len() != m {
            return Err(AnalysisError::InvalidArgument(format!(
                "point {i} has {} objectives, expected {m}",
                p.len()
            )));
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(AnalysisError::InvalidArgument(format!(
                "point {i} has a non-finite value"
            )));
        }
        norm.push(
            p.iter()
                .zip(directions)
                .map(|(v, d)| match d {
                    Direction::Minimize => *v,
                    Direction::Maximize => -*v,
                })
                .collect::<Vec<f64>>(),
        );
    }
    let ranks = non_dominated_ranks(&norm);
    let front = (0..norm.len()).filter(|&i| ranks[i] == 0).collect();
    Ok(ParetoResult {
        schema_version: SCHEMA_VERSION,
        directions: directions.to_vec(),
        front,
        ranks,
    })
}

/// Front number of every point (minimization form).
pub fn non_dominated_ranks(points: &[Vec<f64>]) -> Vec<usize> {
    let n = points.len();
    let mut dominated_by_count = vec![0usize; n];
    let mut dominates_set: Vec<Vec<usize>> = vec![Vec::new(); n];
    for p in 0..n {
        for q in p + 1..n {
            if dominates(&points[p], &points[q]) {
                dominates_set[p].push(q);
                dominated_by_count[q] += 1;
            } else if dominates(&points[q], &points[p]) {
                dominates_set[q].push(p);
                dominated_by_count[p] += 1;
            }
        }
    }
    let mut ranks = vec![0usize; n];
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by_count[i] == 0).collect();
    let mut level = 0;
    while !current.is_empty() {
        let mut next = Vec::new();
        for &p in &current {
            ranks[p] = level;
            for &q in &dominates_set[p] {
                dominated_by_count[q] -= 1;
                if dominated_by_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        level += 1;
        current = next;
    }
    ranks
}
