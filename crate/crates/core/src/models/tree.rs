//! CART decision trees.
//!
//! Greedy binary splits `x[f] <= threshold` minimise the summed squared
//! error (regression) or the size-weighted Gini impurity (classification).
//! Thresholds are midpoints between consecutive distinct values; both
//! children must hold at least `min_leaf` samples. An impure node is split
//! whenever any admissible split exists, even one that does not lower the
//! impurity — a zero-gain first split is what lets depth-2 trees solve XOR.
//! Growth stops at `max_depth`, at pure nodes, or when no admissible split
//! exists. Among equally good splits the first in (feature, threshold)
//! order wins.
//!
//! With `max_features < p`, each split examines a random feature subset
//! drawn from the supplied stream (used by random forests).

use super::{argmax, ModelError, Targets};
use crate::rng::Stream;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
    /// Features examined per split; `None` means all.
    pub max_features: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum Node {
    /// Mean target (regression) or class proportions (classification).
    Leaf { value: Vec<f64> },
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub nodes: Vec<Node>,
    pub n_classes: Option<usize>,
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    y: &'a [f64],
    n_classes: Option<usize>,
    params: TreeParams,
    p: usize,
    nodes: Vec<Node>,
}

impl TreeModel {
    /// Grows a tree on the (possibly repeated) training `rows`.
    pub fn fit(
        x: &[Vec<f64>],
        targets: &Targets,
        rows: &[usize],
        params: TreeParams,
        stream: &mut Stream,
    ) -> Result<TreeModel, ModelError> {
        if params.max_depth == 0 || params.min_leaf == 0 {
            return Err(ModelError::Spec("max_depth and min_leaf must be >= 1".into()));
        }
        if rows.is_empty() || x.is_empty() {
            return Err(ModelError::Training("tree needs training rows".into()));
        }
        let (y, n_classes): (Vec<f64>, Option<usize>) = match targets {
            Targets::Regression(v) => (v.clone(), None),
            Targets::Classification { labels, classes } => {
                (labels.iter().map(|&l| l as f64).collect(), Some(classes.len()))
            }
        };
        let mut b = Builder {
            x,
            y: &y,
            n_classes,
            params,
            p: x[0].len(),
            nodes: Vec::new(),
        };
        b.grow(rows.to_vec(), 0, stream);
        Ok(TreeModel {
            nodes: b.nodes,
            n_classes,
        })
    }

    fn leaf_value(&self, row: &[f64]) -> &[f64] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    }
                }
            }
        }
    }

    /// Value (regression) or class index (classification).
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let v = self.leaf_value(row);
        match self.n_classes {
            None => v[0],
            Some(_) => argmax(v) as f64,
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], at: usize) -> usize {
            match &nodes[at] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }
}

impl Builder<'_> {
    fn leaf(&self, rows: &[usize]) -> Vec<f64> {
        match self.n_classes {
            None => vec![rows.iter().map(|&r| self.y[r]).sum::<f64>() / rows.len() as f64],
            Some(c) => {
                let mut counts = vec![0.0; c];
                for &r in rows {
                    counts[self.y[r] as usize] += 1.0;
                }
                counts.iter().map(|v| v / rows.len() as f64).collect()
            }
        }
    }

    fn impure(&self, rows: &[usize]) -> bool {
        let first = self.y[rows[0]];
        rows.iter().any(|&r| self.y[r] != first)
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize, stream: &mut Stream) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            value: self.leaf(&rows),
        });
        if depth >= self.params.max_depth || rows.len() < 2 * self.params.min_leaf || !self.impure(&rows) {
            return id;
        }
        let Some((feature, threshold)) = self.best_split(&rows, stream) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| self.x[i][feature] <= threshold);
        let left = self.grow(l, depth + 1, stream);
        let right = self.grow(r, depth + 1, stream);
        self.nodes[id] = Node::Split {
            feature,
            threshold,
            left,
            right,
        };
        id
    }

    fn candidate_features(&self, stream: &mut Stream) -> Vec<usize> {
        match self.params.max_features {
            Some(m) if m < self.p => {
                let mut all: Vec<usize> = (0..self.p).collect();
                // Partial Fisher–Yates: first m slots become the sample.
                for i in 0..m.max(1) {
                    let j = i + stream.below((self.p - i) as u64) as usize;
                    all.swap(i, j);
                }
                let mut pick = all[..m.max(1)].to_vec();
                pick.sort_unstable();
                pick
            }
            _ => (0..self.p).collect(),
        }
    }

    fn best_split(&self, rows: &[usize], stream: &mut Stream) -> Option<(usize, f64)> {
        let n = rows.len();
        let min_leaf = self.params.min_leaf;
        let mut best: Option<(f64, usize, f64)> = None;
        for f in self.candidate_features(stream) {
            let mut order = rows.to_vec();
            order.sort_by(|&a, &b| self.x[a][f].total_cmp(&self.x[b][f]).then(a.cmp(&b)));
            let mut scan = Scan::new(self.n_classes, order.iter().map(|&r| self.y[r]));
            for i in 1..n {
                scan.shift(self.y[order[i - 1]]);
                if i < min_leaf || n - i < min_leaf {
                    continue;
                }
                let (a, b) = (self.x[order[i - 1]][f], self.x[order[i]][f]);
                if a == b {
                    continue;
                }
                let cost = scan.cost();
                if best.is_none_or(|(c, _, _)| cost < c) {
                    let mid = a + (b - a) / 2.0;
                    let threshold = if mid < b { mid } else { a };
                    best = Some((cost, f, threshold));
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }
}

/// Running left/right statistics while sweeping sorted samples.
enum Scan {
    Regression {
        n: f64,
        left: (f64, f64, f64),
        total: (f64, f64),
    },
    Classification {
        left: Vec<f64>,
        right: Vec<f64>,
        nl: f64,
        nr: f64,
    },
}

impl Scan {
    fn new(n_classes: Option<usize>, y: impl Iterator<Item = f64>) -> Scan {
        match n_classes {
            None => {
                let (mut n, mut s, mut s2) = (0.0, 0.0, 0.0);
                for v in y {
                    n += 1.0;
                    s += v;
                    s2 += v * v;
                }
                Scan::Regression {
                    n,
                    left: (0.0, 0.0, 0.0),
                    total: (s, s2),
                }
            }
            Some(c) => {
                let mut right = vec![0.0; c];
                let mut nr = 0.0;
                for v in y {
                    right[v as usize] += 1.0;
                    nr += 1.0;
                }
                Scan::Classification {
                    left: vec![0.0; c],
                    right,
                    nl: 0.0,
                    nr,
                }
            }
        }
    }

    fn shift(&mut self, v: f64) {
        match self {
            Scan::Regression { left, .. } => {
                left.0 += 1.0;
                left.1 += v;
                left.2 += v * v;
            }
            Scan::Classification { left, right, nl, nr } => {
                left[v as usize] += 1.0;
                right[v as usize] -= 1.0;
                *nl += 1.0;
                *nr -= 1.0;
            }
        }
    }

    fn cost(&self) -> f64 {
        match self {
            Scan::Regression { n, left, total } => {
                let (nl, sl, s2l) = *left;
                let nr = n - nl;
                let (sr, s2r) = (total.0 - sl, total.1 - s2l);
                (s2l - sl * sl / nl).max(0.0) + (s2r - sr * sr / nr).max(0.0)
            }
            Scan::Classification { left, right, nl, nr } => {
                let gini_n = |c: &[f64], n: f64| n - c.iter().map(|k| k * k).sum::<f64>() / n;
                gini_n(left, *nl) + gini_n(right, *nr)
            }
        }
    }
}
