//! Exploratory summaries: five-number summaries with histograms for numeric
//! columns, class balance for categorical columns, and association
//! matrices (Pearson, Spearman, Cramér's V).
//!
//! Histograms use the Freedman–Diaconis width `2·IQR·n^(−1/3)`; the bin
//! count is `ceil(range / width)`, at least 1 (zero IQR or zero range) and
//! at most [`MAX_BINS`]. Bins are half-open except the last, which is
//! closed. Correlations use pairwise-complete rows; undefined coefficients
//! (a constant column, fewer than two rows) are reported as 0, and every
//! diagonal entry is 1.

use super::descriptive::{mean, pearson, quantile_sorted, sorted, spearman, std_dev};
use super::outliers::iqr_outlier_count;
use super::{AnalysisError, SCHEMA_VERSION};
use crate::table::{ColumnData, DataColumn};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const MAX_BINS: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericSummary {
    pub name: String,
    pub count: usize,
    pub missing: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub min: Option<f64>,
    pub q1: Option<f64>,
    pub median: Option<f64>,
    pub q3: Option<f64>,
    pub max: Option<f64>,
    pub iqr_outliers: usize,
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoricalSummary {
    pub name: String,
    pub count: usize,
    pub missing: usize,
    pub frequencies: BTreeMap<String, usize>,
    pub proportions: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    pub columns: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdaReport {
    pub schema_version: u32,
    pub rows: usize,
    pub numeric: Vec<NumericSummary>,
    pub categorical: Vec<CategoricalSummary>,
    pub pearson: Matrix,
    pub spearman: Matrix,
    pub cramers_v: Matrix,
}

pub fn eda_summary(table: &[DataColumn]) -> Result<EdaReport, AnalysisError> {
    if table.is_empty() {
        return Err(AnalysisError::InvalidArgument("table has no columns".into()));
    }
    let rows = table[0].len();
    if let Some(c) = table.iter().find(|c| c.len() != rows) {
        return Err(AnalysisError::InvalidArgument(format!(
            "column `{}` has {} rows, expected {rows}",
            c.name,
            c.len()
        )));
    }
    let mut numeric = Vec::new();
    let mut categorical = Vec::new();
    let mut num_cols: Vec<(&str, &[Option<f64>])> = Vec::new();
    let mut cat_cols: Vec<(&str, &[Option<String>])> = Vec::new();
    for col in table {
        match &col.data {
            ColumnData::Numeric(v) => {
                numeric.push(summarize_numeric(&col.name, v));
                num_cols.push((&col.name, v));
            }
            ColumnData::Categorical(v) => {
                categorical.push(summarize_categorical(&col.name, v));
                cat_cols.push((&col.name, v));
            }
        }
    }
    let pearson_m = matrix(&num_cols, |a, b| pairwise(a, b, pearson));
    let spearman_m = matrix(&num_cols, |a, b| pairwise(a, b, spearman));
    let cramer_m = matrix(&cat_cols, cramers_v);
    Ok(EdaReport {
        schema_version: SCHEMA_VERSION,
        rows,
        numeric,
        categorical,
        pearson: Matrix {
            columns: names(&num_cols),
            values: pearson_m,
        },
        spearman: Matrix {
            columns: names(&num_cols),
            values: spearman_m,
        },
        cramers_v: Matrix {
            columns: names(&cat_cols),
            values: cramer_m,
        },
    })
}

fn names<T>(cols: &[(&str, T)]) -> Vec<String> {
    cols.iter().map(|(n, _)| n.to_string()).collect()
}

fn matrix<T>(cols: &[(&str, &[T])], f: impl Fn(&[T], &[T]) -> f64) -> Vec<Vec<f64>> {
    let k = cols.len();
    let mut m = vec![vec![0.0; k]; k];
    for i in 0..k {
        m[i][i] = 1.0;
        for j in i + 1..k {
            let v = f(cols[i].1, cols[j].1);
            m[i][j] = v;
            m[j][i] = v;
        }
    }
    m
}

fn pairwise(a: &[Option<f64>], b: &[Option<f64>], f: fn(&[f64], &[f64]) -> Option<f64>) -> f64 {
    let (x, y): (Vec<f64>, Vec<f64>) = a.iter().zip(b).filter_map(|(a, b)| Some(((*a)?, (*b)?))).unzip();
    f(&x, &y).map_or(0.0, |r| r.clamp(-1.0, 1.0))
}

/// Cramér's V of two categorical columns over pairwise-complete rows.
pub fn cramers_v(a: &[Option<String>], b: &[Option<String>]) -> f64 {
    let mut table: BTreeMap<(&str, &str), f64> = BTreeMap::new();
    let mut rows: BTreeMap<&str, f64> = BTreeMap::new();
    let mut cols: BTreeMap<&str, f64> = BTreeMap::new();
    let mut n = 0.0;
    for (x, y) in a.iter().zip(b) {
        if let (Some(x), Some(y)) = (x, y) {
            *table.entry((x, y)).or_default() += 1.0;
            *rows.entry(x).or_default() += 1.0;
            *cols.entry(y).or_default() += 1.0;
            n += 1.0;
        }
    }
    let r = rows.len().min(cols.len());
    if r < 2 {
        return 0.0;
    }
    let mut chi2 = 0.0;
    for (x, rx) in &rows {
        for (y, cy) in &cols {
            let expected = rx * cy / n;
            let observed = table.get(&(*x, *y)).copied().unwrap_or(0.0);
            chi2 += (observed - expected).powi(2) / expected;
        }
    }
    (chi2 / (n * (r - 1) as f64)).sqrt().clamp(0.0, 1.0)
}

fn summarize_numeric(name: &str, v: &[Option<f64>]) -> NumericSummary {
    let x: Vec<f64> = v.iter().flatten().copied().collect();
    let missing = v.len() - x.len();
    if x.is_empty() {
        return NumericSummary {
            name: name.into(),
            count: 0,
            missing,
            mean: None,
            sd: None,
            min: None,
            q1: None,
            median: None,
            q3: None,
            max: None,
            iqr_outliers: 0,
            histogram: Histogram {
                edges: Vec::new(),
                counts: Vec::new(),
            },
        };
    }
    let s = sorted(&x);
    NumericSummary {
        name: name.into(),
        count: x.len(),
        missing,
        mean: Some(mean(&x)),
        sd: (x.len() > 1).then(|| std_dev(&x)),
        min: Some(s[0]),
        q1: Some(quantile_sorted(&s, 0.25)),
        median: Some(quantile_sorted(&s, 0.5)),
        q3: Some(quantile_sorted(&s, 0.75)),
        max: Some(s[s.len() - 1]),
        iqr_outliers: iqr_outlier_count(&x),
        histogram: histogram(&s),
    }
}

/// Freedman–Diaconis histogram of sorted, non-empty data.
pub fn histogram(s: &[f64]) -> Histogram {
    let n = s.len();
    let (lo, hi) = (s[0], s[n - 1]);
    let range = hi - lo;
    let iqr = quantile_sorted(s, 0.75) - quantile_sorted(s, 0.25);
    let bins = if range > 0.0 && iqr > 0.0 {
        let width = 2.0 * iqr / (n as f64).cbrt();
        ((range / width).ceil() as usize).clamp(1, MAX_BINS)
    } else {
        1
    };
    let (lo, hi) = if range > 0.0 {
        (lo, hi)
    } else {
        (lo - 0.5, hi + 0.5)
    };
    let step = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|i| if i == bins { hi } else { lo + step * i as f64 })
        .collect();
    let mut counts = vec![0usize; bins];
    for &x in s {
        let mut b = (((x - lo) / step).floor() as usize).min(bins - 1);
        // Guard against rounding at interior edges.
        while b > 0 && x < edges[b] {
            b -= 1;
        }
        while b + 1 < bins && x >= edges[b + 1] {
            b += 1;
        }
        counts[b] += 1;
    }
    Histogram { edges, counts }
}

fn summarize_categorical(name: &str, v: &[Option<String>]) -> CategoricalSummary {
    let mut frequencies: BTreeMap<String, usize> = BTreeMap::new();
    for s in v.iter().flatten() {
        *frequencies.entry(s.clone()).or_default() += 1;
    }
    let count: usize = frequencies.values().sum();
    let proportions = frequencies
        .iter()
        .map(|(k, c)| (k.clone(), *c as f64 / count as f64))
        .collect();
    CategoricalSummary {
        name: name.into(),
        count,
        missing: v.len() - count,
        frequencies,
        proportions,
    }
}
