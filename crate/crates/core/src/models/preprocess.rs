//! Column preprocessing: imputation, scaling and one-hot encoding.
//!
//! Statistics are learned by [`PreprocessorSpec::fit`] and reused verbatim
//! by [`FittedPreprocessor::apply`], so validation data never influences the
//! transform. Per column the order is: impute, then scale or encode.
//! Scaling statistics are computed on the observed (non-missing) fit
//! values. Min-max scaling of a constant column maps every value to 0.
//!
//! Every feature reaching a model must be numeric: categorical columns need
//! `onehot`. A level unseen at fit time encodes as an all-zero block and is
//! reported in [`Transformed::unseen`].

use super::ModelError;
use crate::analysis::descriptive::{mean, std_dev};
use crate::table::{format_real, ColumnData, DataColumn};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    #[default]
    None,
    Minmax,
    Zscore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    #[default]
    None,
    Onehot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Imputation {
    #[default]
    None,
    Mean,
    Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnDirective {
    pub column: String,
    #[serde(default)]
    pub scaling: Scaling,
    #[serde(default)]
    pub encoding: Encoding,
    #[serde(default)]
    pub imputation: Imputation,
}

impl ColumnDirective {
    pub fn new(column: impl Into<String>) -> Self {
        ColumnDirective {
            column: column.into(),
            scaling: Scaling::None,
            encoding: Encoding::None,
            imputation: Imputation::None,
        }
    }

    pub fn scaling(mut self, s: Scaling) -> Self {
        self.scaling = s;
        self
    }

    pub fn encoding(mut self, e: Encoding) -> Self {
        self.encoding = e;
        self
    }

    pub fn imputation(mut self, i: Imputation) -> Self {
        self.imputation = i;
        self
    }
}

/// Ordered feature directives; output columns follow this order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PreprocessorSpec {
    pub columns: Vec<ColumnDirective>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FittedColumn {
    Numeric {
        name: String,
        /// Output = (x − offset) / scale, or 0 when scale is 0.
        offset: f64,
        scale: f64,
        impute: Option<f64>,
    },
    Onehot {
        name: String,
        levels: Vec<String>,
        impute: Option<String>,
    },
}

impl FittedColumn {
    fn name(&self) -> &str {
        match self {
            FittedColumn::Numeric { name, .. } | FittedColumn::Onehot { name, .. } => name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedPreprocessor {
    pub columns: Vec<FittedColumn>,
}

/// Output of [`FittedPreprocessor::apply`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transformed {
    pub feature_names: Vec<String>,
    /// Row-major feature matrix.
    pub rows: Vec<Vec<f64>>,
    /// `(row, column)` pairs whose level was unseen at fit time.
    pub unseen: Vec<(usize, String)>,
}

fn find<'a>(table: &'a [DataColumn], name: &str) -> Result<&'a DataColumn, ModelError> {
    table
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| ModelError::Spec(format!("column `{name}` not found")))
}

fn mode_numeric(x: &[f64]) -> Option<f64> {
    let mut counts: BTreeMap<String, (usize, f64)> = BTreeMap::new();
    for v in x {
        counts.entry(format_real(*v)).or_insert((0, *v)).0 += 1;
    }
    best_count(counts.into_values())
}

fn mode_text(x: &[&str]) -> Option<String> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for v in x {
        *counts.entry(v).or_default() += 1;
    }
    best_count(counts.into_iter().map(|(v, c)| (c, v.to_string())))
}

/// Highest count; ties resolved by the first candidate in iteration order.
fn best_count<T>(items: impl Iterator<Item = (usize, T)>) -> Option<T> {
    let mut best: Option<(usize, T)> = None;
    for (c, v) in items {
        if best.as_ref().is_none_or(|(bc, _)| c > *bc) {
            best = Some((c, v));
        }
    }
    best.map(|b| b.1)
}

impl PreprocessorSpec {
    /// Checks directives against column kinds in `table`.
    pub fn validate(&self, table: &[DataColumn]) -> Result<(), ModelError> {
        if self.columns.is_empty() {
            return Err(ModelError::Spec("no feature columns".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for d in &self.columns {
            if !seen.insert(d.column.as_str()) {
                return Err(ModelError::Spec(format!("column `{}` listed twice", d.column)));
            }
            let col = find(table, &d.column)?;
            match &col.data {
                ColumnData::Numeric(_) => {
                    if d.encoding == Encoding::Onehot {
                        return Err(ModelError::Spec(format!(
                            "onehot encoding requires a categorical column; `{}` is numeric",
                            d.column
                        )));
                    }
                }
                ColumnData::Categorical(_) => {
                    if d.scaling != Scaling::None {
                        return Err(ModelError::Spec(format!(
                            "scaling requires a numeric column; `{}` is categorical",
                            d.column
                        )));
                    }
                    if d.imputation == Imputation::Mean {
                        return Err(ModelError::Spec(format!(
                            "mean imputation requires a numeric column; `{}` is categorical",
                            d.column
                        )));
                    }
                    if d.encoding != Encoding::Onehot {
                        return Err(ModelError::Spec(format!(
                            "categorical column `{}` must be onehot encoded",
                            d.column
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Learns per-column statistics from `table`.
    pub fn fit(&self, table: &[DataColumn]) -> Result<FittedPreprocessor, ModelError> {
        self.validate(table)?;
        let mut columns = Vec::with_capacity(self.columns.len());
        for d in &self.columns {
            let col = find(table, &d.column)?;
            let fitted = match &col.data {
                ColumnData::Numeric(v) => {
                    let x: Vec<f64> = v.iter().flatten().copied().collect();
                    if x.is_empty() {
                        return Err(ModelError::Training(format!(
                            "column `{}` has no observed values",
                            d.column
                        )));
                    }
                    let impute = match d.imputation {
                        Imputation::None => None,
                        Imputation::Mean => Some(mean(&x)),
                        Imputation::Mode => mode_numeric(&x),
                    };
                    let (offset, scale) = match d.scaling {
                        Scaling::None => (0.0, 1.0),
                        Scaling::Minmax => {
                            let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
                            let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                            (lo, hi - lo)
                        }
                        Scaling::Zscore => {
                            let sd = std_dev(&x);
                            if !(sd > 0.0) {
                                return Err(ModelError::Training(format!(
                                    "zscore scaling of column `{}` with zero standard deviation",
                                    d.column
                                )));
                            }
                            (mean(&x), sd)
                        }
                    };
                    FittedColumn::Numeric {
                        name: d.column.clone(),
                        offset,
                        scale,
                        impute,
                    }
                }
                ColumnData::Categorical(v) => {
                    let present: Vec<&str> = v.iter().flatten().map(String::as_str).collect();
                    let impute = match d.imputation {
                        Imputation::Mode => mode_text(&present),
                        _ => None,
                    };
                    FittedColumn::Onehot {
                        name: d.column.clone(),
                        levels: col.levels(),
                        impute,
                    }
                }
            };
            columns.push(fitted);
        }
        Ok(FittedPreprocessor { columns })
    }
}

impl FittedPreprocessor {
    pub fn feature_names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for c in &self.columns {
            match c {
                FittedColumn::Numeric { name, .. } => out.push(name.clone()),
                FittedColumn::Onehot { name, levels, .. } => {
                    out.extend(levels.iter().map(|l| format!("{name}={l}")))
                }
            }
        }
        out
    }

    pub fn width(&self) -> usize {
        self.columns
            .iter()
            .map(|c| match c {
                FittedColumn::Numeric { .. } => 1,
                FittedColumn::Onehot { levels, .. } => levels.len(),
            })
            .sum()
    }

    /// Transforms `table` with the fitted statistics.
    pub fn apply(&self, table: &[DataColumn]) -> Result<Transformed, ModelError> {
        let cols: Vec<&DataColumn> = self
            .columns
            .iter()
            .map(|c| find(table, c.name()))
            .collect::<Result<_, _>>()?;
        let n = cols.first().map_or(0, |c| c.len());
        if let Some(c) = cols.iter().find(|c| c.len() != n) {
            return Err(ModelError::InvalidArgument(format!(
                "column `{}` has {} rows, expected {n}",
                c.name,
                c.len()
            )));
        }
        let mut rows = vec![Vec::with_capacity(self.width()); n];
        let mut unseen = Vec::new();
        for (fc, col) in self.columns.iter().zip(&cols) {
            match (fc, &col.data) {
                (
                    FittedColumn::Numeric {
                        name,
                        offset,
                        scale,
                        impute,
                    },
                    ColumnData::Numeric(v),
                ) => {
                    for (r, cell) in v.iter().enumerate() {
                        let x = cell.or(*impute).ok_or_else(|| {
                            ModelError::InvalidArgument(format!(
                                "missing value in column `{name}` row {r} and no imputation"
                            ))
                        })?;
                        let y = if *scale == 0.0 { 0.0 } else { (x - offset) / scale };
                        rows[r].push(y);
                    }
                }
                (FittedColumn::Onehot { name, levels, impute }, ColumnData::Categorical(v)) => {
                    for (r, cell) in v.iter().enumerate() {
                        let level = cell.as_ref().or(impute.as_ref()).ok_or_else(|| {
                            ModelError::InvalidArgument(format!(
                                "missing value in column `{name}` row {r} and no imputation"
                            ))
                        })?;
                        let hit = levels.iter().position(|l| l == level);
                        if hit.is_none() {
                            unseen.push((r, name.clone()));
                        }
                        rows[r].extend((0..levels.len()).map(|i| if Some(i) == hit { 1.0 } else { 0.0 }));
                    }
                }
                _ => {
                    return Err(ModelError::Spec(format!(
                        "column `{}` changed kind since fitting",
                        col.name
                    )))
                }
            }
        }
        Ok(Transformed {
            feature_names: self.feature_names(),
            rows,
            unseen,
        })
    }
}

/// Fits on `fit_table` and transforms `apply_table`.
pub fn preprocess(
    spec: &PreprocessorSpec,
    fit_table: &[DataColumn],
    apply_table: &[DataColumn],
) -> Result<(FittedPreprocessor, Transformed), ModelError> {
    let fitted = spec.fit(fit_table)?;
    let out = fitted.apply(apply_table)?;
    Ok((fitted, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(d: ColumnDirective) -> PreprocessorSpec {
        PreprocessorSpec { columns: vec![d] }
    }

    #[test]
    fn minmax() {
        let t = [DataColumn::numeric("x", [0.0, 5.0, 10.0])];
        let (_, out) = preprocess(&spec(ColumnDirective::new("x").scaling(Scaling::Minmax)), &t, &t).unwrap();
        assert_eq!(out.rows, vec![vec![0.0], vec![0.5], vec![1.0]]);
    }

    #[test]
    fn zscore_on_fit_data_and_zero_sd_error() {
        let t = [DataColumn::numeric("x", [1.0, 2.0, 3.0, 4.0])];
        let (_, out) = preprocess(&spec(ColumnDirective::new("x").scaling(Scaling::Zscore)), &t, &t).unwrap();
        let z: Vec<f64> = out.rows.iter().map(|r| r[0]).collect();
        assert!(mean(&z).abs() < 1e-15);
        assert!((std_dev(&z) - 1.0).abs() < 1e-15);
        let flat = [DataColumn::numeric("x", [2.0; 4])];
        let e = spec(ColumnDirective::new("x").scaling(Scaling::Zscore))
            .fit(&flat)
            .unwrap_err();
        assert!(e.to_string().contains("`x`"));
    }

    #[test]
    fn onehot_and_unseen() {
        let fit = [DataColumn::categorical("c", ["A", "B", "C"])];
        let apply = [DataColumn::categorical("c", ["B", "D"])];
        let (_, out) = preprocess(
            &spec(ColumnDirective::new("c").encoding(Encoding::Onehot)),
            &fit,
            &apply,
        )
        .unwrap();
        assert_eq!(out.rows[0], vec![0.0, 1.0, 0.0]);
        assert_eq!(out.rows[1], vec![0.0, 0.0, 0.0]);
        assert_eq!(out.unseen, vec![(1, "c".to_string())]);
        assert_eq!(out.feature_names, vec!["c=A", "c=B", "c=C"]);
    }

    #[test]
    fn mean_and_mode_imputation() {
        let t = [DataColumn::numeric_opt("x", vec![Some(1.0), None, Some(3.0)])];
        let (_, out) = preprocess(
            &spec(ColumnDirective::new("x").imputation(Imputation::Mean)),
            &t,
            &t,
        )
        .unwrap();
        assert_eq!(out.rows, vec![vec![1.0], vec![2.0], vec![3.0]]);
        let c = [DataColumn::categorical_opt(
            "c",
            vec![Some("b".into()), Some("a".into()), None, Some("b".into())],
        )];
        let d = ColumnDirective::new("c")
            .encoding(Encoding::Onehot)
            .imputation(Imputation::Mode);
        let (_, out) = preprocess(&spec(d), &c, &c).unwrap();
        assert_eq!(out.rows[2], vec![0.0, 1.0]);
    }

    #[test]
    fn kind_mismatches_are_spec_errors() {
        let n = [DataColumn::numeric("x", [1.0, 2.0])];
        let e = spec(ColumnDirective::new("x").encoding(Encoding::Onehot))
            .fit(&n)
            .unwrap_err();
        assert!(matches!(e, ModelError::Spec(_)));
        let c = [DataColumn::categorical("c", ["a", "b"])];
        assert!(matches!(
            spec(ColumnDirective::new("c").scaling(Scaling::Minmax)).fit(&c),
            Err(ModelError::Spec(_))
        ));
        assert!(matches!(
            spec(ColumnDirective::new("c")).fit(&c),
            Err(ModelError::Spec(_))
        ));
        assert!(matches!(
            spec(ColumnDirective::new("zz")).fit(&c),
            Err(ModelError::Spec(_))
        ));
    }

    #[test]
    fn missing_without_imputation_fails() {
        let t = [DataColumn::numeric_opt("x", vec![Some(1.0), None])];
        assert!(preprocess(&spec(ColumnDirective::new("x")), &t, &t).is_err());
    }

    #[test]
    fn no_leakage_from_apply_data() {
        let fit = [DataColumn::numeric("x", [0.0, 10.0])];
        let d = spec(ColumnDirective::new("x").scaling(Scaling::Minmax));
        let f = d.fit(&fit).unwrap();
        let before = f.apply(&fit).unwrap();
        let _ = f.apply(&[DataColumn::numeric("x", [1000.0, -5.0])]).unwrap();
        assert_eq!(f.apply(&fit).unwrap(), before);
        let wide = f.apply(&[DataColumn::numeric("x", [20.0])]).unwrap();
        assert_eq!(wide.rows[0][0], 2.0);
    }
}
