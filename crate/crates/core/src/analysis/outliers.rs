//! Outlier detection by z-score or interquartile-range fences.
//!
//! Both methods report a `[lower, upper]` interval and flag exactly the
//! values with `x < lower || x > upper`:
//!
//! * z-score(k): `mean ± k·sd` (sd with n − 1 denominator);
//! * IQR(k): `[Q1 − k·IQR, Q3 + k·IQR]` with type-7 quantiles.
//!
//! A zero scale (sd or IQR) flags nothing and sets `degenerate`.

use super::descriptive::{mean, quantile_sorted, sorted, std_dev};
use super::{AnalysisError, SCHEMA_VERSION};
use crate::table::DataColumn;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum OutlierMethod {
    Zscore { k: f64 },
    Iqr { k: f64 },
}

impl OutlierMethod {
    pub const ZSCORE_DEFAULT: OutlierMethod = OutlierMethod::Zscore { k: 3.0 };
    pub const IQR_DEFAULT: OutlierMethod = OutlierMethod::Iqr { k: 1.5 };
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    /// Mean (z-score) or Q1 (IQR).
    pub center_lo: f64,
    /// Mean (z-score) or Q3 (IQR).
    pub center_hi: f64,
    /// Standard deviation (z-score) or IQR.
    pub scale: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    pub schema_version: u32,
    pub column: String,
    pub method: OutlierMethod,
    pub thresholds: Thresholds,
    /// Row positions within the column (missing cells are never flagged).
    pub flagged: Vec<usize>,
    pub degenerate: bool,
    pub note: Option<String>,
}

pub fn detect_outliers(sample: &DataColumn, method: OutlierMethod) -> Result<OutlierReport, AnalysisError> {
    let cells = sample.as_numeric()?;
    let present: Vec<f64> = cells.iter().flatten().copied().collect();
    if present.len() < 4 {
        return Err(AnalysisError::InvalidArgument(format!(
            "outlier detection needs at least 4 values, got {}",
            present.len()
        )));
    }
    let k = match method {
        OutlierMethod::Zscore { k } | OutlierMethod::Iqr { k } => k,
    };
    if !(k > 0.0 && k.is_finite()) {
        return Err(AnalysisError::InvalidArgument(format!(
            "k must be positive, got {k}"
        )));
    }
    let thresholds = compute_thresholds(&present, method);
    let degenerate = !(thresholds.scale > 0.0);
    let flagged = if degenerate {
        Vec::new()
    } else {
        cells
            .iter()
            .enumerate()
            .filter_map(|(i, v)| {
                let x = (*v)?;
                (x < thresholds.lower || x > thresholds.upper).then_some(i)
            })
            .collect()
    };
    Ok(OutlierReport {
        schema_version: SCHEMA_VERSION,
        column: sample.name.clone(),
        method,
        thresholds,
        flagged,
        degenerate,
        note: degenerate.then(|| "degenerate scale: no values flagged".to_string()),
    })
}

/// Fences for `values` (no missing cells).
pub fn compute_thresholds(values: &[f64], method: OutlierMethod) -> Thresholds {
    match method {
        OutlierMethod::Zscore { k } => {
            let m = mean(values);
            let sd = std_dev(values);
            Thresholds {
                center_lo: m,
                center_hi: m,
                scale: sd,
                lower: m - k * sd,
                upper: m + k * sd,
            }
        }
        OutlierMethod::Iqr { k } => {
            let s = sorted(values);
            let q1 = quantile_sorted(&s, 0.25);
            let q3 = quantile_sorted(&s, 0.75);
            let iqr = q3 - q1;
            Thresholds {
                center_lo: q1,
                center_hi: q3,
                scale: iqr,
                lower: q1 - k * iqr,
                upper: q3 + k * iqr,
            }
        }
    }
}

/// Number of values outside the IQR(1.5) fences; 0 for a degenerate IQR
/// or fewer than 4 values.
pub fn iqr_outlier_count(values: &[f64]) -> usize {
    if values.len() < 4 {
        return 0;
    }
    let t = compute_thresholds(values, OutlierMethod::IQR_DEFAULT);
    if !(t.scale > 0.0) {
        return 0;
    }
    values.iter().filter(|&&x| x < t.lower || x > t.upper).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{rngs::StdRng, SeedableRng};
    use rand_distr::{Distribution, StandardNormal};

    #[test]
    fn iqr_fences_example() {
        let r = detect_outliers(
            &DataColumn::numeric("x", [1.0, 2.0, 3.0, 4.0, 100.0]),
            OutlierMethod::IQR_DEFAULT,
        )
        .unwrap();
        assert_eq!(r.thresholds.center_lo, 2.0);
        assert_eq!(r.thresholds.center_hi, 4.0);
        assert_eq!((r.thresholds.lower, r.thresholds.upper), (-1.0, 7.0));
        assert_eq!(r.flagged, vec![4]);
    }

    #[test]
    fn zscore_finds_injected_point() {
        let mut rng = StdRng::seed_from_u64(99);
        let mut x: Vec<f64> = (0..100).map(|_| StandardNormal.sample(&mut rng)).collect();
        x.push(10.0); // ten standard deviations out
        let r = detect_outliers(&DataColumn::numeric("x", x), OutlierMethod::ZSCORE_DEFAULT).unwrap();
        assert_eq!(r.flagged, vec![100]);
    }

    #[test]
    fn constant_data_is_degenerate() {
        for m in [OutlierMethod::ZSCORE_DEFAULT, OutlierMethod::IQR_DEFAULT] {
            let r = detect_outliers(&DataColumn::numeric("x", [2.0; 8]), m).unwrap();
            assert!(r.flagged.is_empty());
            assert!(r.degenerate);
            assert!(r.note.is_some());
        }
    }

    #[test]
    fn missing_cells_keep_positions() {
        let col = DataColumn::numeric_opt(
            "x",
            vec![Some(1.0), None, Some(2.0), Some(3.0), Some(4.0), Some(100.0)],
        );
        let r = detect_outliers(&col, OutlierMethod::IQR_DEFAULT).unwrap();
        assert_eq!(r.flagged, vec![5]);
    }

    #[test]
    fn too_small_rejected() {
        assert!(detect_outliers(
            &DataColumn::numeric("x", [1.0, 2.0, 3.0]),
            OutlierMethod::IQR_DEFAULT
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn thresholds_reproduce_flags(
            x in prop::collection::vec(-50.0f64..50.0, 4..80),
            k in 0.5f64..4.0,
            iqr in any::<bool>(),
        ) {
            let method = if iqr { OutlierMethod::Iqr { k } } else { OutlierMethod::Zscore { k } };
            let r = detect_outliers(&DataColumn::numeric("x", x.clone()), method).unwrap();
            let expect: Vec<usize> = if r.degenerate {
                Vec::new()
            } else {
                (0..x.len()).filter(|&i| x[i] < r.thresholds.lower || x[i] > r.thresholds.upper).collect()
            };
            prop_assert_eq!(&r.flagged, &expect);
            let boxplot = detect_outliers(&DataColumn::numeric("x", x.clone()), OutlierMethod::IQR_DEFAULT).unwrap();
            prop_assert_eq!(boxplot.flagged.len(), iqr_outlier_count(&x));
        }
    }
}
