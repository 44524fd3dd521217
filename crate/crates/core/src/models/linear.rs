//! Ridge regression with an unpenalized intercept.
//!
//! Solves `(XᵀX + λ·D) w = Xᵀy` for `w = (coefficients, intercept)`, where
//! `X` carries a trailing column of ones and `D` is the identity with a zero
//! in the intercept slot. Cholesky is tried first; a singular system (for
//! example λ = 0 with collinear features) falls back to the Moore–Penrose
//! pseudo-inverse.

use super::ModelError;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RidgeModel {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
}

impl RidgeModel {
    pub fn fit(x: &[Vec<f64>], y: &[f64], lambda: f64) -> Result<RidgeModel, ModelError> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(ModelError::Spec(format!("lambda must be >= 0, got {lambda}")));
        }
        let n = x.len();
        if n < 2 {
            return Err(ModelError::Training("ridge needs at least 2 rows".into()));
        }
        let p = x[0].len();
        let design = DMatrix::from_fn(n, p + 1, |r, c| if c < p { x[r][c] } else { 1.0 });
        let target = DVector::from_column_slice(y);
        let mut gram = design.transpose() * &design;
        for j in 0..p {
            gram[(j, j)] += lambda;
        }
        let rhs = design.transpose() * target;
        let w = match gram.clone().cholesky() {
            Some(c) => c.solve(&rhs),
            None => {
                let pinv = gram
                    .pseudo_inverse(1e-12)
                    .map_err(|e| ModelError::Training(format!("ridge solve failed: {e}")))?;
                pinv * rhs
            }
        };
        if w.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Training("ridge solution is not finite".into()));
        }
        Ok(RidgeModel {
            coefficients: w.iter().take(p).copied().collect(),
            intercept: w[p],
        })
    }

    pub fn predict_row(&self, row: &[f64]) -> f64 {
        self.intercept + self.coefficients.iter().zip(row).map(|(w, x)| w * x).sum::<f64>()
    }
}
