use super::ExecError;
use crate::table::ResultTable;

/// Decides, after each chunk, whether the batch may stop. Receives the
/// cumulative table after the chunk and the cumulative table before it.
/// Must return `false` when `previous` is empty.
pub trait StopCriterion {
    fn should_stop(&mut self, current: &ResultTable, previous: &ResultTable) -> Result<bool, String>;
}

impl<F> StopCriterion for F
where
    F: FnMut(&ResultTable, &ResultTable) -> Result<bool, String>,
{
    fn should_stop(&mut self, current: &ResultTable, previous: &ResultTable) -> Result<bool, String> {
        self(current, previous)
    }
}

/// Runs the whole design.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeverStop;

impl StopCriterion for NeverStop {
    fn should_stop(&mut self, _: &ResultTable, _: &ResultTable) -> Result<bool, String> {
        Ok(false)
    }
}

/// Stops once the cumulative mean of `metric` over `ok` rows moves by less
/// than `epsilon` relative to its previous value:
///
/// `|m_now − m_prev| / max(|m_prev|, floor) < epsilon`
#[derive(Debug, Clone, PartialEq)]
pub struct MeanConvergence {
    pub metric: String,
    pub epsilon: f64,
    pub floor: f64,
}

pub fn mean_convergence_criterion(
    metric: impl Into<String>,
    epsilon: f64,
    floor: f64,
) -> Result<MeanConvergence, ExecError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(ExecError::InvalidArgument(format!(
            "epsilon must be > 0, got {epsilon}"
        )));
    }
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(ExecError::InvalidArgument(format!(
            "floor must be > 0, got {floor}"
        )));
    }
    Ok(MeanConvergence {
        metric: metric.into(),
        epsilon,
        floor,
    })
}

impl MeanConvergence {
    /// The relative change that is compared against `epsilon`.
    pub fn relative_change(&self, m_now: f64, m_prev: f64) -> f64 {
        (m_now - m_prev).abs() / m_prev.abs().max(self.floor)
    }

    fn ok_mean(&self, table: &ResultTable) -> Result<Option<f64>, String> {
        let values = table
            .ok_numeric(&self.metric)
            .map_err(|e| format!("metric `{}` unusable for convergence: {e}", self.metric))?;
        if values.is_empty() {
            return Ok(None);
        }
        Ok(Some(values.iter().sum::<f64>() / values.len() as f64))
    }
}

impl StopCriterion for MeanConvergence {
    fn should_stop(&mut self, current: &ResultTable, previous: &ResultTable) -> Result<bool, String> {
        // Column presence is checked on the first call, before the
        // empty-prior shortcut.
        let now = self.ok_mean(current)?;
        if previous.is_empty() {
            return Ok(false);
        }
        let prev = self.ok_mean(previous)?;
        Ok(match (now, prev) {
            (Some(n), Some(p)) => self.relative_change(n, p) < self.epsilon,
            _ => false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{DataColumn, RowStatus};

    fn table(start: usize, values: &[f64], status: &[RowStatus]) -> ResultTable {
        ResultTable::new(
            (start..start + values.len()).collect(),
            status.to_vec(),
            vec![DataColumn::numeric("m", values.iter().copied())],
        )
        .unwrap()
    }

    #[test]
    fn small_relative_change_stops() {
        let c = mean_convergence_criterion("m", 0.01, 1e-9).unwrap();
        let rel = c.relative_change(10.04, 10.00);
        assert!((rel - 0.004).abs() < 1e-12);
        assert!(rel < 0.01);
    }

    #[test]
    fn zero_prior_mean_uses_floor() {
        let c = mean_convergence_criterion("m", 0.01, 1e-9).unwrap();
        let rel = c.relative_change(0.1, 0.0);
        assert!((rel - 1e8).abs() < 1.0);
    }

    #[test]
    fn first_chunk_never_stops() {
        let mut c = mean_convergence_criterion("m", 0.5, 1e-9).unwrap();
        let cur = table(0, &[1.0, 1.0], &[RowStatus::Ok; 2]);
        assert!(!c.should_stop(&cur, &ResultTable::default()).unwrap());
    }

    #[test]
    fn failed_rows_do_not_enter_the_mean() {
        let mut c = mean_convergence_criterion("m", 0.01, 1e-9).unwrap();
        let prev = table(0, &[10.0, 10.0], &[RowStatus::Ok; 2]);
        let mut cur = prev.clone();
        cur.append(&table(2, &[10.0, 1e6], &[RowStatus::Ok, RowStatus::Failed]))
            .unwrap();
        assert!(c.should_stop(&cur, &prev).unwrap());
    }

    #[test]
    fn missing_metric_is_reported_on_first_evaluation() {
        let mut c = mean_convergence_criterion("nope", 0.01, 1e-9).unwrap();
        let cur = table(0, &[1.0], &[RowStatus::Ok]);
        assert!(c.should_stop(&cur, &ResultTable::default()).is_err());
    }

    #[test]
    fn parameters_validated() {
        assert!(mean_convergence_criterion("m", 0.0, 1.0).is_err());
        assert!(mean_convergence_criterion("m", 0.1, 0.0).is_err());
    }
}
