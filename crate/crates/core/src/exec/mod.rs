//! Chunked batch execution with early stopping.
//!
//! [`ExecutionController`] splits a [`Design`] into consecutive chunks,
//! hands each to a [`Runner`], accumulates the returned [`ResultTable`]s and
//! asks a [`StopCriterion`] after every chunk whether the batch can end.
//! Chunk boundaries are hard synchronization points: a runner may evaluate
//! the rows of one chunk concurrently, but the criterion always sees the
//! complete cumulative table in design order.

mod criterion;
mod runner;
mod subprocess;

pub use criterion::{mean_convergence_criterion, MeanConvergence, NeverStop, StopCriterion};
pub use runner::{attach_inputs, DesignChunk, RowRunner, Runner};
pub use subprocess::SubprocessRunner;

use crate::doe::Design;
use crate::table::{ResultTable, TableError};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExecError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("runner contract violated in chunk {chunk}: {detail}")]
    ContractViolation { chunk: usize, detail: String },
    #[error("runner failed in chunk {chunk}: {message}")]
    Runner { chunk: usize, message: String },
    #[error("stop criterion failed after chunk {chunk}: {message}")]
    Criterion { chunk: usize, message: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    /// The criterion returned `true` after this (1-based) chunk.
    CriterionMet {
        chunk: usize,
    },
    DesignExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionReport {
    pub chunks_executed: usize,
    pub rows_executed: usize,
    pub stop_reason: StopReason,
    /// Wall-clock seconds spent in the runner, per chunk.
    pub chunk_wall_seconds: Vec<f64>,
}

/// Drives a runner over a design chunk by chunk.
pub struct ExecutionController<R, C> {
    runner: R,
    criterion: C,
    chunk_size: usize,
}

impl<R: Runner, C: StopCriterion> ExecutionController<R, C> {
    pub fn new(runner: R, criterion: C, chunk_size: usize) -> Result<Self, ExecError> {
        if chunk_size == 0 {
            return Err(ExecError::InvalidArgument("chunk_size must be >= 1".into()));
        }
        Ok(ExecutionController {
            runner,
            criterion,
            chunk_size,
        })
    }

    pub fn run(&mut self, design: &Design) -> Result<(ResultTable, ExecutionReport), ExecError> {
        if design.is_empty() {
            return Err(ExecError::InvalidArgument("design has no rows".into()));
        }
        let mut cumulative = ResultTable::default();
        let mut timings = Vec::new();
        let mut stop_reason = StopReason::DesignExhausted;
        for (c, start) in (0..design.len()).step_by(self.chunk_size).enumerate() {
            let chunk_no = c + 1;
            let end = (start + self.chunk_size).min(design.len());
            let chunk = DesignChunk {
                number: chunk_no,
                factors: &design.factors,
                rows: &design.rows[start..end],
                indices: (start..end).collect(),
            };
            let t0 = Instant::now();
            let out = self.runner.run(&chunk).map_err(|message| ExecError::Runner {
                chunk: chunk_no,
                message,
            })?;
            timings.push(t0.elapsed().as_secs_f64());
            check_alignment(&chunk, &out)?;

            let previous = cumulative.clone();
            cumulative
                .append(&out)
                .map_err(|e| ExecError::ContractViolation {
                    chunk: chunk_no,
                    detail: e.to_string(),
                })?;
            let stop = self
                .criterion
                .should_stop(&cumulative, &previous)
                .map_err(|message| ExecError::Criterion {
                    chunk: chunk_no,
                    message,
                })?;
            if stop {
                stop_reason = StopReason::CriterionMet { chunk: chunk_no };
                break;
            }
        }
        let report = ExecutionReport {
            chunks_executed: timings.len(),
            rows_executed: cumulative.len(),
            stop_reason,
            chunk_wall_seconds: timings,
        };
        Ok((cumulative, report))
    }
}

/// One-shot form of [`ExecutionController::run`].
pub fn run_batches<R: Runner, C: StopCriterion>(
    design: &Design,
    runner: R,
    criterion: C,
    chunk_size: usize,
) -> Result<(ResultTable, ExecutionReport), ExecError> {
    ExecutionController::new(runner, criterion, chunk_size)?.run(design)
}

fn check_alignment(chunk: &DesignChunk<'_>, out: &ResultTable) -> Result<(), ExecError> {
    let violation = |detail: String| ExecError::ContractViolation {
        chunk: chunk.number,
        detail,
    };
    out.check().map_err(|e| violation(e.to_string()))?;
    if out.len() != chunk.indices.len() {
        return Err(violation(format!(
            "expected {} result rows, got {}",
            chunk.indices.len(),
            out.len()
        )));
    }
    if let Some(pos) = out.index.iter().zip(&chunk.indices).position(|(a, b)| a != b) {
        return Err(violation(format!(
            "result row {pos} carries index {}, expected {}",
            out.index[pos], chunk.indices[pos]
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doe::{lhs_design, FactorSpec};
    use crate::table::{DataColumn, RowStatus};

    fn design(n: usize) -> Design {
        lhs_design(&[FactorSpec::continuous("x", 0.0, 1.0)], n, 1).unwrap()
    }

    fn echo(chunk: &DesignChunk<'_>) -> Result<ResultTable, String> {
        let xs = chunk.rows.iter().map(|r| r[0].as_f64().unwrap());
        Ok(ResultTable::new(
            chunk.indices.clone(),
            vec![RowStatus::Ok; chunk.len()],
            vec![DataColumn::numeric("x", xs)],
        )
        .unwrap())
    }

    fn stop_after_rows(rows: usize) -> impl FnMut(&ResultTable, &ResultTable) -> Result<bool, String> {
        move |cur: &ResultTable, _prev: &ResultTable| Ok(cur.len() >= rows)
    }

    #[test]
    fn scripted_stop_after_second_chunk() {
        let (table, report) = run_batches(&design(1000), echo, stop_after_rows(200), 100).unwrap();
        assert_eq!(report.rows_executed, 200);
        assert_eq!(report.chunks_executed, 2);
        assert_eq!(report.stop_reason, StopReason::CriterionMet { chunk: 2 });
        assert_eq!(table.index, (0..200).collect::<Vec<_>>());
    }

    #[test]
    fn never_stop_exhausts_design() {
        let d = design(1000);
        let (table, report) = run_batches(&d, echo, NeverStop, 100).unwrap();
        assert_eq!(report.rows_executed, 1000);
        assert_eq!(report.chunks_executed, 10);
        assert_eq!(report.stop_reason, StopReason::DesignExhausted);
        // echo output is index-aligned with the design
        let xs = table.column("x").unwrap().present_numeric().unwrap();
        assert_eq!(xs, d.numeric_column("x").unwrap());
    }

    #[test]
    fn short_final_chunk() {
        let (_, report) = run_batches(&design(250), echo, NeverStop, 100).unwrap();
        assert_eq!(report.chunks_executed, 3);
        assert_eq!(report.rows_executed, 250);
    }

    #[test]
    fn zero_chunk_size_rejected() {
        assert!(matches!(
            run_batches(&design(5), echo, NeverStop, 0),
            Err(ExecError::InvalidArgument(_))
        ));
    }

    #[test]
    fn dropped_row_is_a_contract_violation() {
        let lossy = |chunk: &DesignChunk<'_>| {
            let keep: Vec<usize> = chunk.indices.iter().skip(1).copied().collect();
            Ok(ResultTable::new(keep.clone(), vec![RowStatus::Ok; keep.len()], vec![]).unwrap())
        };
        let err = run_batches(&design(10), lossy, NeverStop, 5).unwrap_err();
        assert!(
            matches!(err, ExecError::ContractViolation { chunk: 1, .. }),
            "{err}"
        );
    }

    #[test]
    fn reordered_rows_are_a_contract_violation() {
        let reversed = |chunk: &DesignChunk<'_>| {
            let idx: Vec<usize> = chunk.indices.iter().rev().copied().collect();
            Ok(ResultTable::new(idx, vec![RowStatus::Ok; chunk.len()], vec![]).unwrap())
        };
        assert!(matches!(
            run_batches(&design(4), reversed, NeverStop, 4),
            Err(ExecError::ContractViolation { .. })
        ));
    }

    #[test]
    fn failing_criterion_aborts() {
        let boom = |_: &ResultTable, _: &ResultTable| -> Result<bool, String> { Err("boom".into()) };
        let err = run_batches(&design(10), echo, boom, 5).unwrap_err();
        assert!(matches!(err, ExecError::Criterion { chunk: 1, .. }));
    }

    #[test]
    fn failed_rows_are_kept() {
        let flaky = |chunk: &DesignChunk<'_>| {
            let status = chunk
                .indices
                .iter()
                .map(|i| {
                    if i % 3 == 0 {
                        RowStatus::Failed
                    } else {
                        RowStatus::Ok
                    }
                })
                .collect();
            Ok(ResultTable::new(chunk.indices.clone(), status, vec![]).unwrap())
        };
        let (table, report) = run_batches(&design(9), flaky, NeverStop, 4).unwrap();
        assert_eq!(report.rows_executed, 9);
        assert_eq!(table.ok_count(), 6);
    }
}
