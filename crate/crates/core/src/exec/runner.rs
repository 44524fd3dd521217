use crate::doe::{Design, FactorKind, FactorSpec, Value};
use crate::table::{DataColumn, ResultTable, RowStatus};
use rayon::prelude::*;

/// A contiguous slice of a design handed to a runner.
#[derive(Debug, Clone)]
pub struct DesignChunk<'a> {
    /// 1-based chunk number.
    pub number: usize,
    pub factors: &'a [FactorSpec],
    pub rows: &'a [Vec<Value>],
    /// Original design row index of each row in `rows`.
    pub indices: Vec<usize>,
}

impl DesignChunk<'_> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The chunk as a stand-alone design (used by the subprocess protocol).
    pub fn to_design(&self) -> Design {
        Design {
            factors: self.factors.to_vec(),
            rows: self.rows.to_vec(),
            seed: None,
        }
    }
}

/// Executes one chunk. Must return exactly one row per input row, in
/// input order, with `index` equal to the chunk's `indices`. Individual
/// failures are rows with [`RowStatus::Failed`]; `Err` aborts the batch.
pub trait Runner {
    fn run(&self, chunk: &DesignChunk<'_>) -> Result<ResultTable, String>;
}

impl<F> Runner for F
where
    F: Fn(&DesignChunk<'_>) -> Result<ResultTable, String>,
{
    fn run(&self, chunk: &DesignChunk<'_>) -> Result<ResultTable, String> {
        self(chunk)
    }
}

type RowFn = dyn Fn(usize, &[FactorSpec], &[Value]) -> Option<Vec<f64>> + Send + Sync;

/// Runner built from a per-row function with fixed numeric outputs.
/// Rows of a chunk are evaluated in parallel and reassembled in order;
/// `None` marks the row as failed.
pub struct RowRunner {
    outputs: Vec<String>,
    row_fn: Box<RowFn>,
}

impl RowRunner {
    pub fn new<F>(outputs: Vec<String>, row_fn: F) -> Self
    where
        F: Fn(usize, &[FactorSpec], &[Value]) -> Option<Vec<f64>> + Send + Sync + 'static,
    {
        RowRunner {
            outputs,
            row_fn: Box::new(row_fn),
        }
    }
}

impl Runner for RowRunner {
    fn run(&self, chunk: &DesignChunk<'_>) -> Result<ResultTable, String> {
        let results: Vec<Option<Vec<f64>>> = chunk
            .rows
            .par_iter()
            .zip(chunk.indices.par_iter())
            .map(|(row, &idx)| {
                (self.row_fn)(idx, chunk.factors, row).filter(|v| v.len() == self.outputs.len())
            })
            .collect();
        let status = results
            .iter()
            .map(|r| {
                if r.is_some() {
                    RowStatus::Ok
                } else {
                    RowStatus::Failed
                }
            })
            .collect();
        let columns = self
            .outputs
            .iter()
            .enumerate()
            .map(|(j, name)| {
                DataColumn::numeric_opt(
                    name.clone(),
                    results.iter().map(|r| r.as_ref().map(|v| v[j])).collect(),
                )
            })
            .collect();
        ResultTable::new(chunk.indices.clone(), status, columns).map_err(|e| e.to_string())
    }
}

/// Prepends the design's factor columns to a result table, matching rows
/// by design index. Continuous and integer factors become numeric columns;
/// categorical and boolean factors become categorical columns.
pub fn attach_inputs(design: &Design, results: &ResultTable) -> Result<ResultTable, String> {
    let mut columns = Vec::with_capacity(design.factors.len() + results.columns.len());
    for (j, f) in design.factors.iter().enumerate() {
        let cells = results.index.iter().map(|&i| {
            design
                .rows
                .get(i)
                .map(|r| r[j].clone())
                .ok_or_else(|| format!("result index {i} outside design"))
        });
        let col = match f.kind {
            FactorKind::Continuous { .. } | FactorKind::Integer { .. } => DataColumn::numeric_opt(
                f.name.clone(),
                cells.map(|c| c.map(|v| v.as_f64())).collect::<Result<_, _>>()?,
            ),
            FactorKind::Categorical { .. } | FactorKind::Boolean => DataColumn::categorical_opt(
                f.name.clone(),
                cells
                    .map(|c| c.map(|v| Some(v.to_string())))
                    .collect::<Result<_, _>>()?,
            ),
        };
        columns.push(col);
    }
    for c in &results.columns {
        if design.factor_index(&c.name).is_none() {
            columns.push(c.clone());
        }
    }
    ResultTable::new(results.index.clone(), results.status.clone(), columns).map_err(|e| e.to_string())
}
