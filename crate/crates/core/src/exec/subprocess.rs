//! Runner protocol for external simulators.
//!
//! For every chunk the controller writes the chunk as a design CSV to a
//! temporary directory and runs `program [args...] <in.csv> <out.csv>`.
//! The program writes a result CSV (header row; optional reserved `_index`
//! and `_status` columns). `_index` in the output refers to the 0-based
//! row within the chunk file; it is remapped to design row indices. A
//! nonzero exit marks every row of the chunk as failed.

use super::runner::{DesignChunk, Runner};
use crate::doe::write_design_csv;
use crate::table::{ResultTable, RowStatus};
use serde::{Deserialize, Serialize};
use std::process::Command;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubprocessRunner {
    pub program: String,
    #[serde(default)]
    pub args: Vec<String>,
}

impl SubprocessRunner {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> Self {
        SubprocessRunner {
            program: program.into(),
            args,
        }
    }

    fn all_failed(chunk: &DesignChunk<'_>) -> Result<ResultTable, String> {
        ResultTable::new(
            chunk.indices.clone(),
            vec![RowStatus::Failed; chunk.len()],
            vec![],
        )
        .map_err(|e| e.to_string())
    }
}

impl Runner for SubprocessRunner {
    fn run(&self, chunk: &DesignChunk<'_>) -> Result<ResultTable, String> {
        let dir = tempfile::tempdir().map_err(|e| format!("temp dir: {e}"))?;
        let input = dir.path().join("in.csv");
        let output = dir.path().join("out.csv");
        let file = std::fs::File::create(&input).map_err(|e| format!("{}: {e}", input.display()))?;
        write_design_csv(&chunk.to_design(), std::io::BufWriter::new(file)).map_err(|e| e.to_string())?;

        let status = Command::new(&self.program)
            .args(&self.args)
            .arg(&input)
            .arg(&output)
            .status()
            .map_err(|e| format!("cannot start `{}`: {e}", self.program))?;
        if !status.success() {
            return Self::all_failed(chunk);
        }

        let mut table =
            ResultTable::read_csv_path(&output).map_err(|e| format!("reading {}: {e}", output.display()))?;
        for idx in &mut table.index {
            // Out-of-range positions are left as-is; alignment checking in
            // the controller reports them.
            if let Some(&global) = chunk.indices.get(*idx) {
                *idx = global;
            } else {
                *idx = usize::MAX - *idx;
            }
        }
        Ok(table)
    }
}
