//! Column-oriented tables shared by execution, analysis and modeling.
//!
//! A [`ResultTable`] is the universal interchange value: named columns that
//! are either numeric or categorical, plus the reserved `_index` (design
//! row) and `_status` (`ok` / `failed`) columns. Missing cells are `None`
//! and serialize as empty CSV fields.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::path::Path;
use thiserror::Error;

pub const INDEX_COLUMN: &str = "_index";
pub const STATUS_COLUMN: &str = "_status";

#[derive(Debug, Error)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("column `{0}` not found")]
    MissingColumn(String),
    #[error("column `{name}` has {got} values, expected {expected}")]
    LengthMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("duplicate design index {0}")]
    DuplicateIndex(usize),
    #[error("column `{0}` is not numeric")]
    NotNumeric(String),
    #[error("column `{0}` is not categorical")]
    NotCategorical(String),
    #[error("duplicate column name `{0}`")]
    DuplicateColumn(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Numeric,
    Categorical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnData {
    Numeric(Vec<Option<f64>>),
    Categorical(Vec<Option<String>>),
}

/// A named column with an explicit missing marker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataColumn {
    pub name: String,
    pub data: ColumnData,
}

impl DataColumn {
    pub fn numeric(name: impl Into<String>, values: impl IntoIterator<Item = f64>) -> Self {
        DataColumn {
            name: name.into(),
            data: ColumnData::Numeric(values.into_iter().map(Some).collect()),
        }
    }

    pub fn numeric_opt(name: impl Into<String>, values: Vec<Option<f64>>) -> Self {
        DataColumn {
            name: name.into(),
            data: ColumnData::Numeric(values),
        }
    }

    pub fn categorical<S: Into<String>>(
        name: impl Into<String>,
        values: impl IntoIterator<Item = S>,
    ) -> Self {
        DataColumn {
            name: name.into(),
            data: ColumnData::Categorical(values.into_iter().map(|s| Some(s.into())).collect()),
        }
    }

    pub fn categorical_opt(name: impl Into<String>, values: Vec<Option<String>>) -> Self {
        DataColumn {
            name: name.into(),
            data: ColumnData::Categorical(values),
        }
    }

    pub fn kind(&self) -> ColumnKind {
        match self.data {
            ColumnData::Numeric(_) => ColumnKind::Numeric,
            ColumnData::Categorical(_) => ColumnKind::Categorical,
        }
    }

    pub fn len(&self) -> usize {
        match &self.data {
            ColumnData::Numeric(v) => v.len(),
            ColumnData::Categorical(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_missing(&self, row: usize) -> bool {
        match &self.data {
            ColumnData::Numeric(v) => v[row].is_none(),
            ColumnData::Categorical(v) => v[row].is_none(),
        }
    }

    pub fn as_numeric(&self) -> Result<&[Option<f64>], TableError> {
        match &self.data {
            ColumnData::Numeric(v) => Ok(v),
            ColumnData::Categorical(_) => Err(TableError::NotNumeric(self.name.clone())),
        }
    }

    pub fn as_categorical(&self) -> Result<&[Option<String>], TableError> {
        match &self.data {
            ColumnData::Categorical(v) => Ok(v),
            ColumnData::Numeric(_) => Err(TableError::NotCategorical(self.name.clone())),
        }
    }

    /// Non-missing numeric values in row order.
    pub fn present_numeric(&self) -> Result<Vec<f64>, TableError> {
        Ok(self.as_numeric()?.iter().flatten().copied().collect())
    }

    /// Observed categorical levels in sorted order.
    pub fn levels(&self) -> Vec<String> {
        match &self.data {
            ColumnData::Categorical(v) => v
                .iter()
                .flatten()
                .cloned()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            ColumnData::Numeric(_) => Vec::new(),
        }
    }

    /// New column holding only the given rows.
    pub fn select(&self, rows: &[usize]) -> DataColumn {
        let data = match &self.data {
            ColumnData::Numeric(v) => ColumnData::Numeric(rows.iter().map(|&r| v[r]).collect()),
            ColumnData::Categorical(v) => {
                ColumnData::Categorical(rows.iter().map(|&r| v[r].clone()).collect())
            }
        };
        DataColumn {
            name: self.name.clone(),
            data,
        }
    }

    fn cell_string(&self, row: usize) -> String {
        match &self.data {
            ColumnData::Numeric(v) => v[row].map(format_real).unwrap_or_default(),
            ColumnData::Categorical(v) => v[row].clone().unwrap_or_default(),
        }
    }

    fn extend_from(&mut self, other: &DataColumn) -> Result<(), TableError> {
        match (&mut self.data, &other.data) {
            (ColumnData::Numeric(a), ColumnData::Numeric(b)) => a.extend_from_slice(b),
            (ColumnData::Categorical(a), ColumnData::Categorical(b)) => a.extend(b.iter().cloned()),
            // A column that looked numeric in one chunk and textual in
            // another degrades to categorical.
            (ColumnData::Numeric(a), ColumnData::Categorical(b)) => {
                let mut merged: Vec<Option<String>> = a.iter().map(|x| x.map(format_real)).collect();
                merged.extend(b.iter().cloned());
                self.data = ColumnData::Categorical(merged);
            }
            (ColumnData::Categorical(a), ColumnData::Numeric(b)) => {
                a.extend(b.iter().map(|x| x.map(format_real)));
            }
        }
        Ok(())
    }
}

/// Shortest decimal representation that parses back to the same `f64`.
pub fn format_real(x: f64) -> String {
    if x.is_finite() {
        format!("{x:?}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    Failed,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Failed => "failed",
        }
    }
}

/// Row-aligned simulation outputs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultTable {
    pub index: Vec<usize>,
    pub status: Vec<RowStatus>,
    pub columns: Vec<DataColumn>,
}

impl ResultTable {
    pub fn new(
        index: Vec<usize>,
        status: Vec<RowStatus>,
        columns: Vec<DataColumn>,
    ) -> Result<Self, TableError> {
        let table = ResultTable {
            index,
            status,
            columns,
        };
        table.check()?;
        Ok(table)
    }

    /// Validates equal lengths, unique indices and unique column names.
    pub fn check(&self) -> Result<(), TableError> {
        let n = self.index.len();
        if self.status.len() != n {
            return Err(TableError::LengthMismatch {
                name: STATUS_COLUMN.into(),
                expected: n,
                got: self.status.len(),
            });
        }
        let mut names = BTreeSet::new();
        for c in &self.columns {
            if c.len() != n {
                return Err(TableError::LengthMismatch {
                    name: c.name.clone(),
                    expected: n,
                    got: c.len(),
                });
            }
            if c.name == INDEX_COLUMN || c.name == STATUS_COLUMN || !names.insert(&c.name) {
                return Err(TableError::DuplicateColumn(c.name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for &i in &self.index {
            if !seen.insert(i) {
                return Err(TableError::DuplicateIndex(i));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn column(&self, name: &str) -> Result<&DataColumn, TableError> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| TableError::MissingColumn(name.to_string()))
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn ok_count(&self) -> usize {
        self.status.iter().filter(|s| **s == RowStatus::Ok).count()
    }

    /// Values of a numeric column restricted to `ok` rows, skipping missing.
    pub fn ok_numeric(&self, name: &str) -> Result<Vec<f64>, TableError> {
        let col = self.column(name)?.as_numeric()?;
        Ok(col
            .iter()
            .zip(&self.status)
            .filter(|(_, s)| **s == RowStatus::Ok)
            .filter_map(|(v, _)| *v)
            .collect())
    }

    /// Row subset, in the given order.
    pub fn select(&self, rows: &[usize]) -> ResultTable {
        ResultTable {
            index: rows.iter().map(|&r| self.index[r]).collect(),
            status: rows.iter().map(|&r| self.status[r]).collect(),
            columns: self.columns.iter().map(|c| c.select(rows)).collect(),
        }
    }

    /// Appends the rows of `other`. Columns are matched by name; columns
    /// present on only one side are padded with missing values.
    pub fn append(&mut self, other: &ResultTable) -> Result<(), TableError> {
        let before = self.len();
        for oc in &other.columns {
            if self.columns.iter().all(|c| c.name != oc.name) {
                let data = match oc.data {
                    ColumnData::Numeric(_) => ColumnData::Numeric(vec![None; before]),
                    ColumnData::Categorical(_) => ColumnData::Categorical(vec![None; before]),
                };
                self.columns.push(DataColumn {
                    name: oc.name.clone(),
                    data,
                });
            }
        }
        for c in &mut self.columns {
            match other.columns.iter().find(|oc| oc.name == c.name) {
                Some(oc) => c.extend_from(oc)?,
                None => {
                    let pad = other.len();
                    match &mut c.data {
                        ColumnData::Numeric(v) => v.extend(std::iter::repeat_n(None, pad)),
                        ColumnData::Categorical(v) => v.extend(std::iter::repeat_n(None, pad)),
                    }
                }
            }
        }
        self.index.extend_from_slice(&other.index);
        self.status.extend_from_slice(&other.status);
        self.check()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), TableError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec![INDEX_COLUMN.to_string(), STATUS_COLUMN.to_string()];
        header.extend(self.columns.iter().map(|c| c.name.clone()));
        w.write_record(&header).map_err(csv_io)?;
        for r in 0..self.len() {
            let mut rec = vec![self.index[r].to_string(), self.status[r].as_str().to_string()];
            rec.extend(self.columns.iter().map(|c| c.cell_string(r)));
            w.write_record(&rec).map_err(csv_io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_csv_path(&self, path: impl AsRef<Path>) -> Result<(), TableError> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    /// Parses a CSV with a header row. `_index` and `_status` are optional:
    /// missing `_index` numbers rows from 0, missing `_status` means `ok`.
    /// Other columns are numeric when every non-empty cell parses as a
    /// real, categorical otherwise.
    pub fn read_csv<R: Read>(input: R) -> Result<ResultTable, TableError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(input);
        let mut records = rdr.records();
        let header = match records.next() {
            Some(h) => h.map_err(|e| csv_parse(1, e))?,
            None => {
                return Err(TableError::Parse {
                    line: 1,
                    message: "missing header row".into(),
                })
            }
        };
        let names: Vec<String> = header.iter().map(|s| s.trim().to_string()).collect();
        if names.iter().any(|n| n.is_empty()) {
            return Err(TableError::Parse {
                line: 1,
                message: "empty column name in header".into(),
            });
        }
        let mut raw: Vec<Vec<String>> = vec![Vec::new(); names.len()];
        for (i, rec) in records.enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| csv_parse(line, e))?;
            if rec.len() != names.len() {
                return Err(TableError::Parse {
                    line,
                    message: format!("expected {} fields, found {}", names.len(), rec.len()),
                });
            }
            for (j, cell) in rec.iter().enumerate() {
                raw[j].push(cell.to_string());
            }
        }
        let n = raw.first().map_or(0, Vec::len);
        let mut index = None;
        let mut status = None;
        let mut columns = Vec::new();
        for (name, cells) in names.into_iter().zip(raw) {
            if name == INDEX_COLUMN {
                let mut idx = Vec::with_capacity(n);
                for (r, c) in cells.iter().enumerate() {
                    idx.push(c.trim().parse::<usize>().map_err(|_| TableError::Parse {
                        line: r + 2,
                        message: format!("invalid {INDEX_COLUMN} value `{c}`"),
                    })?);
                }
                index = Some(idx);
            } else if name == STATUS_COLUMN {
                let mut st = Vec::with_capacity(n);
                for (r, c) in cells.iter().enumerate() {
                    st.push(match c.trim() {
                        "ok" | "" => RowStatus::Ok,
                        "failed" => RowStatus::Failed,
                        other => {
                            return Err(TableError::Parse {
                                line: r + 2,
                                message: format!("invalid {STATUS_COLUMN} value `{other}`"),
                            })
                        }
                    });
                }
                status = Some(st);
            } else {
                columns.push(infer_column(name, cells));
            }
        }
        ResultTable::new(
            index.unwrap_or_else(|| (0..n).collect()),
            status.unwrap_or_else(|| vec![RowStatus::Ok; n]),
            columns,
        )
    }

    pub fn read_csv_path(path: impl AsRef<Path>) -> Result<ResultTable, TableError> {
        let f = std::fs::File::open(path)?;
        ResultTable::read_csv(std::io::BufReader::new(f))
    }
}

fn infer_column(name: String, cells: Vec<String>) -> DataColumn {
    let parsed: Option<Vec<Option<f64>>> = cells
        .iter()
        .map(|c| {
            let t = c.trim();
            if t.is_empty() {
                Some(None)
            } else {
                t.parse::<f64>().ok().map(Some)
            }
        })
        .collect();
    match parsed {
        Some(values) => DataColumn::numeric_opt(name, values),
        None => DataColumn::categorical_opt(
            name,
            cells
                .into_iter()
                .map(|c| if c.is_empty() { None } else { Some(c) })
                .collect(),
        ),
    }
}

fn csv_parse(line: usize, e: csv::Error) -> TableError {
    TableError::Parse {
        line,
        message: e.to_string(),
    }
}

fn csv_io(e: csv::Error) -> TableError {
    TableError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        ResultTable::new(
            vec![0, 1, 2],
            vec![RowStatus::Ok, RowStatus::Failed, RowStatus::Ok],
            vec![
                DataColumn::numeric_opt("y", vec![Some(1.5), None, Some(0.1)]),
                DataColumn::categorical("tag", ["a", "b,c", "a"]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn csv_round_trip() {
        let t = sample();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("_index,_status,y,tag\n"));
        assert!(text.contains("\"b,c\""));
        assert_eq!(ResultTable::read_csv(&buf[..]).unwrap(), t);
    }

    #[test]
    fn ok_numeric_skips_failed_rows() {
        assert_eq!(sample().ok_numeric("y").unwrap(), vec![1.5, 0.1]);
    }

    #[test]
    fn duplicate_index_rejected() {
        let err = ResultTable::new(vec![1, 1], vec![RowStatus::Ok; 2], vec![]).unwrap_err();
        assert!(matches!(err, TableError::DuplicateIndex(1)));
    }

    #[test]
    fn append_pads_missing_columns() {
        let mut a = ResultTable::new(
            vec![0],
            vec![RowStatus::Ok],
            vec![DataColumn::numeric("x", [1.0])],
        )
        .unwrap();
        let b = ResultTable::new(
            vec![1],
            vec![RowStatus::Failed],
            vec![DataColumn::numeric("z", [2.0])],
        )
        .unwrap();
        a.append(&b).unwrap();
        assert_eq!(a.column("x").unwrap().as_numeric().unwrap(), &[Some(1.0), None]);
        assert_eq!(a.column("z").unwrap().as_numeric().unwrap(), &[None, Some(2.0)]);
    }

    #[test]
    fn ragged_row_reports_line() {
        let err = ResultTable::read_csv("a,b\n1,2\n3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn empty_input_is_missing_header() {
        let err = ResultTable::read_csv("".as_bytes()).unwrap_err();
        assert!(matches!(err, TableError::Parse { line: 1, .. }));
    }
}
