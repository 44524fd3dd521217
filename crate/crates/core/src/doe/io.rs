//! Design CSV files: UTF-8, RFC-4180 quoting, header row of factor names,
//! dot decimal separator. Reals are written in their shortest round-trip
//! form, booleans as `true`/`false`.

use super::{validate_design, Design, DoeError, FactorKind, FactorSpec, Value};
use std::io::{Read, Write};

pub fn write_design_csv<W: Write>(design: &Design, out: W) -> Result<(), DoeError> {
    let report = validate_design(design);
    if let Some(v) = report.violations.first() {
        return Err(DoeError::InvalidArgument(format!(
            "refusing to write invalid design: row {} factor `{}`: {}",
            v.row, v.factor, v.reason
        )));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(design.factors.iter().map(|f| f.name.as_str()))
        .map_err(csv_err)?;
    for row in &design.rows {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a design written by [`write_design_csv`]. The header must list
/// exactly the given factor names in order; cells are typed by factor.
pub fn read_design_csv<R: Read>(input: R, factors: &[FactorSpec]) -> Result<Design, DoeError> {
    super::validate_factors(factors)?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut records = rdr.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(|e| parse_err(1, e.to_string()))?,
        None => return Err(parse_err(1, "missing header row".into())),
    };
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    let expected: Vec<&str> = factors.iter().map(|f| f.name.as_str()).collect();
    if names != expected {
        let looks_like_data = factors
            .iter()
            .zip(&names)
            .any(|(f, cell)| parse_cell(f, cell).is_ok() && !expected.contains(cell));
        let msg = if looks_like_data {
            "missing header row".to_string()
        } else {
            format!("header {names:?} does not match factors {expected:?}")
        };
        return Err(parse_err(1, msg));
    }
    let mut rows = Vec::new();
    for (i, rec) in records.enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| parse_err(line, e.to_string()))?;
        if rec.len() != factors.len() {
            return Err(parse_err(
                line,
                format!("expected {} fields, found {}", factors.len(), rec.len()),
            ));
        }
        let row = factors
            .iter()
            .zip(rec.iter())
            .map(|(f, cell)| parse_cell(f, cell).map_err(|m| parse_err(line, format!("`{}`: {m}", f.name))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Design {
        factors: factors.to_vec(),
        rows,
        seed: None,
    })
}

fn parse_cell(f: &FactorSpec, cell: &str) -> Result<Value, String> {
    let t = cell.trim();
    match &f.kind {
        FactorKind::Continuous { .. } => t
            .parse::<f64>()
            .map(Value::Real)
            .map_err(|_| format!("cannot parse `{cell}` as a real")),
        FactorKind::Integer { .. } => t
            .parse::<i64>()
            .map(Value::Int)
            .map_err(|_| format!("cannot parse `{cell}` as an integer")),
        FactorKind::Categorical { .. } => {
            if cell.is_empty() {
                Err("empty categorical cell".into())
            } else {
                Ok(Value::Level(cell.to_string()))
            }
        }
        FactorKind::Boolean => match t {
            "true" => Ok(Value::Bool(true)),
            "false" => Ok(Value::Bool(false)),
            _ => Err(format!("expected `true` or `false`, found `{cell}`")),
        },
    }
}

fn parse_err(line: usize, message: String) -> DoeError {
    DoeError::Parse { line, message }
}

fn csv_err(e: csv::Error) -> DoeError {
    DoeError::Io(std::io::Error::other(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doe::lhs_design;
    use proptest::prelude::*;

    fn factors() -> Vec<FactorSpec> {
        vec![
            FactorSpec::continuous("x", -1.0, 1.0),
            FactorSpec::integer("n", 0, 10),
            FactorSpec::categorical("label", ["plain", "with,comma", "with \"quote\""]),
            FactorSpec::boolean("flag"),
        ]
    }

    fn to_bytes(d: &Design) -> Vec<u8> {
        let mut buf = Vec::new();
        write_design_csv(d, &mut buf).unwrap();
        buf
    }

    #[test]
    fn boolean_tokens() {
        let d = lhs_design(&[FactorSpec::boolean("b")], 2, 3).unwrap();
        let text = String::from_utf8(to_bytes(&d)).unwrap();
        let mut body: Vec<&str> = text.lines().skip(1).collect();
        body.sort_unstable();
        assert_eq!(body, vec!["false", "true"]);
    }

    #[test]
    fn headerless_file_fails_on_line_one() {
        let f = vec![FactorSpec::continuous("x", 0.0, 1.0)];
        let err = read_design_csv("0.5\n0.25\n".as_bytes(), &f).unwrap_err();
        assert!(matches!(err, DoeError::Parse { line: 1, .. }), "{err}");
    }

    #[test]
    fn bad_cell_reports_line() {
        let f = vec![FactorSpec::continuous("x", 0.0, 1.0)];
        let err = read_design_csv("x\n0.5\nabc\n".as_bytes(), &f).unwrap_err();
        assert!(matches!(err, DoeError::Parse { line: 3, .. }), "{err}");
        let err = read_design_csv("x\n0.5,1\n".as_bytes(), &f).unwrap_err();
        assert!(matches!(err, DoeError::Parse { line: 2, .. }), "{err}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn write_read_identity(n in 1usize..120, seed in any::<u64>()) {
            let d = lhs_design(&factors(), n, seed).unwrap();
            let bytes = to_bytes(&d);
            let back = read_design_csv(&bytes[..], &factors()).unwrap();
            prop_assert_eq!(&back.factors, &d.factors);
            prop_assert_eq!(&back.rows, &d.rows);
            // identical inputs serialize to identical bytes
            prop_assert_eq!(bytes, to_bytes(&lhs_design(&factors(), n, seed).unwrap()));
        }
    }
}
