//! CSV ingestion and emission for regression datasets.
//!
//! Dialect: comma separator, first row is the header, plain decimal
//! numbers, no quoting. Every cell must parse as a finite real and every
//! row must match the header width.

use std::io;
use std::path::Path;

use trimfit_core::Dataset;

use crate::error::{CliError, Result};

/// A rectangular numeric table with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn read_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| CliError::usage(format!("cannot open {}: {e}", path.display())))?;
        Self::read(file).map_err(|e| match e {
            CliError::Usage(m) => CliError::usage(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn read<R: io::Read>(source: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(source);
        let header: Vec<String> = reader
            .headers()
            .map_err(|e| CliError::usage(format!("cannot read header: {e}")))?
            .iter()
            .map(str::to_owned)
            .collect();
        if header.is_empty() {
            return Err(CliError::usage("empty input: no header row"));
        }

        let mut rows = Vec::new();
        for (index, record) in reader.records().enumerate() {
            let line = index + 2;
            let record = record.map_err(|e| CliError::usage(format!("line {line}: {e}")))?;
            if record.len() != header.len() {
                return Err(CliError::usage(format!(
                    "line {line}: expected {} fields, found {}",
                    header.len(),
                    record.len()
                )));
            }
            let mut row = Vec::with_capacity(record.len());
            for (cell, name) in record.iter().zip(&header) {
                let value: f64 = cell.parse().map_err(|_| {
                    CliError::usage(format!(
                        "line {line}, column `{name}`: `{cell}` is not a number"
                    ))
                })?;
                if !value.is_finite() {
                    return Err(CliError::usage(format!(
                        "line {line}, column `{name}`: `{cell}` is not finite"
                    )));
                }
                row.push(value);
            }
            rows.push(row);
        }
        if rows.is_empty() {
            return Err(CliError::usage("empty input: no data rows"));
        }
        Ok(CsvTable { header, rows })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Splits off the named response column; the remaining columns become
    /// predictors in header order. Returns the predictor names alongside.
    pub fn to_dataset(&self, response: &str) -> Result<(Dataset, Vec<String>)> {
        let target = self
            .header
            .iter()
            .position(|h| h == response)
            .ok_or_else(|| {
                CliError::usage(format!(
                    "response column `{response}` not found; columns are {}",
                    self.header
                        .iter()
                        .map(|h| format!("`{h}`"))
                        .collect::<Vec<_>>()
                        .join(", ")
                ))
            })?;
        if self.header.len() < 2 {
            return Err(CliError::usage(
                "need at least one predictor column besides the response",
            ));
        }

        let mut predictors = Vec::with_capacity(self.rows.len());
        let mut responses = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut x = Vec::with_capacity(row.len() - 1);
            for (j, value) in row.iter().enumerate() {
                if j != target {
                    x.push(*value);
                }
            }
            predictors.push(x);
            responses.push(row[target]);
        }
        let names = self
            .header
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != target)
            .map(|(_, h)| h.clone())
            .collect();
        let dataset = Dataset::new(predictors, responses)?;
        Ok((dataset, names))
    }

    /// Renders a dataset back to CSV text, predictors first and the
    /// response last. Float formatting round-trips every `f64` exactly.
    pub fn render(d: &Dataset, predictor_names: &[String], response: &str) -> String {
        let mut out = String::new();
        for name in predictor_names {
            out.push_str(name);
            out.push(',');
        }
        out.push_str(response);
        out.push('\n');
        for i in 0..d.n() {
            for x in d.predictor_row(i) {
                out.push_str(&format!("{x},"));
            }
            out.push_str(&format!("{}\n", d.response(i)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(text: &str) -> Result<CsvTable> {
        CsvTable::read(text.as_bytes())
    }

    #[test]
    fn parses_a_plain_file() {
        let t = table("x,y\n1.5,2\n-3,0.25\n").unwrap();
        assert_eq!(t.header(), ["x", "y"]);
        assert_eq!(t.n(), 2);
        let (d, names) = t.to_dataset("y").unwrap();
        assert_eq!(names, ["x"]);
        assert_eq!(d.predictor_row(0), [1.5]);
        assert_eq!(d.response(1), 0.25);
    }

    #[test]
    fn response_can_sit_in_any_column() {
        let t = table("y,a,b\n1,2,3\n4,5,6\n").unwrap();
        let (d, names) = t.to_dataset("y").unwrap();
        assert_eq!(names, ["a", "b"]);
        assert_eq!(d.predictor_row(0), [2.0, 3.0]);
        assert_eq!(d.response(0), 1.0);
    }

    #[test]
    fn missing_response_names_the_column_and_the_alternatives() {
        let t = table("a,b\n1,2\n").unwrap();
        let err = t.to_dataset("weight").unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let text = err.to_string();
        assert!(text.contains("`weight`"), "{text}");
        assert!(text.contains("`a`"), "{text}");
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = table("x,y\n1,2\n3\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejects_non_numeric_and_non_finite_cells() {
        let err = table("x,y\n1,apple\n").unwrap_err();
        assert!(err.to_string().contains("`apple`"));
        let err = table("x,y\n1,inf\n").unwrap_err();
        assert!(err.to_string().contains("not finite"));
        let err = table("x,y\n1,NaN\n").unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn rejects_empty_input() {
        assert_eq!(table("").unwrap_err().exit_code(), 2);
        assert_eq!(table("x,y\n").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn render_then_read_is_identity() {
        let t = table("x,y\n0.1,2\n-7.25,3.5\n").unwrap();
        let (d, names) = t.to_dataset("y").unwrap();
        let text = CsvTable::render(&d, &names, "y");
        let (again, _) = table(&text).unwrap().to_dataset("y").unwrap();
        assert_eq!(d, again);
    }

    proptest! {
        /// Write-then-read preserves every value exactly, well inside the
        /// 1e-12 budget.
        #[test]
        fn round_trip_is_exact(
            xs in prop::collection::vec(-1e9f64..1e9, 2..30),
            ys in prop::collection::vec(-1e9f64..1e9, 30),
        ) {
            let n = xs.len();
            let d = Dataset::from_columns(&[xs], &ys[..n]).unwrap();
            let text = CsvTable::render(&d, &["x".into()], "y");
            let (again, _) = CsvTable::read(text.as_bytes())
                .unwrap()
                .to_dataset("y")
                .unwrap();
            prop_assert_eq!(d, again);
        }
    }
}
