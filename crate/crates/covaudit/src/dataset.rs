//! Tabular data model and CSV ingestion.
//!
//! A [`Dataset`] is a set of named, equal-length, all-finite numeric columns.
//! Observed data loaded from CSV is audited identically to simulated data.
//! Missing values are a hard error, never imputed: the variance accounting
//! downstream assumes complete data.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Named numeric columns, one row per observation. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Dataset {
    /// Builds a dataset, enforcing the column invariants: names unique and
    /// nonempty, all columns the same length n >= 1, every cell finite.
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::Dimension(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        if names.is_empty() {
            return Err(Error::Dimension("dataset needs at least one column".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::Dimension(format!("column {i} has an empty name")));
            }
            if names[..i].contains(name) {
                return Err(Error::DuplicateHeader(name.clone()));
            }
        }
        let n = columns[0].len();
        if n == 0 {
            return Err(Error::Dimension("dataset needs at least one row".into()));
        }
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n {
                return Err(Error::Dimension(format!(
                    "column {name:?} has {} rows, expected {n}",
                    col.len()
                )));
            }
            if let Some(r) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::MissingValue {
                    row: r + 1,
                    col: names.iter().position(|m| m == name).unwrap() + 1,
                });
            }
        }
        Ok(Self { names, columns })
    }

    /// Row count.
    pub fn n(&self) -> usize {
        self.columns[0].len()
    }

    /// Column count.
    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn column_names(&self) -> &[String] {
        &self.names
    }

    /// Column by name.
    pub fn column(&self, name: &str) -> Result<&[f64]> {
        let idx = self
            .names
            .iter()
            .position(|m| m == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        Ok(&self.columns[idx])
    }

    /// New dataset with an extra column appended.
    pub fn with_column(&self, name: &str, values: Vec<f64>) -> Result<Self> {
        let mut names = self.names.clone();
        names.push(name.to_string());
        let mut columns = self.columns.clone();
        columns.push(values);
        Self::new(names, columns)
    }

    /// New dataset with one column's values replaced.
    pub fn replace_column(&self, name: &str, values: Vec<f64>) -> Result<Self> {
        let idx = self
            .names
            .iter()
            .position(|m| m == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))?;
        let mut columns = self.columns.clone();
        columns[idx] = values;
        Self::new(self.names.clone(), columns)
    }

    /// Writes the dataset as CSV. Cells use the shortest decimal form that
    /// parses back to the identical f64, so a write/load round trip is
    /// bit-exact.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(sink);
        writer
            .write_record(&self.names)
            .map_err(|e| Error::Dimension(format!("csv write: {e}")))?;
        for r in 0..self.n() {
            let record: Vec<String> = self.columns.iter().map(|c| c[r].to_string()).collect();
            writer
                .write_record(&record)
                .map_err(|e| Error::Dimension(format!("csv write: {e}")))?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn write_csv_path<P: AsRef<Path>>(&self, path: P) -> Result<()> {
        self.write_csv(std::fs::File::create(path)?)
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("in-memory write cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }
}

/// Parses a CSV byte stream into a [`Dataset`].
///
/// The first record is a header of unique column names; every later cell must
/// parse as a finite decimal number. Row and column indices in errors are
/// 1-based; row 1 is the first data row.
pub fn load_csv<R: Read>(source: R) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let headers = reader
        .headers()
        .map_err(|e| Error::Dimension(format!("csv header: {e}")))?
        .clone();
    let names: Vec<String> = headers.iter().map(str::to_string).collect();
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(Error::DuplicateHeader(name.clone()));
        }
    }
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (r, record) in reader.records().enumerate() {
        let record = record.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths {
                expected_len, len, ..
            } => Error::Dimension(format!(
                "row {}: {len} fields, expected {expected_len}",
                r + 1
            )),
            _ => Error::Dimension(format!("csv read: {e}")),
        })?;
        for (c, cell) in record.iter().enumerate() {
            if cell.trim().is_empty() {
                return Err(Error::MissingValue {
                    row: r + 1,
                    col: c + 1,
                });
            }
            let value: f64 = cell.trim().parse().map_err(|_| Error::ParseError {
                row: r + 1,
                col: c + 1,
                text: cell.to_string(),
            })?;
            if !value.is_finite() {
                return Err(Error::MissingValue {
                    row: r + 1,
                    col: c + 1,
                });
            }
            columns[c].push(value);
        }
    }
    Dataset::new(names, columns)
}

pub fn load_csv_path<P: AsRef<Path>>(path: P) -> Result<Dataset> {
    load_csv(std::fs::File::open(path)?)
}

/// Per-column location and spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnSummary {
    pub mean: f64,
    /// Unbiased variance, divisor n-1.
    pub variance: f64,
    pub sd: f64,
}

/// Mean, unbiased variance, and standard deviation of one column.
pub fn column_summary(d: &Dataset, name: &str) -> Result<ColumnSummary> {
    let col = d.column(name)?;
    let n = col.len();
    if n < 2 {
        return Err(Error::InsufficientRows(n));
    }
    let mean = col.iter().sum::<f64>() / n as f64;
    let variance = col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    Ok(ColumnSummary {
        mean,
        variance,
        sd: variance.sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn loads_two_by_two() {
        let d = load_csv("Y,X1\n1.0,2.0\n3.0,4.0".as_bytes()).unwrap();
        assert_eq!(d.column_names(), ["Y", "X1"]);
        assert_eq!(d.n(), 2);
        assert_eq!(d.column("Y").unwrap(), [1.0, 3.0]);
        assert_eq!(d.column("X1").unwrap(), [2.0, 4.0]);
    }

    #[test]
    fn duplicate_header_rejected() {
        let err = load_csv("Y,Y\n1.0,2.0".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::DuplicateHeader(name) if name == "Y"));
    }

    #[test]
    fn nan_cell_is_missing() {
        let err = load_csv("Y,X1\n1.0,2.0\n3.0,NaN".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 2, col: 2 }));
    }

    #[test]
    fn empty_cell_is_missing() {
        let err = load_csv("Y,X1\n1.0,\n3.0,4.0".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 1, col: 2 }));
    }

    #[test]
    fn junk_cell_is_parse_error() {
        let err = load_csv("Y\nok".as_bytes()).unwrap_err();
        match err {
            Error::ParseError {
                row: 1,
                col: 1,
                text,
            } => assert_eq!(text, "ok"),
            other => panic!("expected ParseError, got {other:?}"),
        }
    }

    #[test]
    fn ragged_row_rejected() {
        assert!(load_csv("Y,X1\n1.0,2.0\n3.0".as_bytes()).is_err());
    }

    #[test]
    fn trailing_newline_is_optional() {
        let with = load_csv("Y\n1.5\n".as_bytes()).unwrap();
        let without = load_csv("Y\n1.5".as_bytes()).unwrap();
        assert_eq!(with, without);
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let tricky = vec![
            0.1,
            0.1 + 0.2,
            1.0 / 3.0,
            -0.0,
            f64::MIN_POSITIVE,
            1.0e-300,
            98765.4321e10,
            2.0_f64.powi(-40),
        ];
        let other: Vec<f64> = tricky.iter().map(|v| v * 7.0_f64.sqrt()).collect();
        let d = Dataset::new(vec!["a".into(), "b".into()], vec![tricky, other]).unwrap();
        let back = load_csv(d.to_csv_string().as_bytes()).unwrap();
        assert_eq!(back.column_names(), d.column_names());
        for name in ["a", "b"] {
            let orig = d.column(name).unwrap();
            let echo = back.column(name).unwrap();
            for (x, y) in orig.iter().zip(echo) {
                assert_eq!(x.to_bits(), y.to_bits(), "{x} reloaded as {y}");
            }
        }
    }

    #[test]
    fn summary_of_constant_column() {
        let d = Dataset::new(vec!["c".into()], vec![vec![5.0, 5.0, 5.0]]).unwrap();
        let s = column_summary(&d, "c").unwrap();
        assert_eq!(s.mean, 5.0);
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.sd, 0.0);
    }

    #[test]
    fn summary_uses_unbiased_divisor() {
        // [0,2]: mean 1, variance ((0-1)^2+(2-1)^2)/1 = 2
        let d = Dataset::new(vec!["c".into()], vec![vec![0.0, 2.0]]).unwrap();
        let s = column_summary(&d, "c").unwrap();
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.variance, 2.0);
        assert_relative_eq!(s.sd, std::f64::consts::SQRT_2, max_relative = 1e-15);
    }

    #[test]
    fn summary_of_unknown_column() {
        let d = Dataset::new(vec!["c".into()], vec![vec![1.0, 2.0]]).unwrap();
        assert!(matches!(
            column_summary(&d, "zz"),
            Err(Error::UnknownColumn(name)) if name == "zz"
        ));
    }

    #[test]
    fn centered_column_has_near_zero_mean() {
        let raw = [3.25, -1.5, 0.75, 9.0, 2.125];
        let mean = raw.iter().sum::<f64>() / raw.len() as f64;
        let centered: Vec<f64> = raw.iter().map(|v| v - mean).collect();
        let d = Dataset::new(vec!["c".into()], vec![centered]).unwrap();
        let s = column_summary(&d, "c").unwrap();
        assert!(s.mean.abs() <= 1e-12 * s.sd);
    }

    #[test]
    fn constructor_rejects_nonfinite() {
        let err = Dataset::new(vec!["c".into()], vec![vec![1.0, f64::NAN]]).unwrap_err();
        assert!(matches!(err, Error::MissingValue { row: 2, col: 1 }));
    }

    #[test]
    fn constructor_rejects_length_mismatch() {
        let err = Dataset::new(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 2.0], vec![1.0]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }
}
