//! Numeric table ingestion and column standardization.
//!
//! A [`DataMatrix`] holds `N` observations of `n` real-valued features in
//! row-major order, together with column names and optional per-row labels
//! and class tags. Label and class columns never enter `values`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("row {row}, column '{column}': cannot parse '{value}' as a number")]
    NonNumeric { row: usize, column: String, value: String },
    #[error("row {row}, column '{column}': value is not finite")]
    NonFinite { row: usize, column: String },
    #[error("row {row} has {found} fields, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("column '{0}' not found in header")]
    MissingColumn(String),
    #[error("data has no rows")]
    NoRows,
    #[error("data has no numeric columns")]
    NoColumns,
    #[error("standardization needs at least 2 rows, got {0}")]
    TooFewRows(usize),
    #[error("invalid data matrix: {0}")]
    Invalid(String),
}

/// `N x n` matrix of finite reals with column metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
    column_names: Vec<String>,
    row_labels: Option<Vec<String>>,
    class_labels: Option<Vec<String>>,
}

impl DataMatrix {
    /// Builds a matrix from rows, checking shape and finiteness.
    pub fn from_rows(rows: Vec<Vec<f64>>, column_names: Vec<String>) -> Result<Self, DatasetError> {
        let n_cols = column_names.len();
        if rows.is_empty() {
            return Err(DatasetError::NoRows);
        }
        if n_cols == 0 {
            return Err(DatasetError::NoColumns);
        }
        let n_rows = rows.len();
        let mut values = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(DatasetError::Ragged {
                    row: i + 1,
                    expected: n_cols,
                    found: row.len(),
                });
            }
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(DatasetError::NonFinite {
                        row: i + 1,
                        column: column_names[j].clone(),
                    });
                }
            }
            values.extend(row);
        }
        Ok(Self {
            n_rows,
            n_cols,
            values,
            column_names,
            row_labels: None,
            class_labels: None,
        })
    }

    /// Builds a matrix from rows with generated column names `x1..xn`.
    pub fn from_unnamed_rows(rows: Vec<Vec<f64>>) -> Result<Self, DatasetError> {
        let n = rows.first().map_or(0, Vec::len);
        let names = (1..=n).map(|j| format!("x{j}")).collect();
        Self::from_rows(rows, names)
    }

    pub fn with_row_labels(mut self, labels: Vec<String>) -> Result<Self, DatasetError> {
        if labels.len() != self.n_rows {
            return Err(DatasetError::Invalid(format!(
                "{} row labels for {} rows",
                labels.len(),
                self.n_rows
            )));
        }
        self.row_labels = Some(labels);
        Ok(self)
    }

    pub fn with_class_labels(mut self, labels: Vec<String>) -> Result<Self, DatasetError> {
        if labels.len() != self.n_rows {
            return Err(DatasetError::Invalid(format!(
                "{} class labels for {} rows",
                labels.len(),
                self.n_rows
            )));
        }
        self.class_labels = Some(labels);
        Ok(self)
    }

    /// Re-checks every invariant; used after deserialization.
    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.n_rows == 0 {
            return Err(DatasetError::NoRows);
        }
        if self.n_cols == 0 {
            return Err(DatasetError::NoColumns);
        }
        if self.values.len() != self.n_rows * self.n_cols || self.column_names.len() != self.n_cols {
            return Err(DatasetError::Invalid("shape does not match values".into()));
        }
        if let Some(pos) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(DatasetError::NonFinite {
                row: pos / self.n_cols + 1,
                column: self.column_names[pos % self.n_cols].clone(),
            });
        }
        for labels in [&self.row_labels, &self.class_labels].into_iter().flatten() {
            if labels.len() != self.n_rows {
                return Err(DatasetError::Invalid("label count does not match rows".into()));
            }
        }
        Ok(())
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.n_cols)
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.rows().map(move |r| r[j])
    }

    /// Row-major values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn class_labels(&self) -> Option<&[String]> {
        self.class_labels.as_deref()
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self { values, ..self.clone() }
    }
}

/// Per-column mean and sample standard deviation.
///
/// A standard deviation of exactly zero marks a constant column, which is
/// centered but not rescaled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationParams {
    pub means: Vec<f64>,
    pub stddevs: Vec<f64>,
}

impl StandardizationParams {
    pub fn constant_columns(&self) -> Vec<usize> {
        self.stddevs
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == 0.0)
            .map(|(j, _)| j)
            .collect()
    }

    /// Maps standardized values back to the original scale.
    pub fn inverse(&self, data: &DataMatrix) -> Result<DataMatrix, DatasetError> {
        if data.n_cols() != self.means.len() {
            return Err(DatasetError::Invalid(format!(
                "{} columns, parameters for {}",
                data.n_cols(),
                self.means.len()
            )));
        }
        let values = data
            .rows()
            .flat_map(|row| {
                row.iter()
                    .zip(self.means.iter().zip(&self.stddevs))
                    .map(|(&z, (&m, &s))| if s > 0.0 { z * s + m } else { z + m })
            })
            .collect();
        Ok(data.with_values(values))
    }
}

/// Options for [`load_csv`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CsvOptions {
    pub has_header: bool,
    /// Column holding per-row identifiers.
    pub label_column: Option<String>,
    /// Column holding categorical class tags.
    pub class_column: Option<String>,
}

impl CsvOptions {
    pub fn with_header() -> Self {
        Self {
            has_header: true,
            ..Self::default()
        }
    }
}

/// Reads a comma-separated numeric table.
///
/// Without a header, columns are named `column1`, `column2`, ... and the
/// label/class options refer to those generated names.
pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<DataMatrix, DatasetError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_csv(file, options)
}

/// Same as [`load_csv`] over any reader.
pub fn read_csv(reader: impl Read, options: &CsvOptions) -> Result<DataMatrix, DatasetError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut records = rdr.records();

    let mut header: Option<Vec<String>> = None;
    let mut first_line = 1;
    if options.has_header {
        match records.next() {
            Some(rec) => {
                header = Some(rec?.iter().map(|s| s.trim().to_string()).collect());
                first_line = 2;
            }
            None => return Err(DatasetError::NoRows),
        }
    }

    let mut raw: Vec<csv::StringRecord> = Vec::new();
    for rec in records {
        let rec = rec?;
        if rec.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        raw.push(rec);
    }
    let width = match (&header, raw.first()) {
        (Some(h), _) => h.len(),
        (None, Some(r)) => r.len(),
        (None, None) => return Err(DatasetError::NoRows),
    };
    let header = header.unwrap_or_else(|| (1..=width).map(|j| format!("column{j}")).collect());

    let find = |name: &Option<String>| -> Result<Option<usize>, DatasetError> {
        match name {
            None => Ok(None),
            Some(n) => header
                .iter()
                .position(|h| h == n)
                .map(Some)
                .ok_or_else(|| DatasetError::MissingColumn(n.clone())),
        }
    };
    let label_idx = find(&options.label_column)?;
    let class_idx = find(&options.class_column)?;
    let numeric: Vec<usize> = (0..width)
        .filter(|j| Some(*j) != label_idx && Some(*j) != class_idx)
        .collect();
    let names: Vec<String> = numeric.iter().map(|&j| header[j].clone()).collect();

    let mut rows = Vec::with_capacity(raw.len());
    let mut labels = Vec::new();
    let mut classes = Vec::new();
    for (i, rec) in raw.iter().enumerate() {
        let line = first_line + i;
        if rec.len() != width {
            return Err(DatasetError::Ragged {
                row: line,
                expected: width,
                found: rec.len(),
            });
        }
        let mut row = Vec::with_capacity(numeric.len());
        for &j in &numeric {
            let cell = rec[j].trim();
            let v: f64 = cell.parse().map_err(|_| DatasetError::NonNumeric {
                row: line,
                column: header[j].clone(),
                value: cell.to_string(),
            })?;
            if !v.is_finite() {
                return Err(DatasetError::NonFinite {
                    row: line,
                    column: header[j].clone(),
                });
            }
            row.push(v);
        }
        rows.push(row);
        if let Some(l) = label_idx {
            labels.push(rec[l].trim().to_string());
        }
        if let Some(c) = class_idx {
            classes.push(rec[c].trim().to_string());
        }
    }

    let mut data = DataMatrix::from_rows(rows, names)?;
    if label_idx.is_some() {
        data = data.with_row_labels(labels)?;
    }
    if class_idx.is_some() {
        data = data.with_class_labels(classes)?;
    }
    Ok(data)
}

/// Column name used for row labels by [`write_csv`].
pub const LABEL_COLUMN: &str = "label";
/// Column name used for class tags by [`write_csv`].
pub const CLASS_COLUMN: &str = "class";

/// Writes `data` with a header, in the dialect [`load_csv`] reads.
///
/// Values use the shortest representation that parses back to the same
/// `f64`. Row labels and class tags, when present, are appended as the
/// [`LABEL_COLUMN`] and [`CLASS_COLUMN`] columns.
pub fn write_csv(data: &DataMatrix, writer: impl Write) -> Result<(), DatasetError> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Vec<&str> = data.column_names.iter().map(String::as_str).collect();
    if data.row_labels.is_some() {
        header.push(LABEL_COLUMN);
    }
    if data.class_labels.is_some() {
        header.push(CLASS_COLUMN);
    }
    w.write_record(&header)?;
    for (i, row) in data.rows().enumerate() {
        let mut rec: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        if let Some(l) = &data.row_labels {
            rec.push(l[i].clone());
        }
        if let Some(c) = &data.class_labels {
            rec.push(c[i].clone());
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(|source| DatasetError::Io {
        path: "<writer>".into(),
        source,
    })?;
    Ok(())
}

/// Options that read back what [`write_csv`] produced for `data`.
pub fn roundtrip_options(data: &DataMatrix) -> CsvOptions {
    CsvOptions {
        has_header: true,
        label_column: data.row_labels.as_ref().map(|_| LABEL_COLUMN.to_string()),
        class_column: data.class_labels.as_ref().map(|_| CLASS_COLUMN.to_string()),
    }
}

/// Centers every column and scales it to unit sample variance (`N - 1`
/// denominator). Constant columns are centered only and logged.
pub fn standardize(data: &DataMatrix) -> Result<(DataMatrix, StandardizationParams), DatasetError> {
    let n = data.n_rows();
    if n < 2 {
        return Err(DatasetError::TooFewRows(n));
    }
    let mut means = Vec::with_capacity(data.n_cols());
    let mut stddevs = Vec::with_capacity(data.n_cols());
    for j in 0..data.n_cols() {
        let mean = data.column(j).sum::<f64>() / n as f64;
        let ss: f64 = data.column(j).map(|v| (v - mean) * (v - mean)).sum();
        let sd = (ss / (n - 1) as f64).sqrt();
        // Rounding can leave a tiny spread on columns that are constant.
        let constant = data.column(j).all(|v| v == data.row(0)[j]);
        if constant {
            log::warn!(
                "column '{}' is constant; centered without scaling",
                data.column_names()[j]
            );
        }
        means.push(if constant { data.row(0)[j] } else { mean });
        stddevs.push(if constant { 0.0 } else { sd });
    }
    let values = data
        .rows()
        .flat_map(|row| {
            row.iter()
                .zip(means.iter().zip(&stddevs))
                .map(|(&v, (&m, &s))| if s > 0.0 { (v - m) / s } else { v - m })
        })
        .collect();
    Ok((data.with_values(values), StandardizationParams { means, stddevs }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn csv_of(text: &str, options: &CsvOptions) -> Result<DataMatrix, DatasetError> {
        read_csv(text.as_bytes(), options)
    }

    #[test]
    fn parses_plain_numeric_file() {
        let d = csv_of("1,2\n3,4\n5,6\n", &CsvOptions::default()).unwrap();
        assert_eq!((d.n_rows(), d.n_cols()), (3, 2));
        assert_eq!(d.row(2), &[5.0, 6.0]);
        assert_eq!(d.column_names(), &["column1", "column2"]);
    }

    #[test]
    fn class_and_label_columns_are_excluded_from_values() {
        let text = "name,a,\"b\",kind\nx,1.5,2,foo\ny,3,4e-1,bar\n";
        let opts = CsvOptions {
            has_header: true,
            label_column: Some("name".into()),
            class_column: Some("kind".into()),
        };
        let d = csv_of(text, &opts).unwrap();
        assert_eq!(d.n_cols(), 2);
        assert_eq!(d.column_names(), &["a", "b"]);
        assert_eq!(d.row(1), &[3.0, 0.4]);
        assert_eq!(d.row_labels().unwrap(), &["x", "y"]);
        assert_eq!(d.class_labels().unwrap(), &["foo", "bar"]);
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let err = csv_of("a,b\n1,2\n3,abc\n", &CsvOptions::with_header()).unwrap_err();
        match err {
            DatasetError::NonNumeric { row, column, value } => {
                assert_eq!(row, 3);
                assert_eq!(column, "b");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_are_rejected() {
        let err = csv_of("1,2\n3\n", &CsvOptions::default()).unwrap_err();
        assert!(matches!(
            err,
            DatasetError::Ragged {
                row: 2,
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn non_finite_and_missing_columns_are_rejected() {
        assert!(matches!(
            csv_of("1,NaN\n", &CsvOptions::default()),
            Err(DatasetError::NonFinite { .. })
        ));
        let opts = CsvOptions {
            has_header: true,
            class_column: Some("species".into()),
            ..CsvOptions::default()
        };
        assert!(matches!(
            csv_of("a,b\n1,2\n", &opts),
            Err(DatasetError::MissingColumn(_))
        ));
        assert!(matches!(
            load_csv("/nonexistent/file.csv", &CsvOptions::default()),
            Err(DatasetError::Io { .. })
        ));
    }

    #[test]
    fn standardize_small_column() {
        let d = DataMatrix::from_unnamed_rows(vec![vec![1.0, 5.0], vec![2.0, 5.0], vec![3.0, 5.0]]).unwrap();
        let (z, p) = standardize(&d).unwrap();
        assert_eq!(z.column(0).collect::<Vec<_>>(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(z.column(1).collect::<Vec<_>>(), vec![0.0, 0.0, 0.0]);
        assert_eq!(p.stddevs, vec![1.0, 0.0]);
        assert_eq!(p.constant_columns(), vec![1]);
        let back = p.inverse(&z).unwrap();
        assert_eq!(back.values(), d.values());
    }

    #[test]
    fn standardize_needs_two_rows() {
        let d = DataMatrix::from_unnamed_rows(vec![vec![1.0]]).unwrap();
        assert!(matches!(standardize(&d), Err(DatasetError::TooFewRows(1))));
    }

    #[test]
    fn write_then_read_preserves_everything() {
        let d = DataMatrix::from_rows(
            vec![vec![0.1 + 0.2, -1e-300], vec![std::f64::consts::PI, 12345.678]],
            vec!["p".into(), "q".into()],
        )
        .unwrap()
        .with_class_labels(vec!["a".into(), "b,c".into()])
        .unwrap();
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), &roundtrip_options(&d)).unwrap();
        assert_eq!(back, d);
    }
}
