//! Raw series, the lagged design matrix and CSV ingestion.
//!
//! Columns of `Z` always come in the order: response lags `1..=p1`, the
//! contemporaneous block `W_t`, then the lagged block `X_{t-1}`.

use std::collections::HashSet;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lag structure of the regression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    /// Autoregressive lags of the response.
    pub p1: usize,
    /// Contemporaneous covariates `W_t`.
    pub p2: usize,
    /// Predictors entering with one lag, `X_{t-1}`.
    pub p3: usize,
    #[serde(default)]
    pub include_intercept: bool,
    /// Overrides the generated column labels. Must have `p` distinct entries.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variable_names: Option<Vec<String>>,
}

impl ModelSpec {
    pub fn new(p1: usize, p2: usize, p3: usize) -> Self {
        ModelSpec {
            p1,
            p2,
            p3,
            include_intercept: false,
            variable_names: None,
        }
    }

    pub fn with_intercept(mut self, include: bool) -> Self {
        self.include_intercept = include;
        self
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        self.variable_names = Some(names);
        self
    }

    /// Total number of regressors.
    pub fn p(&self) -> usize {
        self.p1 + self.p2 + self.p3
    }

    /// Number of leading observations consumed by lags.
    pub fn max_lag(&self) -> usize {
        self.p1.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p() == 0 {
            return Err(Error::InvalidSpec("model has no regressors (p1 + p2 + p3 = 0)".into()));
        }
        if let Some(names) = &self.variable_names {
            if names.len() != self.p() {
                return Err(Error::InvalidSpec(format!(
                    "{} variable names given for p = {}",
                    names.len(),
                    self.p()
                )));
            }
            ensure_distinct(names)?;
        }
        Ok(())
    }
}

fn ensure_distinct(names: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::DuplicateHeader(name.clone()));
        }
    }
    Ok(())
}

/// Unlagged, equally long series: one response plus regressor columns.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeriesTable {
    pub response_name: String,
    pub response: Vec<f64>,
    /// Regressor columns in declared order (the `W` block, then the `X` block).
    pub columns: Vec<(String, Vec<f64>)>,
    /// Optional per-row labels (dates), carried along but never parsed.
    pub labels: Option<Vec<String>>,
}

impl RawSeriesTable {
    pub fn new(
        response_name: impl Into<String>,
        response: Vec<f64>,
        columns: Vec<(String, Vec<f64>)>,
    ) -> Result<Self> {
        let table = RawSeriesTable {
            response_name: response_name.into(),
            response,
            columns,
            labels: None,
        };
        table.validate()?;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.response.len()
    }

    pub fn is_empty(&self) -> bool {
        self.response.is_empty()
    }

    fn validate(&self) -> Result<()> {
        let t = self.response.len();
        let mut names = vec![self.response_name.clone()];
        names.extend(self.columns.iter().map(|(n, _)| n.clone()));
        ensure_distinct(&names)?;
        let all = std::iter::once((&self.response_name, &self.response))
            .chain(self.columns.iter().map(|(n, c)| (n, c)));
        for (name, col) in all {
            if col.len() != t {
                return Err(Error::LengthMismatch {
                    column: name.clone(),
                    expected: t,
                    got: col.len(),
                });
            }
            if let Some(row) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite {
                    column: name.clone(),
                    row: row + 1,
                });
            }
        }
        if let Some(labels) = &self.labels {
            if labels.len() != t {
                return Err(Error::LengthMismatch {
                    column: "<labels>".into(),
                    expected: t,
                    got: labels.len(),
                });
            }
        }
        Ok(())
    }
}

/// Means removed from the response and design when an intercept is requested.
#[derive(Debug, Clone, PartialEq)]
pub struct Centering {
    pub y_mean: f64,
    pub z_means: Vec<f64>,
}

impl Centering {
    /// Intercept implied by slope coefficients fitted on centered data.
    pub fn intercept(&self, theta: &DVector<f64>) -> f64 {
        self.y_mean - self.z_means.iter().zip(theta.iter()).map(|(m, b)| m * b).sum::<f64>()
    }
}

/// Response `Y` and design `Z` of the effective sample.
#[derive(Debug, Clone)]
pub struct TimeSeriesDataset {
    pub y: DVector<f64>,
    pub z: DMatrix<f64>,
    pub names: Vec<String>,
    /// Where the data came from (file path, or DGP preset and seed).
    pub origin: String,
    pub centering: Option<Centering>,
}

impl TimeSeriesDataset {
    pub fn from_parts(
        y: DVector<f64>,
        z: DMatrix<f64>,
        names: Vec<String>,
        origin: impl Into<String>,
    ) -> Result<Self> {
        let n = y.len();
        if z.nrows() != n {
            return Err(Error::LengthMismatch {
                column: "Z".into(),
                expected: n,
                got: z.nrows(),
            });
        }
        if names.len() != z.ncols() {
            return Err(Error::InvalidSpec(format!(
                "{} names for {} columns",
                names.len(),
                z.ncols()
            )));
        }
        ensure_distinct(&names)?;
        if z.ncols() == 0 {
            return Err(Error::InvalidSpec("empty design".into()));
        }
        if n <= z.ncols() {
            return Err(Error::TooShort {
                needed: z.ncols() + 1,
                got: n,
            });
        }
        if y.iter().chain(z.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                column: "<design>".into(),
                row: 0,
            });
        }
        Ok(TimeSeriesDataset {
            y,
            z,
            names,
            origin: origin.into(),
            centering: None,
        })
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn p(&self) -> usize {
        self.z.ncols()
    }

    /// Same data with every column of `Z` divided by its root mean square.
    /// Returns the scales so coefficients can be mapped back
    /// (`theta_original = theta_scaled / scale`).
    pub fn standardized(&self) -> (TimeSeriesDataset, Vec<f64>) {
        let n = self.n() as f64;
        let scales: Vec<f64> = self
            .z
            .column_iter()
            .map(|c| {
                let s = (c.norm_squared() / n).sqrt();
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        let mut z = self.z.clone();
        for (j, s) in scales.iter().enumerate() {
            z.column_mut(j).unscale_mut(*s);
        }
        let data = TimeSeriesDataset {
            z,
            ..self.clone()
        };
        (data, scales)
    }

    /// Subtracts column means from `Y` and `Z`, remembering them.
    pub fn centered(&self) -> TimeSeriesDataset {
        let n = self.n() as f64;
        let y_mean = self.y.sum() / n;
        let z_means: Vec<f64> = self.z.column_iter().map(|c| c.sum() / n).collect();
        let y = self.y.map(|v| v - y_mean);
        let mut z = self.z.clone();
        for (j, m) in z_means.iter().enumerate() {
            z.column_mut(j).add_scalar_mut(-m);
        }
        TimeSeriesDataset {
            y,
            z,
            names: self.names.clone(),
            origin: self.origin.clone(),
            centering: Some(Centering { y_mean, z_means }),
        }
    }
}

fn default_names(raw: &RawSeriesTable, spec: &ModelSpec) -> Vec<String> {
    let mut names: Vec<String> = (1..=spec.p1)
        .map(|k| format!("{}_lag{k}", raw.response_name))
        .collect();
    names.extend(raw.columns[..spec.p2].iter().map(|(n, _)| n.clone()));
    names.extend(
        raw.columns[spec.p2..spec.p2 + spec.p3]
            .iter()
            .map(|(n, _)| format!("{n}_lag1")),
    );
    names
}

/// Builds `Z_t = (Y_{t-1}, ..., Y_{t-p1}, W_t', X_{t-1}')'` for every usable `t`.
///
/// The first `max(p1, 1)` observations only serve as lags, so the effective
/// sample has `n = T - max(p1, 1)` rows.
pub fn build_design(raw: &RawSeriesTable, spec: &ModelSpec) -> Result<TimeSeriesDataset> {
    spec.validate()?;
    raw.validate()?;
    if raw.columns.len() != spec.p2 + spec.p3 {
        return Err(Error::InvalidSpec(format!(
            "table has {} regressor columns, model expects p2 + p3 = {}",
            raw.columns.len(),
            spec.p2 + spec.p3
        )));
    }
    let t_len = raw.len();
    let lag = spec.max_lag();
    let p = spec.p();
    if t_len < lag + p + 1 || t_len <= lag + 1 {
        return Err(Error::TooShort {
            needed: (lag + p + 1).max(lag + 2),
            got: t_len,
        });
    }
    let n = t_len - lag;
    let (w_cols, x_cols) = raw.columns.split_at(spec.p2);
    let y = DVector::from_iterator(n, raw.response[lag..].iter().copied());
    let z = DMatrix::from_fn(n, p, |row, j| {
        let t = row + lag;
        if j < spec.p1 {
            raw.response[t - 1 - j]
        } else if j < spec.p1 + spec.p2 {
            w_cols[j - spec.p1].1[t]
        } else {
            x_cols[j - spec.p1 - spec.p2].1[t - 1]
        }
    });
    let names = spec
        .variable_names
        .clone()
        .unwrap_or_else(|| default_names(raw, spec));
    let data = TimeSeriesDataset::from_parts(y, z, names, "")?;
    Ok(if spec.include_intercept {
        data.centered()
    } else {
        data
    })
}

/// Which CSV columns to read.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ColumnMapping {
    /// Optional label column (dates); kept verbatim.
    #[serde(default)]
    pub date: Option<String>,
    pub response: String,
    /// Regressor columns in model order (W block then X block). `None`
    /// takes every remaining column in file order.
    #[serde(default)]
    pub regressors: Option<Vec<String>>,
}

/// Reads a comma-separated file with a header row.
pub fn read_csv(path: impl AsRef<Path>, mapping: &ColumnMapping) -> Result<RawSeriesTable> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv_from(file, mapping)
}

pub fn read_csv_from<R: std::io::Read>(reader: R, mapping: &ColumnMapping) -> Result<RawSeriesTable> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    ensure_distinct(&headers)?;
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_owned()))
    };
    let date_idx = mapping.date.as_deref().map(find).transpose()?;
    let resp_idx = find(&mapping.response)?;
    let reg_names: Vec<String> = match &mapping.regressors {
        Some(r) => r.clone(),
        None => headers
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != resp_idx && Some(*i) != date_idx)
            .map(|(_, h)| h.clone())
            .collect(),
    };
    let reg_idx: Vec<usize> = reg_names.iter().map(|n| find(n)).collect::<Result<_>>()?;

    let mut response = Vec::new();
    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); reg_idx.len()];
    let mut labels = date_idx.map(|_| Vec::new());
    for (row, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        // 1-based data row numbering (the header is row 0)
        let row_no = row + 1;
        let cell = |idx: usize| -> Result<f64> {
            let raw = record.get(idx).unwrap_or("");
            raw.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::BadCell {
                    row: row_no,
                    column: headers[idx].clone(),
                    value: raw.to_owned(),
                })
        };
        response.push(cell(resp_idx)?);
        for (col, &idx) in columns.iter_mut().zip(&reg_idx) {
            col.push(cell(idx)?);
        }
        if let (Some(labels), Some(idx)) = (labels.as_mut(), date_idx) {
            labels.push(record.get(idx).unwrap_or("").to_owned());
        }
    }
    let mut table = RawSeriesTable::new(
        mapping.response.clone(),
        response,
        reg_names.into_iter().zip(columns).collect(),
    )?;
    table.labels = labels;
    Ok(table)
}

/// Writes the table back as CSV with 17 significant digits, which
/// reproduces every finite double exactly on re-reading.
pub fn write_csv(table: &RawSeriesTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(table, file)
}

pub fn write_csv_to<W: std::io::Write>(table: &RawSeriesTable, writer: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    let mut header = Vec::new();
    if table.labels.is_some() {
        header.push("date".to_owned());
    }
    header.push(table.response_name.clone());
    header.extend(table.columns.iter().map(|(n, _)| n.clone()));
    wtr.write_record(&header).map_err(csv_err)?;
    for t in 0..table.len() {
        let mut rec = Vec::with_capacity(header.len());
        if let Some(labels) = &table.labels {
            rec.push(labels[t].clone());
        }
        rec.push(format!("{:.16e}", table.response[t]));
        rec.extend(table.columns.iter().map(|(_, c)| format!("{:.16e}", c[t])));
        wtr.write_record(&rec).map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(y: Vec<f64>, cols: Vec<(&str, Vec<f64>)>) -> RawSeriesTable {
        RawSeriesTable::new(
            "y",
            y,
            cols.into_iter().map(|(n, c)| (n.to_owned(), c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn single_lag_shift() {
        let raw = table(vec![1., 2., 3., 4.], vec![]);
        let d = build_design(&raw, &ModelSpec::new(1, 0, 0)).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.z.column(0).as_slice(), &[1., 2., 3.]);
        assert_eq!(d.y.as_slice(), &[2., 3., 4.]);
        assert_eq!(d.names, vec!["y_lag1"]);
    }

    #[test]
    fn two_lags_start_at_third_observation() {
        let y: Vec<f64> = (1..=8).map(|v| v as f64 * 10.0).collect();
        let d = build_design(&table(y, vec![]), &ModelSpec::new(2, 0, 0)).unwrap();
        assert_eq!(d.n(), 6);
        assert_eq!(d.y[0], 30.0);
        assert_eq!((d.z[(0, 0)], d.z[(0, 1)]), (20.0, 10.0));
    }

    #[test]
    fn lagged_predictor_alignment_by_hand() {
        // T = 5: y = 1..5, w = 11..15, x = 21..25, p1 = 1, p2 = 1, p3 = 1.
        // Usable t = 2..5 (1-based); rows (y_{t-1}, w_t, x_{t-1}):
        //   t=2: (1, 12, 21)   t=3: (2, 13, 22)
        //   t=4: (3, 14, 23)   t=5: (4, 15, 24)
        let raw = table(
            vec![1., 2., 3., 4., 5.],
            vec![("w", vec![11., 12., 13., 14., 15.]), ("x", vec![21., 22., 23., 24., 25.])],
        );
        let d = build_design(&raw, &ModelSpec::new(1, 1, 1)).unwrap();
        let expected = [[1., 12., 21.], [2., 13., 22.], [3., 14., 23.], [4., 15., 24.]];
        assert_eq!(d.n(), 4);
        for (r, row) in expected.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert_eq!(d.z[(r, j)], *v, "row {r} col {j}");
            }
        }
        assert_eq!(d.y.as_slice(), &[2., 3., 4., 5.]);
        assert_eq!(d.names, vec!["y_lag1", "w", "x_lag1"]);
    }

    #[test]
    fn x_only_model_uses_one_leading_observation() {
        let raw = table(vec![1., 2., 3., 4., 5.], vec![("x", vec![21., 22., 23., 24., 25.])]);
        let d = build_design(&raw, &ModelSpec::new(0, 0, 1)).unwrap();
        assert_eq!(d.z.column(0).as_slice(), &[21., 22., 23., 24.]);
        assert_eq!(d.y.as_slice(), &[2., 3., 4., 5.]);
    }

    #[test]
    fn rejects_bad_input() {
        let err = RawSeriesTable::new("y", vec![1., 2.], vec![("x".into(), vec![1.])]).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
        let err = RawSeriesTable::new("y", vec![1., f64::NAN], vec![]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { row: 2, .. }));
        let short = table(vec![1., 2.], vec![]);
        assert!(matches!(
            build_design(&short, &ModelSpec::new(1, 0, 0)),
            Err(Error::TooShort { .. })
        ));
        let raw = table(vec![1., 2., 3., 4.], vec![]);
        assert!(matches!(
            build_design(&raw, &ModelSpec::new(0, 0, 0)),
            Err(Error::InvalidSpec(_))
        ));
        assert!(matches!(
            build_design(&raw, &ModelSpec::new(1, 1, 0)),
            Err(Error::InvalidSpec(_))
        ));
    }

    #[test]
    fn duplicate_names_rejected() {
        let raw = table(vec![1., 2., 3., 4., 5.], vec![("w", vec![0.; 5])]);
        let spec = ModelSpec::new(1, 1, 0).with_names(vec!["a".into(), "a".into()]);
        assert!(matches!(build_design(&raw, &spec), Err(Error::DuplicateHeader(_))));
    }

    #[test]
    fn intercept_centers_and_recovers() {
        let raw = table(
            vec![1., 3., 2., 5., 4., 6., 8.],
            vec![("w", vec![2., 1., 4., 3., 6., 5., 9.])],
        );
        let d = build_design(&raw, &ModelSpec::new(0, 1, 0).with_intercept(true)).unwrap();
        assert!(d.y.sum().abs() < 1e-12);
        assert!(d.z.column(0).sum().abs() < 1e-12);
        let c = d.centering.as_ref().unwrap();
        let theta = DVector::from_vec(vec![0.5]);
        assert!((c.intercept(&theta) - (c.y_mean - 0.5 * c.z_means[0])).abs() < 1e-15);
    }

    #[test]
    fn csv_date_and_rate() {
        let text = "date,rate\n2000-01,1.5\n2000-02,1.25\n2000-03,2\n";
        let map = ColumnMapping {
            date: Some("date".into()),
            response: "rate".into(),
            regressors: None,
        };
        let t = read_csv_from(text.as_bytes(), &map).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.columns.is_empty());
        assert_eq!(t.response, vec![1.5, 1.25, 2.0]);
        assert_eq!(t.labels.unwrap()[2], "2000-03");
    }

    #[test]
    fn csv_blank_cell_names_row_and_column() {
        let text = "y,a,b\n1,2,3\n4,,6\n";
        let map = ColumnMapping {
            response: "y".into(),
            ..Default::default()
        };
        match read_csv_from(text.as_bytes(), &map).unwrap_err() {
            Error::BadCell { row, column, .. } => {
                assert_eq!(row, 2);
                assert_eq!(column, "a");
            }
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn csv_missing_and_duplicate_columns() {
        let map = ColumnMapping {
            response: "y".into(),
            regressors: Some(vec!["nope".into()]),
            ..Default::default()
        };
        assert!(matches!(
            read_csv_from("y,a\n1,2\n".as_bytes(), &map),
            Err(Error::MissingColumn(c)) if c == "nope"
        ));
        let map = ColumnMapping {
            response: "y".into(),
            ..Default::default()
        };
        assert!(matches!(
            read_csv_from("y,a,a\n1,2,3\n".as_bytes(), &map),
            Err(Error::DuplicateHeader(_))
        ));
    }
}
