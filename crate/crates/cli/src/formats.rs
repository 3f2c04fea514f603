//! On-disk formats.
//!
//! Signals are CSV with header `index,re,im` (1D) or `k,t,re,im` (2D, row-major).
//! Models and filters are JSON with complex numbers as `{"re": .., "im": ..}`
//! objects. Floats are written in shortest round-trip form, so a file read back
//! and re-written is byte-identical.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use arspec_core::ar1d::ArModel1D;
use arspec_core::ar2d::{ArModel2D, QuarterPlaneFilter};
use arspec_core::spectrum::SpectrumGrid;
use arspec_core::{ComplexMatrix, ComplexSignal1D, Signal2D, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SIGNAL_1D_HEADER: [&str; 3] = ["index", "re", "im"];
pub const SIGNAL_2D_HEADER: [&str; 4] = ["k", "t", "re", "im"];

pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        ryu::Buffer::new().format_finite(v).to_string()
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(|e| csv_error(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::input(path, format!("{other:?}")),
    }
}

/// Writes a CSV with `header` and pre-formatted rows.
pub fn write_csv(path: &Path, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

fn read_records(path: &Path, header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let got = r.headers().map_err(|e| csv_error(path, e))?.clone();
    if got.iter().ne(header.iter().copied()) {
        return Err(CliError::input(
            path,
            format!("expected header {:?}, found {:?}", header.join(","), got.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    r.records()
        .map(|rec| rec.map_err(|e| csv_error(path, e)))
        .collect()
}

fn field<T: std::str::FromStr>(path: &Path, rec: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    let line = rec.position().map_or(0, |p| p.line());
    rec.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::input(path, format!("line {line}: bad {name} value {:?}", rec.get(i).unwrap_or(""))))
}

pub fn write_signal_1d(path: &Path, x: &ComplexSignal1D) -> Result<()> {
    let header: Vec<String> = SIGNAL_1D_HEADER.iter().map(|s| s.to_string()).collect();
    let rows = x
        .samples()
        .iter()
        .enumerate()
        .map(|(k, v)| vec![k.to_string(), fmt_f64(v.re), fmt_f64(v.im)]);
    write_csv(path, &header, rows)
}

pub fn read_signal_1d(path: &Path) -> Result<ComplexSignal1D> {
    let records = read_records(path, &SIGNAL_1D_HEADER)?;
    let mut samples = Vec::with_capacity(records.len());
    for (expect, rec) in records.iter().enumerate() {
        let index: usize = field(path, rec, 0, "index")?;
        if index != expect {
            return Err(CliError::input(path, format!("index {index} out of sequence, expected {expect}")));
        }
        samples.push(C64::new(field(path, rec, 1, "re")?, field(path, rec, 2, "im")?));
    }
    ComplexSignal1D::new(samples).map_err(|e| CliError::input(path, e))
}

pub fn write_signal_2d(path: &Path, x: &Signal2D) -> Result<()> {
    let header: Vec<String> = SIGNAL_2D_HEADER.iter().map(|s| s.to_string()).collect();
    let cols = x.cols();
    let rows = x.samples().iter().enumerate().map(|(i, v)| {
        vec![
            (i / cols).to_string(),
            (i % cols).to_string(),
            fmt_f64(v.re),
            fmt_f64(v.im),
        ]
    });
    write_csv(path, &header, rows)
}

/// Reads a grid in any row order; every `(k, t)` cell must appear exactly once.
pub fn read_signal_2d(path: &Path) -> Result<Signal2D> {
    let records = read_records(path, &SIGNAL_2D_HEADER)?;
    let mut cells = Vec::with_capacity(records.len());
    for rec in &records {
        let k: usize = field(path, rec, 0, "k")?;
        let t: usize = field(path, rec, 1, "t")?;
        cells.push((k, t, C64::new(field(path, rec, 2, "re")?, field(path, rec, 3, "im")?)));
    }
    let rows = cells.iter().map(|c| c.0 + 1).max().unwrap_or(0);
    let cols = cells.iter().map(|c| c.1 + 1).max().unwrap_or(0);
    if rows * cols != cells.len() {
        return Err(CliError::input(
            path,
            format!("{} cells do not fill a {rows}x{cols} grid", cells.len()),
        ));
    }
    let mut samples = vec![None; rows * cols];
    for (k, t, v) in cells {
        let slot = &mut samples[k * cols + t];
        if slot.is_some() {
            return Err(CliError::input(path, format!("duplicate cell ({k}, {t})")));
        }
        *slot = Some(v);
    }
    let samples = samples.into_iter().map(|v| v.expect("grid filled")).collect();
    Signal2D::new(rows, cols, samples).map_err(|e| CliError::input(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for Cx {
    fn from(v: C64) -> Self {
        Cx { re: v.re, im: v.im }
    }
}

impl From<Cx> for C64 {
    fn from(v: Cx) -> Self {
        C64::new(v.re, v.im)
    }
}

fn cx_vec(v: &[C64]) -> Vec<Cx> {
    v.iter().map(|&z| z.into()).collect()
}

fn c64_vec(v: &[Cx]) -> Vec<C64> {
    v.iter().map(|&z| z.into()).collect()
}

/// Row-major nested rows.
pub type MatrixJson = Vec<Vec<Cx>>;

pub fn matrix_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| cx_vec(m.row(i))).collect()
}

pub fn matrix_from_json(path: &Path, m: &MatrixJson) -> Result<ComplexMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    if rows == 0 || m.iter().any(|r| r.len() != cols) {
        return Err(CliError::input(path, "matrix rows are empty or ragged"));
    }
    let data = m.iter().flat_map(|r| c64_vec(r)).collect();
    ComplexMatrix::from_row_major(rows, cols, data).map_err(|e| CliError::input(path, e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage1DJson {
    pub order: usize,
    pub reflection: Cx,
    /// Unnormalized prediction error power after this stage.
    pub error_power: f64,
    pub coefficients: Vec<Cx>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model1DJson {
    pub method: String,
    pub requested_order: usize,
    pub order: usize,
    pub truncated: bool,
    pub samples: usize,
    pub normalization: f64,
    pub error_power: f64,
    pub innovation_variance: f64,
    /// `a_1..a_n` of `x(k) + Σ a_l x(k-l) = w(k)`.
    pub coefficients: Vec<Cx>,
    pub stages: Vec<Stage1DJson>,
}

impl Model1DJson {
    pub fn new(method: &str, samples: usize, m: &ArModel1D) -> Self {
        Model1DJson {
            method: method.to_string(),
            requested_order: m.requested_order,
            order: m.order(),
            truncated: m.truncated(),
            samples,
            normalization: m.normalization,
            error_power: m.error_power,
            innovation_variance: m.innovation_variance(),
            coefficients: cx_vec(&m.coefficients),
            stages: m
                .stages
                .iter()
                .enumerate()
                .map(|(i, s)| Stage1DJson {
                    order: i + 1,
                    reflection: s.reflection.into(),
                    error_power: s.error_power,
                    coefficients: cx_vec(&s.coefficients),
                })
                .collect(),
        }
    }

    pub fn to_model(&self) -> ArModel1D {
        ArModel1D::from_coefficients(c64_vec(&self.coefficients), self.error_power, self.normalization)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage2DJson {
    pub order: usize,
    pub reflection: MatrixJson,
    pub forward_power: MatrixJson,
    pub backward_power: MatrixJson,
    pub trace_criterion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Model2DJson {
    pub method: String,
    pub n1: usize,
    pub n2: usize,
    pub rows: usize,
    pub cols: usize,
    pub normalization: f64,
    /// `A_1..A_{n1}`, each `(n2+1) × (n2+1)`.
    pub coefficients: Vec<MatrixJson>,
    pub forward_power: MatrixJson,
    pub backward_power: MatrixJson,
    pub stages: Vec<Stage2DJson>,
}

impl Model2DJson {
    pub fn new(method: &str, x: &Signal2D, m: &ArModel2D) -> Self {
        Model2DJson {
            method: method.to_string(),
            n1: m.order(),
            n2: m.channel_order,
            rows: x.rows(),
            cols: x.cols(),
            normalization: m.normalization,
            coefficients: m.coefficients.iter().map(matrix_json).collect(),
            forward_power: matrix_json(&m.forward_power),
            backward_power: matrix_json(&m.backward_power),
            stages: m
                .stages
                .iter()
                .enumerate()
                .map(|(i, s)| Stage2DJson {
                    order: i + 1,
                    reflection: matrix_json(&s.reflection),
                    forward_power: matrix_json(&s.forward_power),
                    backward_power: matrix_json(&s.backward_power),
                    trace_criterion: s.trace_criterion,
                })
                .collect(),
        }
    }

    /// The quarter-plane filter implied by the stored coefficients.
    pub fn to_filter(&self, path: &Path) -> Result<QuarterPlaneFilter> {
        let channels = self.n2 + 1;
        let a = self
            .coefficients
            .iter()
            .map(|m| matrix_from_json(path, m))
            .collect::<Result<Vec<_>>>()?;
        if a.iter().any(|m| m.shape() != (channels, channels)) {
            return Err(CliError::input(path, "coefficient matrices do not match n2"));
        }
        let pf = matrix_from_json(path, &self.forward_power)?;
        let coefficients = ComplexMatrix::from_fn(a.len() + 1, channels, |l1, l2| match (l1, l2) {
            (0, 0) => C64::new(1.0, 0.0),
            (0, _) => C64::new(0.0, 0.0),
            _ => a[l1 - 1][(0, l2)],
        });
        Ok(QuarterPlaneFilter {
            coefficients,
            variance: pf[(0, 0)].re / self.normalization,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterJson {
    pub method: String,
    pub n1: usize,
    pub n2: usize,
    pub variance: f64,
    /// `c(l1, l2)` rows `l1 = 0..=n1`, columns `l2 = 0..=n2`.
    pub coefficients: MatrixJson,
}

impl FilterJson {
    pub fn new(method: &str, f: &QuarterPlaneFilter) -> Self {
        let (n1, n2) = f.order();
        FilterJson {
            method: method.to_string(),
            n1,
            n2,
            variance: f.variance,
            coefficients: matrix_json(&f.coefficients),
        }
    }

    pub fn to_filter(&self, path: &Path) -> Result<QuarterPlaneFilter> {
        let coefficients = matrix_from_json(path, &self.coefficients)?;
        if coefficients.shape() != (self.n1 + 1, self.n2 + 1) {
            return Err(CliError::input(path, "coefficient grid does not match n1, n2"));
        }
        Ok(QuarterPlaneFilter {
            coefficients,
            variance: self.variance,
        })
    }
}

/// Any JSON document `spectrum` accepts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelFile {
    Ar1d(Model1DJson),
    Ar2d(Model2DJson),
    QuarterPlaneFilter(FilterJson),
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| CliError::io(path, e.into()))?;
    w.write_all(b"\n").map_err(|e| CliError::io(path, e))?;
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_reader(std::io::BufReader::new(file)).map_err(|e| CliError::input(path, e))
}

pub fn write_spectrum(path: &Path, s: &SpectrumGrid) -> Result<()> {
    let logs = s.log10_power();
    if s.is_2d() {
        let header = ["f1", "f2", "power", "log10_power"].map(String::from);
        let n2 = s.frequencies2.len();
        let rows = s.power.iter().zip(&logs).enumerate().map(|(i, (p, l))| {
            vec![
                fmt_f64(s.frequencies[i / n2]),
                fmt_f64(s.frequencies2[i % n2]),
                fmt_f64(*p),
                fmt_f64(*l),
            ]
        });
        write_csv(path, &header, rows)
    } else {
        let header = ["frequency", "power", "log10_power"].map(String::from);
        let rows = s
            .frequencies
            .iter()
            .zip(s.power.iter().zip(&logs))
            .map(|(f, (p, l))| vec![fmt_f64(*f), fmt_f64(*p), fmt_f64(*l)]);
        write_csv(path, &header, rows)
    }
}
