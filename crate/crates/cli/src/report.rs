//! Report files. Every float is written with 17 significant digits so that
//! parsing a report and serializing it again reproduces the same bytes.

use std::io;

use pertexp::{Complex64, ComplexMatrix, DiagonalMatrix, ExpansionTerms, Slope, SolveReport};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

pub const NORMALIZATION: &str = "W0*V0=I; Diag(W0*Vk)=0 for k>=1";

#[derive(Debug, Clone, Copy, Default)]
pub struct Float17;

impl serde_json::ser::Formatter for Float17 {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Float17);
    value
        .serialize(&mut ser)
        .expect("report types always serialize");
    out.push(b'\n');
    String::from_utf8(out).expect("serde_json emits UTF-8")
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}

pub type Pair = [f64; 2];

fn pair(z: &Complex64) -> Pair {
    [z.re, z.im]
}

fn vector(d: &DiagonalMatrix) -> Vec<Pair> {
    d.iter().map(pair).collect()
}

pub fn matrix(m: &ComplexMatrix) -> Vec<Vec<Pair>> {
    m.row_iter()
        .map(|row| row.iter().map(pair).collect())
        .collect()
}

pub fn to_matrix(rows: &[Vec<Pair>]) -> ComplexMatrix {
    let cols = rows.first().map_or(0, Vec::len);
    ComplexMatrix::from_fn(rows.len(), cols, |r, c| {
        Complex64::new(rows[r][c][0], rows[r][c][1])
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionReport {
    pub order: usize,
    /// `Λ₀ … Λ_K`, diagonal entries as `[re, im]`.
    pub eigenvalues: Vec<Vec<Pair>>,
    #[serde(rename = "V")]
    pub v: Vec<Vec<Vec<Pair>>>,
    #[serde(rename = "W1")]
    pub w1: Vec<Vec<Pair>>,
    pub clusters: Vec<Vec<usize>>,
    pub rotated: Vec<bool>,
    pub normalization: String,
}

impl ExpansionReport {
    pub fn from_terms(terms: &ExpansionTerms) -> Self {
        Self {
            order: terms.order(),
            eigenvalues: terms.lambda.iter().map(vector).collect(),
            v: terms.v.iter().map(matrix).collect(),
            w1: matrix(&terms.w1),
            clusters: terms.base.clusters.clone(),
            rotated: terms.rotated.clone(),
            normalization: NORMALIZATION.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SylvesterReport {
    pub mode: String,
    #[serde(rename = "X")]
    pub x: Vec<Vec<Pair>>,
    pub residual: f64,
    pub solvable: bool,
    pub violated_positions: Vec<[usize; 2]>,
    pub cond: f64,
}

impl SylvesterReport {
    pub fn from_solve(mode: &str, report: &SolveReport) -> Self {
        Self {
            mode: mode.to_string(),
            x: matrix(&report.x),
            residual: report.residual,
            solvable: report.solvable,
            violated_positions: report
                .violated_positions
                .iter()
                .map(|&(i, j)| [i, j])
                .collect(),
            cond: report.cond,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactFlag {
    #[serde(rename = "exact")]
    Exact,
}

/// A fitted slope, or the string `"exact"` when every error is at rounding
/// level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SlopeValue {
    Fitted(f64),
    Flag(ExactFlag),
}

impl From<Slope> for SlopeValue {
    fn from(s: Slope) -> Self {
        match s {
            Slope::Fitted(x) => SlopeValue::Fitted(x),
            Slope::Exact => SlopeValue::Flag(ExactFlag::Exact),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidationFile {
    pub order: usize,
    pub eps_grid: Vec<f64>,
    pub lambda_errors: Vec<f64>,
    pub vector_errors: Vec<f64>,
    pub noise_floor: Vec<f64>,
    pub fitted_slope_lambda: SlopeValue,
    #[serde(rename = "fitted_slope_V")]
    pub fitted_slope_v: SlopeValue,
    pub pass: bool,
}

impl From<&pertexp::ValidationReport> for ValidationFile {
    fn from(r: &pertexp::ValidationReport) -> Self {
        Self {
            order: r.order,
            eps_grid: r.eps_grid.clone(),
            lambda_errors: r.lambda_errors.clone(),
            vector_errors: r.vector_errors.clone(),
            noise_floor: r.noise_floor.clone(),
            fitted_slope_lambda: r.slope_lambda.into(),
            fitted_slope_v: r.slope_vector.into(),
            pass: r.pass,
        }
    }
}

/// Plot-ready error curves: `eps,lambda_error,vector_error`.
pub fn validation_csv(r: &pertexp::ValidationReport) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["eps", "lambda_error", "vector_error"])
        .expect("in-memory CSV");
    for ((e, l), v) in r
        .eps_grid
        .iter()
        .zip(&r.lambda_errors)
        .zip(&r.vector_errors)
    {
        writer
            .write_record([
                format!("{e:.16e}"),
                format!("{l:.16e}"),
                format!("{v:.16e}"),
            ])
            .expect("in-memory CSV");
    }
    String::from_utf8(writer.into_inner().expect("in-memory CSV")).expect("CSV is UTF-8")
}
