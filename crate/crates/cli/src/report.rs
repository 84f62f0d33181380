//! Task reports and their JSON / CSV renderings.
//!
//! JSON keys appear in declaration order and floats are printed with 17
//! significant digits, so identical runs give identical bytes.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::ser::Formatter;

use crate::error::CliError;
use crate::literal::{Entry, SeriesLit};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutatorEntry {
    /// 1-based operator axis.
    pub j: usize,
    /// 1-based partial-derivative axis.
    pub k: usize,
    pub residual: f64,
    pub symbolic_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyCrReport {
    pub task: &'static str,
    pub pass: bool,
    pub probe_degree: usize,
    pub tolerance: f64,
    pub max_residual: f64,
    pub entries: Vec<CommutatorEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelReport {
    pub task: &'static str,
    pub pass: bool,
    pub degree: usize,
    pub tolerance: f64,
    /// `max |T_j f|` on the exact region, per operator.
    pub residuals: Vec<f64>,
    pub generator: SeriesLit,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompleteReport {
    pub task: &'static str,
    pub pass: bool,
    pub mode: &'static str,
    pub rank: usize,
    pub ambient: usize,
    pub complete_at_truncation: bool,
    #[serde(rename = "N")]
    pub n: usize,
    pub max_order: usize,
    pub samples: usize,
    pub tolerance: f64,
    /// Rows come from translates of a truncated non-polynomial generator.
    pub approximate: bool,
    /// Singular values of the row-normalized span matrix.
    pub diagnostics: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproximateReport {
    pub task: &'static str,
    pub pass: bool,
    #[serde(rename = "N")]
    pub n: usize,
    pub max_order: usize,
    pub residual: f64,
    /// `c_n` with `target ≈ sum c_n D^n f`.
    pub coefficients: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FhcReport {
    pub task: &'static str,
    pub pass: bool,
    pub axis: usize,
    pub m: u32,
    pub epsilon: f64,
    pub bound: f64,
    pub u: Vec<f64>,
    pub ratios: Vec<f64>,
    pub kth_roots: Vec<f64>,
    pub partial_sums: Vec<f64>,
    pub cauchy: Vec<f64>,
    pub stable: bool,
    pub realization_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrbitReport {
    pub task: &'static str,
    pub pass: bool,
    pub axis: usize,
    pub steps: usize,
    pub delta: f64,
    pub hits: Vec<usize>,
    pub density_proxy: f64,
    pub label: &'static str,
    pub distances: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    VerifyCr(VerifyCrReport),
    Kernel(KernelReport),
    Complete(CompleteReport),
    Approximate(ApproximateReport),
    Fhc(FhcReport),
    Orbit(OrbitReport),
}

impl Report {
    pub fn task(&self) -> &'static str {
        match self {
            Report::VerifyCr(r) => r.task,
            Report::Kernel(r) => r.task,
            Report::Complete(r) => r.task,
            Report::Approximate(r) => r.task,
            Report::Fhc(r) => r.task,
            Report::Orbit(r) => r.task,
        }
    }

    pub fn passed(&self) -> bool {
        match self {
            Report::VerifyCr(r) => r.pass,
            Report::Kernel(r) => r.pass,
            Report::Complete(r) => r.pass,
            Report::Approximate(r) => r.pass,
            Report::Fhc(r) => r.pass,
            Report::Orbit(r) => r.pass,
        }
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => to_json(self),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_csv(&self) -> Result<String, CliError> {
        let mut out = String::new();
        match self {
            Report::VerifyCr(r) => {
                out.push_str("j,k,residual,symbolic_residual\n");
                for e in &r.entries {
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        e.j,
                        e.k,
                        num(e.residual),
                        num(e.symbolic_residual)
                    ));
                }
            }
            Report::Complete(r) => {
                out.push_str("index,singular_value\n");
                for (i, s) in r.diagnostics.iter().enumerate() {
                    out.push_str(&format!("{},{}\n", i + 1, num(*s)));
                }
            }
            Report::Fhc(r) => {
                out.push_str("k,u_k,ratio\n");
                for (k, u) in r.u.iter().enumerate() {
                    let ratio = if k == 0 {
                        String::new()
                    } else {
                        num(r.ratios[k - 1])
                    };
                    out.push_str(&format!("{k},{},{ratio}\n", num(*u)));
                }
            }
            Report::Kernel(_) | Report::Approximate(_) | Report::Orbit(_) => {
                return Err(CliError::CsvComplex)
            }
        }
        Ok(out)
    }
}

/// A float with 17 significant digits.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(num(value).as_bytes())
    }
}

/// Compact JSON with fixed-precision floats.
pub fn to_json<S: Serialize>(value: &S) -> Result<String, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}
