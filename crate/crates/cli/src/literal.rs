//! JSON literal forms of series, operators and kernel problems.
//!
//! Axes are 1-based in JSON. Complex numbers are either `{"re", "im"}`
//! fields on an indexed entry or a two-element `[re, im]` array.

use crcalc::{
    AxisKernelProblem, CROperator, ConvolutionSymbol, MultiIndex, Series, WeylOperator, C64,
};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pair(pub f64, pub f64);

impl From<Pair> for C64 {
    fn from(p: Pair) -> C64 {
        C64::new(p.0, p.1)
    }
}

impl From<C64> for Pair {
    fn from(c: C64) -> Pair {
        Pair(c.re, c.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub idx: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl Entry {
    pub fn new(idx: &MultiIndex, c: C64) -> Self {
        Entry {
            idx: idx.entries().to_vec(),
            re: c.re,
            im: c.im,
        }
    }

    fn parts(&self, dim: usize) -> Result<(MultiIndex, C64), CliError> {
        if self.idx.len() != dim {
            return Err(CliError::Schema(format!(
                "index {:?} has {} entries, expected {dim}",
                self.idx,
                self.idx.len()
            )));
        }
        Ok((
            MultiIndex::new(self.idx.clone()),
            C64::new(self.re, self.im),
        ))
    }
}

fn entries(dim: usize, list: &[Entry]) -> Result<Vec<(MultiIndex, C64)>, CliError> {
    list.iter().map(|e| e.parts(dim)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesLit {
    pub dim: usize,
    pub cutoff: usize,
    pub polynomial: bool,
    /// Defaults to `cutoff`; ignored for polynomials.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_degree: Option<i64>,
    pub coeffs: Vec<Entry>,
}

impl SeriesLit {
    pub fn to_series(&self) -> Result<Series, CliError> {
        let exact = self.exact_degree.unwrap_or(self.cutoff as i64);
        Ok(Series::with_exact_degree(
            self.dim,
            self.cutoff,
            exact,
            entries(self.dim, &self.coeffs)?,
            self.polynomial,
        )?)
    }

    /// Coefficients in graded-lex order.
    pub fn from_series(f: &Series) -> Self {
        let exact_degree = if f.is_polynomial() || f.exact_degree() == f.cutoff() as i64 {
            None
        } else {
            Some(f.exact_degree())
        };
        SeriesLit {
            dim: f.dim(),
            cutoff: f.cutoff(),
            polynomial: f.is_polynomial(),
            exact_degree,
            coeffs: f.iter().map(|(n, c)| Entry::new(n, *c)).collect(),
        }
    }
}

/// `T = sum c_n D^n − a z_axis`; `symbol` lists the `c_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorLit {
    pub dim: usize,
    pub axis: usize,
    pub a: Pair,
    pub symbol: Vec<Entry>,
}

impl OperatorLit {
    pub fn to_operator(&self) -> Result<CROperator<f64>, CliError> {
        if self.axis == 0 || self.axis > self.dim {
            return Err(CliError::Schema(format!(
                "axis {} outside 1..={}",
                self.axis, self.dim
            )));
        }
        let conv =
            ConvolutionSymbol::from_differential(self.dim, entries(self.dim, &self.symbol)?)?;
        Ok(CROperator::new(self.axis - 1, self.a.into(), conv)?)
    }

    pub fn from_operator(t: &CROperator<f64>) -> Self {
        let dim = t.dim();
        let symbol = t
            .conv()
            .iter()
            .map(|(n, _)| Entry::new(n, t.conv().differential_coeff(n)))
            .collect();
        OperatorLit {
            dim,
            axis: t.axis() + 1,
            a: t.a().into(),
            symbol,
        }
    }

    /// `D_axis^order − a z_axis`.
    pub fn derivative_minus_z(dim: usize, axis: usize, order: u32, a: C64) -> Self {
        let mut idx = vec![0; dim];
        idx[axis - 1] = order;
        OperatorLit {
            dim,
            axis,
            a: a.into(),
            symbol: vec![Entry {
                idx,
                re: 1.0,
                im: 0.0,
            }],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylTerm {
    pub zpow: Vec<u32>,
    pub dpow: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeylLit {
    pub dim: usize,
    pub terms: Vec<WeylTerm>,
}

impl WeylLit {
    pub fn to_weyl(&self) -> Result<WeylOperator<f64>, CliError> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                (
                    C64::new(t.re, t.im),
                    MultiIndex::new(t.zpow.clone()),
                    MultiIndex::new(t.dpow.clone()),
                )
            })
            .collect::<Vec<_>>();
        Ok(WeylOperator::from_terms(self.dim, terms)?)
    }

    pub fn from_weyl(w: &WeylOperator<f64>) -> Self {
        WeylLit {
            dim: w.dim(),
            terms: w
                .terms()
                .map(|(c, z, d)| WeylTerm {
                    zpow: z.entries().to_vec(),
                    dpow: d.entries().to_vec(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

/// One-variable kernel problem `C(D) f = a z f`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemLit {
    pub charpoly: Vec<Pair>,
    pub a: Pair,
    /// Defaults to `(1, 0, ..., 0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seeds: Option<Vec<Pair>>,
    pub degree: usize,
}

impl ProblemLit {
    pub fn to_problem(&self) -> Result<AxisKernelProblem<f64>, CliError> {
        let charpoly: Vec<C64> = self.charpoly.iter().map(|p| (*p).into()).collect();
        let mut problem =
            AxisKernelProblem::with_default_seed(charpoly, self.a.into(), self.degree);
        if let Some(seeds) = &self.seeds {
            problem.seeds = seeds.iter().map(|p| (*p).into()).collect();
        }
        problem.validate()?;
        Ok(problem)
    }

    pub fn from_problem(p: &AxisKernelProblem<f64>) -> Self {
        ProblemLit {
            charpoly: p.charpoly.iter().map(|c| (*c).into()).collect(),
            a: p.a.into(),
            seeds: Some(p.seeds.iter().map(|c| (*c).into()).collect()),
            degree: p.degree,
        }
    }
}
