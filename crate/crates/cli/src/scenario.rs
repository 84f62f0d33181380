//! Scenario files: an operator family, a generator and a list of tasks.

use std::path::Path;

use crcalc::kernel::{joint_kernel, problems_from_operators};
use crcalc::{AxisKernelProblem, CROperator, Series};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::literal::{Entry, OperatorLit, ProblemLit, SeriesLit};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: usize,
    /// Default truncation degree `N` for the tasks.
    pub truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    #[serde(default)]
    pub operators: Vec<OperatorLit>,
    /// Defaults to the joint kernel of `operators`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Generator>,
    pub tasks: Vec<Task>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Generator {
    Kernel(Vec<ProblemLit>),
    Explicit(SeriesLit),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpanMode {
    #[default]
    Derivative,
    Translate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    VerifyCr {
        #[serde(default)]
        probe_degree: Option<usize>,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    Kernel {
        #[serde(default)]
        degree: Option<usize>,
        #[serde(default)]
        tolerance: Option<f64>,
    },
    Complete {
        #[serde(default, rename = "N")]
        n: Option<usize>,
        #[serde(default)]
        max_order: Option<usize>,
        #[serde(default)]
        mode: SpanMode,
        /// Translate samples; defaults to `3 · binom(N + d, d)`.
        #[serde(default)]
        samples: Option<usize>,
        #[serde(default)]
        tolerance: Option<f64>,
        /// When set, the task passes iff the verdict matches.
        #[serde(default)]
        expect_complete: Option<bool>,
    },
    Approximate {
        target: SeriesLit,
        #[serde(default, rename = "N")]
        n: Option<usize>,
        #[serde(default)]
        max_order: Option<usize>,
        /// When set, the task passes iff the residual is at most this.
        #[serde(default)]
        max_residual: Option<f64>,
    },
    Fhc {
        /// 1-based.
        #[serde(default = "one")]
        axis: usize,
        /// Terms `c_n D^n f`; defaults to `f`.
        #[serde(default)]
        x: Option<Vec<Entry>>,
        #[serde(default = "one_u32")]
        m: u32,
        #[serde(default)]
        epsilon: Option<f64>,
        #[serde(default = "default_kmax")]
        kmax: usize,
        /// Realization degree; the stability check also uses `degree + 4`.
        #[serde(default)]
        degree: Option<usize>,
    },
    Orbit {
        /// 1-based operator axis.
        #[serde(default = "one")]
        axis: usize,
        /// Starting vector; defaults to the generator.
        #[serde(default)]
        x: Option<SeriesLit>,
        #[serde(default)]
        steps: Option<usize>,
        /// Defaults to 0.
        #[serde(default)]
        target: Option<SeriesLit>,
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default = "one_u32")]
        m: u32,
        #[serde(default)]
        epsilon: Option<f64>,
    },
}

fn one() -> usize {
    1
}

fn one_u32() -> u32 {
    1
}

fn default_kmax() -> usize {
    20
}

fn default_delta() -> f64 {
    0.1
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::VerifyCr { .. } => "verify-cr",
            Task::Kernel { .. } => "kernel",
            Task::Complete { .. } => "complete",
            Task::Approximate { .. } => "approximate",
            Task::Fhc { .. } => "fhc",
            Task::Orbit { .. } => "orbit",
        }
    }
}

/// The generator in resolved form.
pub enum Source {
    Problems(Vec<AxisKernelProblem<f64>>),
    Explicit(Series),
}

impl Source {
    /// Generator truncated at `degree` (kernel problems are re-solved there).
    pub fn at_degree(&self, degree: usize) -> Result<Series, CliError> {
        match self {
            Source::Problems(ps) => {
                let ps: Vec<_> = ps.iter().map(|p| p.with_degree(degree)).collect();
                Ok(joint_kernel(&ps)?)
            }
            Source::Explicit(f) => Ok(f.clone()),
        }
    }

    /// Largest convolution order among the axis problems (1 for explicit generators).
    pub fn order(&self) -> usize {
        match self {
            Source::Problems(ps) => ps.iter().map(AxisKernelProblem::order).max().unwrap_or(1),
            Source::Explicit(_) => 1,
        }
    }
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let s: Scenario = serde_json::from_str(text)?;
        s.check()?;
        Ok(s)
    }

    fn check(&self) -> Result<(), CliError> {
        if self.dimension == 0 {
            return Err(CliError::Schema("dimension must be positive".into()));
        }
        for op in &self.operators {
            if op.dim != self.dimension {
                return Err(CliError::Schema(format!(
                    "operator dimension {} differs from scenario dimension {}",
                    op.dim, self.dimension
                )));
            }
        }
        match &self.generator {
            Some(Generator::Kernel(ps)) if ps.len() != self.dimension => {
                Err(CliError::Schema(format!(
                    "kernel generator needs one problem per axis, got {}",
                    ps.len()
                )))
            }
            Some(Generator::Explicit(f)) if f.dim != self.dimension => Err(CliError::Schema(
                "explicit generator dimension differs from scenario dimension".into(),
            )),
            None if self.operators.is_empty() => Err(CliError::Schema(
                "either operators or a generator is required".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn operators(&self) -> Result<Vec<CROperator<f64>>, CliError> {
        self.operators
            .iter()
            .map(OperatorLit::to_operator)
            .collect()
    }

    pub fn source(&self) -> Result<Source, CliError> {
        match &self.generator {
            Some(Generator::Kernel(ps)) => Ok(Source::Problems(
                ps.iter()
                    .map(ProblemLit::to_problem)
                    .collect::<Result<_, _>>()?,
            )),
            Some(Generator::Explicit(f)) => Ok(Source::Explicit(f.to_series()?)),
            None => Ok(Source::Problems(problems_from_operators(
                &self.operators()?,
                self.truncation,
            )?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_minimal_scenario() {
        let s = Scenario::parse(
            r#"{
                "dimension": 1, "truncation": 4,
                "operators": [{"dim": 1, "axis": 1, "a": [1, 0], "symbol": [{"idx": [1], "re": 1}]}],
                "tasks": [{"task": "verify-cr"}, {"task": "complete", "N": 4, "expect_complete": true}]
            }"#,
        )
        .unwrap();
        assert_eq!(s.tasks.len(), 2);
        assert_eq!(s.tasks[1].name(), "complete");
        assert_eq!(s.source().unwrap().order(), 1);
    }

    #[test]
    fn rejects_unknown_task_and_fields() {
        let base = r#"{"dimension": 1, "truncation": 4,
            "operators": [{"dim": 1, "axis": 1, "a": [1, 0], "symbol": [{"idx": [1], "re": 1}]}],
            "tasks": [TASK]}"#;
        assert!(Scenario::parse(&base.replace("TASK", r#"{"task": "plot"}"#)).is_err());
        assert!(
            Scenario::parse(&base.replace("TASK", r#"{"task": "kernel", "bogus": 1}"#)).is_err()
        );
    }

    #[test]
    fn requires_operators_or_generator() {
        let err = Scenario::parse(r#"{"dimension": 1, "truncation": 4, "tasks": []}"#).unwrap_err();
        assert!(matches!(err, CliError::Schema(_)));
    }
}
