//! Argument parsing and report output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use crcalc::c64;

use crate::error::{CliError, EXIT_OK, EXIT_TASK_FAILED};
use crate::literal::{Entry, OperatorLit, SeriesLit};
use crate::report::{Format, Report};
use crate::run::{run_scenario, Overrides};
use crate::scenario::{Scenario, SpanMode, Task};

#[derive(Debug, Parser)]
#[command(
    name = "crcalc",
    version,
    about = "Truncated-series checks for operators commuting with partial derivatives up to a constant"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write one file per report into this directory instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance overriding scenario and task values.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed for sampled translates, overriding the scenario's rng_seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// `D_j − a z_j` on every axis.
    Gaussian,
    /// `D_j² − a z_j` on every axis.
    Airy,
}

/// Where operators and generator come from.
#[derive(Debug, Args)]
pub struct Setup {
    /// Take operators and generator from a scenario file (its tasks are ignored).
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "gaussian")]
    pub family: Family,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Operator constant as `re,im` (or just `re`).
    #[arg(long, default_value = "1,0", allow_hyphen_values = true)]
    pub a: String,
    /// Truncation degree N.
    #[arg(short = 'N', long = "truncation")]
    pub truncation: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check [T_j, D_k] = δ_jk a_j I on monomials and symbolically.
    VerifyCr {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        probe_degree: Option<usize>,
    },
    /// Solve for the joint kernel and measure T_j f on its exact region.
    Kernel {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Numerical rank of the derivative or translate span of the generator.
    Complete {
        #[command(flatten)]
        setup: Setup,
        #[arg(long)]
        max_order: Option<usize>,
        #[arg(long, value_enum, default_value = "derivative")]
        mode: SpanMode,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Least-squares fit of a polynomial target by derivatives of the generator.
    Approximate {
        #[command(flatten)]
        setup: Setup,
        /// Series literal JSON, inline or as @path.
        #[arg(long)]
        target: String,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Semi-norm majorants of sum_k S_j^k x.
    Fhc {
        #[command(flatten)]
        setup: Setup,
        /// 1-based axis.
        #[arg(long, default_value_t = 1)]
        axis: usize,
        /// Terms `[{"idx": [...], "re": .., "im": ..}]` of x = sum c_n D^n f, inline or @path.
        #[arg(long)]
        x: Option<String>,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 20)]
        kmax: usize,
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Iterate an operator and report a visit-frequency proxy.
    Orbit {
        #[command(flatten)]
        setup: Setup,
        /// 1-based axis of the operator to iterate.
        #[arg(long, default_value_t = 1)]
        axis: usize,
        /// Starting series literal, inline or @path; defaults to the generator.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        steps: Option<usize>,
        /// Target series literal, inline or @path; defaults to 0.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Run every task of a scenario file.
    Run { path: PathBuf },
}

impl clap::ValueEnum for SpanMode {
    fn value_variants<'a>() -> &'a [Self] {
        &[SpanMode::Derivative, SpanMode::Translate]
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(match self {
            SpanMode::Derivative => "derivative",
            SpanMode::Translate => "translate",
        }))
    }
}

/// Parses `re,im` or `re`.
fn parse_complex(text: &str) -> Result<crcalc::C64, CliError> {
    let bad = || CliError::Schema(format!("cannot parse complex number {text:?}"));
    let mut parts = text.split(',').map(|p| p.trim().parse::<f64>());
    let re = parts.next().ok_or_else(bad)?.map_err(|_| bad())?;
    let im = match parts.next() {
        Some(p) => p.map_err(|_| bad())?,
        None => 0.0,
    };
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(c64(re, im))
}

/// Inline JSON, or the contents of a file when prefixed with `@`.
fn json_arg<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let body = match text.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_string(),
            source,
        })?,
        None => text.to_string(),
    };
    Ok(serde_json::from_str(&body)?)
}

impl Setup {
    fn scenario(&self, task: Task) -> Result<Scenario, CliError> {
        let mut scenario = match &self.scenario {
            Some(path) => Scenario::load(path)?,
            None => {
                if self.dim == 0 {
                    return Err(CliError::Schema("dimension must be positive".into()));
                }
                let a = parse_complex(&self.a)?;
                let order = match self.family {
                    Family::Gaussian => 1,
                    Family::Airy => 2,
                };
                Scenario {
                    name: None,
                    dimension: self.dim,
                    truncation: 4,
                    tolerance: None,
                    rng_seed: None,
                    operators: (1..=self.dim)
                        .map(|j| OperatorLit::derivative_minus_z(self.dim, j, order, a))
                        .collect(),
                    generator: None,
                    tasks: Vec::new(),
                }
            }
        };
        if let Some(n) = self.truncation {
            scenario.truncation = n;
        }
        scenario.tasks = vec![task];
        Ok(scenario)
    }
}

impl Command {
    fn scenario(&self) -> Result<Scenario, CliError> {
        match self {
            Command::Run { path } => Scenario::load(path),
            Command::VerifyCr {
                setup,
                probe_degree,
            } => setup.scenario(Task::VerifyCr {
                probe_degree: *probe_degree,
                tolerance: None,
            }),
            Command::Kernel { setup, degree } => setup.scenario(Task::Kernel {
                degree: *degree,
                tolerance: None,
            }),
            Command::Complete {
                setup,
                max_order,
                mode,
                samples,
            } => setup.scenario(Task::Complete {
                n: None,
                max_order: *max_order,
                mode: *mode,
                samples: *samples,
                tolerance: None,
                expect_complete: None,
            }),
            Command::Approximate {
                setup,
                target,
                max_order,
            } => setup.scenario(Task::Approximate {
                target: json_arg::<SeriesLit>(target)?,
                n: None,
                max_order: *max_order,
                max_residual: None,
            }),
            Command::Fhc {
                setup,
                axis,
                x,
                m,
                epsilon,
                kmax,
                degree,
            } => setup.scenario(Task::Fhc {
                axis: *axis,
                x: x.as_deref().map(json_arg::<Vec<Entry>>).transpose()?,
                m: *m,
                epsilon: *epsilon,
                kmax: *kmax,
                degree: *degree,
            }),
            Command::Orbit {
                setup,
                axis,
                x,
                steps,
                target,
                delta,
                m,
                epsilon,
            } => setup.scenario(Task::Orbit {
                axis: *axis,
                x: x.as_deref().map(json_arg::<SeriesLit>).transpose()?,
                steps: *steps,
                target: target.as_deref().map(json_arg::<SeriesLit>).transpose()?,
                delta: *delta,
                m: *m,
                epsilon: *epsilon,
            }),
        }
    }
}

/// Runs the parsed command, writing reports and diagnostics; returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match try_execute(cli, stdout, stderr) {
        Ok(all_pass) => {
            if all_pass {
                EXIT_OK
            } else {
                EXIT_TASK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn try_execute(
    cli: &Cli,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<bool, CliError> {
    let scenario = cli.command.scenario()?;
    let overrides = Overrides {
        tolerance: cli.tolerance,
        seed: cli.seed,
    };
    let mut notes = Vec::new();
    let reports = run_scenario(&scenario, overrides, &mut |n: &str| {
        notes.push(n.to_string())
    })?;
    let rendered = reports
        .iter()
        .map(|r| r.render(cli.format))
        .collect::<Result<Vec<_>, _>>()?;
    match &cli.out {
        Some(dir) => write_files(dir, &reports, &rendered, cli.format)?,
        None => {
            for (i, text) in rendered.iter().enumerate() {
                if i > 0 && cli.format == Format::Csv {
                    writeln!(stdout)?;
                }
                stdout.write_all(text.as_bytes())?;
                if cli.format == Format::Json {
                    writeln!(stdout)?;
                }
            }
        }
    }
    for n in notes {
        writeln!(stderr, "note: {n}")?;
    }
    for r in reports.iter().filter(|r| !r.passed()) {
        writeln!(stderr, "task {} failed", r.task())?;
    }
    Ok(reports.iter().all(Report::passed))
}

fn write_files(
    dir: &Path,
    reports: &[Report],
    rendered: &[String],
    format: Format,
) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    let ext = match format {
        Format::Json => "json",
        Format::Csv => "csv",
    };
    for (i, (r, text)) in reports.iter().zip(rendered).enumerate() {
        let path = dir.join(format!("{:02}-{}.{ext}", i + 1, r.task()));
        let mut body = text.clone();
        if format == Format::Json {
            body.push('\n');
        }
        std::fs::write(path, body)?;
    }
    Ok(())
}
