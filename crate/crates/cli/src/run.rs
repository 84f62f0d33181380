//! Executes scenario tasks against the core library.

use crcalc::completeness::{self, derivative_span, rank_report, translate_span};
use crcalc::fhc::{convergence_report, default_epsilon};
use crcalc::kernel::verify_kernel;
use crcalc::multi_index::basis_size;
use crcalc::operators::verify_cr;
use crcalc::orbit::{iterate_orbit, visit_density, DEFAULT_HORIZON, DISCLAIMER};
use crcalc::{MultiIndex, SemiNormSpec, Series, C64, H0};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::CliError;
use crate::literal::{Entry, SeriesLit};
use crate::report::{
    ApproximateReport, CommutatorEntry, CompleteReport, FhcReport, KernelReport, OrbitReport,
    Report, VerifyCrReport,
};
use crate::scenario::{Scenario, Source, SpanMode, Task};

/// Tolerance for commutator and kernel residuals when nothing else is given.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_PROBE_DEGREE: usize = 8;
/// Realization degree for the fhc convergence report.
pub const DEFAULT_FHC_DEGREE: usize = 32;

/// Command-line values that take precedence over the scenario file.
#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
}

/// Runs every task in order. Stops at the first task that errors.
///
/// `notes` receives human-facing caveats (the orbit disclaimer).
pub fn run_scenario(
    scenario: &Scenario,
    overrides: Overrides,
    notes: &mut dyn FnMut(&str),
) -> Result<Vec<Report>, CliError> {
    let runner = Runner {
        scenario,
        overrides,
        source: scenario.source()?,
    };
    scenario
        .tasks
        .iter()
        .map(|t| runner.run(t, notes))
        .collect()
}

struct Runner<'a> {
    scenario: &'a Scenario,
    overrides: Overrides,
    source: Source,
}

impl Runner<'_> {
    fn tolerance(&self, task_value: Option<f64>, default: f64) -> f64 {
        self.overrides
            .tolerance
            .or(task_value)
            .or(self.scenario.tolerance)
            .unwrap_or(default)
    }

    fn seed(&self) -> u64 {
        self.overrides.seed.or(self.scenario.rng_seed).unwrap_or(0)
    }

    fn dim(&self) -> usize {
        self.scenario.dimension
    }

    fn run(&self, task: &Task, notes: &mut dyn FnMut(&str)) -> Result<Report, CliError> {
        match task {
            Task::VerifyCr {
                probe_degree,
                tolerance,
            } => self.verify_cr(*probe_degree, *tolerance),
            Task::Kernel { degree, tolerance } => self.kernel(*degree, *tolerance),
            Task::Complete {
                n,
                max_order,
                mode,
                samples,
                tolerance,
                expect_complete,
            } => self.complete(
                *n,
                *max_order,
                *mode,
                *samples,
                *tolerance,
                *expect_complete,
            ),
            Task::Approximate {
                target,
                n,
                max_order,
                max_residual,
            } => self.approximate(target, *n, *max_order, *max_residual),
            Task::Fhc {
                axis,
                x,
                m,
                epsilon,
                kmax,
                degree,
            } => self.fhc(*axis, x.as_deref(), *m, *epsilon, *kmax, *degree),
            Task::Orbit {
                axis,
                x,
                steps,
                target,
                delta,
                m,
                epsilon,
            } => {
                let r = self.orbit(
                    *axis,
                    x.as_ref(),
                    *steps,
                    target.as_ref(),
                    *delta,
                    *m,
                    *epsilon,
                )?;
                notes(DISCLAIMER);
                Ok(r)
            }
        }
    }

    fn verify_cr(&self, probe: Option<usize>, tol: Option<f64>) -> Result<Report, CliError> {
        let ops = self.scenario.operators()?;
        if ops.is_empty() {
            return Err(CliError::Schema("verify-cr needs operators".into()));
        }
        let probe_degree = probe.unwrap_or(DEFAULT_PROBE_DEGREE);
        let tolerance = self.tolerance(tol, RESIDUAL_TOLERANCE);
        let rep = verify_cr(&ops, probe_degree)?;
        let max_residual = rep
            .entries
            .iter()
            .map(|e| e.residual.max(e.symbolic_residual))
            .fold(0.0, f64::max);
        Ok(Report::VerifyCr(VerifyCrReport {
            task: "verify-cr",
            pass: max_residual <= tolerance,
            probe_degree,
            tolerance,
            max_residual,
            entries: rep
                .entries
                .iter()
                .map(|e| CommutatorEntry {
                    j: e.j + 1,
                    k: e.k + 1,
                    residual: e.residual,
                    symbolic_residual: e.symbolic_residual,
                })
                .collect(),
        }))
    }

    fn kernel(&self, degree: Option<usize>, tol: Option<f64>) -> Result<Report, CliError> {
        let ops = self.scenario.operators()?;
        let tolerance = self.tolerance(tol, RESIDUAL_TOLERANCE);
        let degree = degree.unwrap_or(self.scenario.truncation);
        let f = self.source.at_degree(degree)?;
        let residuals = if ops.is_empty() {
            Vec::new()
        } else {
            verify_kernel(&ops, &f, tolerance)?.residuals
        };
        let pass = !f.is_zero() && residuals.iter().all(|r| *r <= tolerance);
        Ok(Report::Kernel(KernelReport {
            task: "kernel",
            pass,
            degree: f.cutoff(),
            tolerance,
            residuals,
            generator: SeriesLit::from_series(&f),
        }))
    }

    /// `N + 2(p − 1)`: higher-order kernels need extra derivatives before
    /// their truncations separate every monomial.
    fn default_max_order(&self, n: usize) -> usize {
        n + 2 * (self.source.order() - 1)
    }

    fn complete(
        &self,
        n: Option<usize>,
        max_order: Option<usize>,
        mode: SpanMode,
        samples: Option<usize>,
        tol: Option<f64>,
        expect: Option<bool>,
    ) -> Result<Report, CliError> {
        let n = n.unwrap_or(self.scenario.truncation);
        let tolerance = self.tolerance(tol, completeness::DEFAULT_TOLERANCE);
        let (matrix, max_order, samples) = match mode {
            SpanMode::Derivative => {
                let max_order = max_order.unwrap_or_else(|| self.default_max_order(n));
                let f = self.source.at_degree(n + max_order)?;
                (derivative_span(&f, n, max_order)?, max_order, 0)
            }
            SpanMode::Translate => {
                let count = samples.unwrap_or(3 * basis_size(self.dim(), n));
                let points = sample_points(self.seed(), self.dim(), count);
                let f = self.source.at_degree(n + self.default_max_order(n))?;
                (translate_span(&f, n, &points)?, 0, count)
            }
        };
        let rep = rank_report(&matrix, tolerance)?;
        Ok(Report::Complete(CompleteReport {
            task: "complete",
            pass: expect.is_none_or(|e| e == rep.complete_at_truncation),
            mode: match mode {
                SpanMode::Derivative => "derivative",
                SpanMode::Translate => "translate",
            },
            rank: rep.rank,
            ambient: rep.ambient_dim,
            complete_at_truncation: rep.complete_at_truncation,
            n,
            max_order,
            samples,
            tolerance,
            approximate: matrix.approximate,
            diagnostics: rep.singular_values,
        }))
    }

    fn approximate(
        &self,
        target: &SeriesLit,
        n: Option<usize>,
        max_order: Option<usize>,
        max_residual: Option<f64>,
    ) -> Result<Report, CliError> {
        let n = n.unwrap_or(self.scenario.truncation);
        let max_order = max_order.unwrap_or(n);
        let f = self.source.at_degree(n + max_order)?;
        let target = target.to_series()?;
        let fit = completeness::approximate_target(&f, &target, n, max_order)?;
        Ok(Report::Approximate(ApproximateReport {
            task: "approximate",
            pass: max_residual.map_or(fit.residual.is_finite(), |m| fit.residual <= m),
            n,
            max_order,
            residual: fit.residual,
            coefficients: fit
                .coefficients
                .iter()
                .map(|(i, c)| Entry::new(i, *c))
                .collect(),
        }))
    }

    fn fhc(
        &self,
        axis: usize,
        x: Option<&[Entry]>,
        m: u32,
        epsilon: Option<f64>,
        kmax: usize,
        degree: Option<usize>,
    ) -> Result<Report, CliError> {
        let Source::Problems(problems) = &self.source else {
            return Err(CliError::Schema("fhc needs a kernel generator".into()));
        };
        let j = self.axis0(axis)?;
        let a: Vec<C64> = problems.iter().map(|p| p.a).collect();
        let x = match x {
            None => H0::basis(a.clone(), MultiIndex::zeros(self.dim()))?,
            Some(terms) => {
                let mut parts = Vec::with_capacity(terms.len());
                for e in terms {
                    if e.idx.len() != self.dim() {
                        return Err(CliError::Schema(format!(
                            "fhc term index {:?} has wrong length",
                            e.idx
                        )));
                    }
                    parts.push((MultiIndex::new(e.idx.clone()), C64::new(e.re, e.im)));
                }
                H0::from_terms(a.clone(), parts)?
            }
        };
        let epsilon = epsilon.unwrap_or_else(|| default_epsilon(&a));
        let spec = SemiNormSpec::new(m, epsilon)?;
        let degree = degree.unwrap_or(DEFAULT_FHC_DEGREE);
        let rep = convergence_report(&x, j, &spec, kmax, degree, problems)?;
        let root = rep.final_kth_root().unwrap_or(f64::INFINITY);
        let sums_finite = rep.partial_sums.iter().all(|s| s.is_finite());
        Ok(Report::Fhc(FhcReport {
            task: "fhc",
            pass: rep.stable && sums_finite && root < 1.0,
            axis,
            m: rep.m,
            epsilon: rep.epsilon,
            bound: rep.bound,
            u: rep.u,
            ratios: rep.ratios,
            kth_roots: rep.kth_roots,
            partial_sums: rep.partial_sums,
            cauchy: rep.cauchy,
            stable: rep.stable,
            realization_degree: rep.realization_degree,
        }))
    }

    #[allow(clippy::too_many_arguments)]
    fn orbit(
        &self,
        axis: usize,
        x: Option<&SeriesLit>,
        steps: Option<usize>,
        target: Option<&SeriesLit>,
        delta: f64,
        m: u32,
        epsilon: Option<f64>,
    ) -> Result<Report, CliError> {
        let ops = self.scenario.operators()?;
        let j = self.axis0(axis)?;
        let op = ops
            .iter()
            .find(|t| t.axis() == j)
            .ok_or_else(|| CliError::Schema(format!("no operator for axis {axis}")))?;
        let p = op.conv().max_degree().max(1);
        let n = self.scenario.truncation;
        let (x, steps) = match x {
            Some(lit) => {
                let x = lit.to_series()?;
                let steps = steps.unwrap_or_else(|| budget(&x, p).min(DEFAULT_HORIZON));
                (x, steps)
            }
            None => {
                let steps = steps.unwrap_or(DEFAULT_HORIZON);
                let x = self.source.at_degree(n + steps * p)?;
                let steps = match self.source {
                    Source::Explicit(_) if !x.is_polynomial() => steps.min(budget(&x, p)),
                    _ => steps,
                };
                (x, steps)
            }
        };
        let target = match target {
            Some(t) => t.to_series()?,
            None => Series::zero(self.dim(), x.cutoff(), x.cutoff() as i64, true),
        };
        let epsilon = epsilon.unwrap_or_else(|| default_epsilon(&[op.a()]));
        let spec = SemiNormSpec::new(m, epsilon)?;
        let mut rec = iterate_orbit(op, &x, steps)?;
        let proxy = visit_density(&mut rec, &target, delta, &spec)?;
        Ok(Report::Orbit(OrbitReport {
            task: "orbit",
            pass: true,
            axis,
            steps,
            delta,
            hits: rec.hits.clone(),
            density_proxy: proxy,
            label: "PROXY",
            distances: rec.distances.unwrap_or_default(),
        }))
    }

    fn axis0(&self, axis: usize) -> Result<usize, CliError> {
        if axis == 0 || axis > self.dim() {
            return Err(CliError::Schema(format!(
                "axis {axis} outside 1..={}",
                self.dim()
            )));
        }
        Ok(axis - 1)
    }
}

/// Steps a non-polynomial series affords before its exact region runs out.
fn budget(x: &Series, order: usize) -> usize {
    if x.is_polynomial() {
        usize::MAX
    } else {
        (x.exact_degree().max(0) as usize) / order
    }
}

/// Seeded uniform points in the real box `[-1, 1]^dim`.
pub fn sample_points(seed: u64, dim: usize, count: usize) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| C64::new(rng.gen_range(-1.0..=1.0), 0.0))
                .collect()
        })
        .collect()
}
