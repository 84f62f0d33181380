//! Elements of the joint kernel `∩_j ker T_j` from Taylor-coefficient recurrences.
//!
//! For a single axis with convolution part `C(D) = sum_{n<=p} c_n D^n` the
//! equation `C(D) f = a z f` is, coefficientwise,
//!
//! ```text
//! sum_{n=0}^{p} c_n (k+n)!/k! f_{k+n} = a f_{k-1}      (f_{-1} = 0, k >= 0)
//! ```
//!
//! which is triangular in `f_{k+p}` once `p` seeds are fixed. Separable
//! operator families then have the product of the per-axis solutions in
//! their joint kernel.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::{falling, indices_up_to, MultiIndex};
use crate::operators::CROperator;
use crate::scalar::Real;
use crate::series::TruncatedSeries;

/// Coefficients beyond this magnitude abort the recurrence.
pub const GROWTH_LIMIT: f64 = 1e150;

/// `C(D) f = a·z·f` in one variable, with seeds `f_0 .. f_{p-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisKernelProblem<T: Real> {
    pub charpoly: Vec<Complex<T>>,
    pub a: Complex<T>,
    pub seeds: Vec<Complex<T>>,
    pub degree: usize,
}

impl<T: Real> AxisKernelProblem<T> {
    /// Problem with the default seed `(1, 0, ..., 0)`.
    pub fn with_default_seed(charpoly: Vec<Complex<T>>, a: Complex<T>, degree: usize) -> Self {
        let p = charpoly.len().saturating_sub(1);
        let mut seeds = vec![Complex::zero(); p];
        if let Some(first) = seeds.first_mut() {
            *first = Complex::one();
        }
        AxisKernelProblem {
            charpoly,
            a,
            seeds,
            degree,
        }
    }

    /// `D − a z` with seed 1: kernel `exp(a z²/2)`.
    pub fn gaussian(a: Complex<T>, degree: usize) -> Self {
        Self::with_default_seed(vec![Complex::zero(), Complex::one()], a, degree)
    }

    /// `D² − a z` with seed (1, 0): a combination of Airy functions.
    pub fn airy(a: Complex<T>, degree: usize) -> Self {
        Self::with_default_seed(
            vec![Complex::zero(), Complex::zero(), Complex::one()],
            a,
            degree,
        )
    }

    /// Order `p` of the convolution part.
    pub fn order(&self) -> usize {
        self.charpoly.len().saturating_sub(1)
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        AxisKernelProblem {
            degree,
            ..self.clone()
        }
    }

    /// Checks order, leading coefficient, constant and seeds.
    pub fn validate(&self) -> Result<()> {
        let p = self.order();
        if self.charpoly.is_empty() || p == 0 {
            return Err(Error::TrivialKernel);
        }
        if self.charpoly[p].is_zero() {
            return Err(Error::InvalidProblem(
                "leading charpoly coefficient must be nonzero".into(),
            ));
        }
        if self.a.is_zero() {
            return Err(Error::ZeroConstant);
        }
        if self.seeds.len() != p {
            return Err(Error::InvalidProblem(format!(
                "expected {p} seeds, got {}",
                self.seeds.len()
            )));
        }
        if self.seeds.iter().all(|s| s.is_zero()) {
            return Err(Error::ZeroSeed);
        }
        Ok(())
    }
}

/// Univariate coefficients `f_0 .. f_N`.
pub fn solve_coefficients<T: Real>(problem: &AxisKernelProblem<T>) -> Result<Vec<Complex<T>>> {
    problem.validate()?;
    let p = problem.order();
    let n = problem.degree;
    let limit = T::of(GROWTH_LIMIT);
    let mut f: Vec<Complex<T>> = vec![Complex::zero(); n.max(p - 1) + 1];
    for (slot, s) in f.iter_mut().zip(&problem.seeds) {
        *slot = *s;
    }
    let lead = problem.charpoly[p];
    let mut k = 0usize;
    while k + p <= n {
        let mut rhs = if k > 0 {
            problem.a * f[k - 1]
        } else {
            Complex::zero()
        };
        for (i, ci) in problem.charpoly.iter().enumerate().take(p) {
            if !ci.is_zero() {
                rhs -= *ci * f[k + i] * falling::<T>((k + i) as u64, i as u64);
            }
        }
        let next = rhs / (lead * falling::<T>((k + p) as u64, p as u64));
        if !(next.norm() <= limit) {
            return Err(Error::CoefficientOverflow { index: k + p });
        }
        f[k + p] = next;
        k += 1;
    }
    f.truncate(n + 1);
    Ok(f)
}

/// The univariate kernel element as a series exact to `degree`.
pub fn solve_kernel_axis<T: Real>(problem: &AxisKernelProblem<T>) -> Result<TruncatedSeries<T>> {
    let coeffs = solve_coefficients(problem)?;
    TruncatedSeries::new(
        1,
        problem.degree,
        coeffs
            .into_iter()
            .enumerate()
            .map(|(k, c)| (MultiIndex::new(vec![k as u32]), c)),
        false,
    )
}

/// `prod_j f_j(z_j)` truncated to total degree `min_j degree_j`.
pub fn joint_kernel<T: Real>(problems: &[AxisKernelProblem<T>]) -> Result<TruncatedSeries<T>> {
    if problems.is_empty() {
        return Err(Error::Empty("kernel problems"));
    }
    let dim = problems.len();
    let degree = problems.iter().map(|p| p.degree).min().expect("nonempty");
    let factors = problems
        .iter()
        .map(|p| solve_coefficients(&p.with_degree(degree)))
        .collect::<Result<Vec<_>>>()?;
    let entries = indices_up_to(dim, degree).into_iter().map(|n| {
        let v = n
            .entries()
            .iter()
            .zip(&factors)
            .fold(Complex::one(), |acc, (&e, f)| acc * f[e as usize]);
        (n, v)
    });
    TruncatedSeries::new(dim, degree, entries, false)
}

/// Reads off the per-axis problems of a separable operator family: one
/// operator per axis, each convolution part supported on its own axis.
pub fn problems_from_operators<T: Real>(
    ops: &[CROperator<T>],
    degree: usize,
) -> Result<Vec<AxisKernelProblem<T>>> {
    let dim = ops.first().ok_or(Error::Empty("operators"))?.dim();
    if ops.len() != dim {
        return Err(Error::InvalidProblem(format!(
            "need one operator per axis: {} operators for dimension {dim}",
            ops.len()
        )));
    }
    let mut out: Vec<Option<AxisKernelProblem<T>>> = vec![None; dim];
    for t in ops {
        if t.dim() != dim {
            return Err(Error::DimMismatch {
                expected: dim,
                got: t.dim(),
            });
        }
        let axis = t.axis();
        if out[axis].is_some() {
            return Err(Error::InvalidProblem(format!(
                "axis {} given twice",
                axis + 1
            )));
        }
        if !t.conv().is_single_axis(axis) {
            return Err(Error::NotSeparable(format!(
                "convolution part of the axis-{} operator mixes variables",
                axis + 1
            )));
        }
        let p = t.conv().max_degree();
        let charpoly = (0..=p)
            .map(|i| {
                t.conv()
                    .differential_coeff(&MultiIndex::along(dim, axis, i as u32))
            })
            .collect();
        out[axis] = Some(AxisKernelProblem::with_default_seed(
            charpoly,
            t.a(),
            degree,
        ));
    }
    Ok(out
        .into_iter()
        .map(|p| p.expect("every axis filled"))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelReport<T: Real> {
    /// Max exact-region coefficient of `T_j f`, indexed by operator.
    pub residuals: Vec<T>,
    pub tolerance: T,
}

impl<T: Real> KernelReport<T> {
    pub fn passes(&self) -> bool {
        self.residuals.iter().all(|r| *r <= self.tolerance)
    }

    pub fn max_residual(&self) -> T {
        self.residuals.iter().copied().fold(T::zero(), T::max)
    }
}

/// Measures how far `f` is from each `ker T_j` on the exactness region.
pub fn verify_kernel<T: Real>(
    ops: &[CROperator<T>],
    f: &TruncatedSeries<T>,
    tolerance: T,
) -> Result<KernelReport<T>> {
    let residuals = ops
        .iter()
        .map(|t| t.apply(f).map(|r| r.max_abs_exact()))
        .collect::<Result<Vec<_>>>()?;
    Ok(KernelReport {
        residuals,
        tolerance,
    })
}
