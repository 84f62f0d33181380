//! Finite orbits `x, Tx, T²x, …` and a visit-frequency proxy for lower density.
//!
//! No finite horizon decides whether the lower density of visits is
//! positive; [`visit_density`] is only an upper-biased proxy.

use num_complex::Complex;
use num_traits::One;

use crate::error::{Error, Result};
use crate::operators::CROperator;
use crate::scalar::Real;
use crate::series::{SemiNormSpec, TruncatedSeries};

/// Default number of orbit steps.
pub const DEFAULT_HORIZON: usize = 64;

/// Fixed caveat attached to every reported proxy.
pub const DISCLAIMER: &str =
    "density_proxy is a finite-horizon PROXY; it does not certify frequent hypercyclicity";

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitRecord<T: Real> {
    /// `iterates[k] = T^k x`, `k = 0..=steps`.
    pub iterates: Vec<TruncatedSeries<T>>,
    /// Semi-norm upper bounds of `T^k x − g`, one per iterate, once a target is set.
    pub distances: Option<Vec<T>>,
    /// Steps `k >= 1` whose distance is below `δ`.
    pub hits: Vec<usize>,
    pub density_proxy: Option<T>,
}

impl<T: Real> OrbitRecord<T> {
    /// Number of operator applications.
    pub fn steps(&self) -> usize {
        self.iterates.len() - 1
    }

    /// Runs `more` further steps from the last iterate.
    pub fn extend(&self, op: &CROperator<T>, more: usize) -> Result<Self> {
        let last = self.iterates.last().expect("iterates never empty");
        let tail = iterate_orbit(op, last, more).map_err(|e| match e {
            Error::ExactnessExhausted { step } => Error::ExactnessExhausted {
                step: step + self.steps(),
            },
            other => other,
        })?;
        let mut iterates = self.iterates.clone();
        iterates.extend(tail.iterates.into_iter().skip(1));
        Ok(OrbitRecord {
            iterates,
            distances: None,
            hits: Vec::new(),
            density_proxy: None,
        })
    }
}

/// Applies `op` `steps` times starting from `x`.
///
/// Each step of a non-polynomial iterate lowers its exact degree by the
/// convolution order; the step that would leave no exact coefficient is
/// reported in the error.
pub fn iterate_orbit<T: Real>(
    op: &CROperator<T>,
    x: &TruncatedSeries<T>,
    steps: usize,
) -> Result<OrbitRecord<T>> {
    if x.dim() != op.dim() {
        return Err(Error::DimMismatch {
            expected: op.dim(),
            got: x.dim(),
        });
    }
    let mut iterates = Vec::with_capacity(steps + 1);
    iterates.push(x.clone());
    for step in 1..=steps {
        let next = step_flushed(op, iterates.last().expect("non-empty"))?;
        if !next.is_polynomial() && next.exact_degree() < 0 {
            return Err(Error::ExactnessExhausted { step });
        }
        iterates.push(next);
    }
    Ok(OrbitRecord {
        iterates,
        distances: None,
        hits: Vec::new(),
        density_proxy: None,
    })
}

/// Coefficients this many ulps below the magnitude of the cancelling terms
/// are treated as rounding noise.
const NOISE_ULPS: f64 = 16.0;

/// `T f` with coefficients at rounding-noise level set to zero.
///
/// An orbit in the kernel is mathematically zero, but `T` is unbounded and
/// amplifies leftover rounding error by a constant factor each step.
fn step_flushed<T: Real>(op: &CROperator<T>, f: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
    let conv = op.conv().apply(f)?;
    let shifted = f.multiply_coordinate(op.axis())?;
    let sum = TruncatedSeries::linear_combine(&[(Complex::one(), &conv), (-op.a(), &shifted)])?;
    let noise = T::epsilon() * T::of(NOISE_ULPS);
    let a = op.a().norm();
    let kept: Vec<_> = sum
        .iter()
        .filter(|(idx, v)| {
            v.norm() > noise * (conv.coeff(idx).norm() + a * shifted.coeff(idx).norm())
        })
        .map(|(idx, v)| (idx.clone(), *v))
        .collect();
    TruncatedSeries::with_exact_degree(
        sum.dim(),
        sum.cutoff(),
        sum.exact_degree(),
        kept,
        sum.is_polynomial(),
    )
}

/// Fills distances to `target` and returns `#{1 <= k <= steps : d_k < δ} / steps`.
///
/// `d_k` is the coefficient majorant of the exact part of `T^k x − target`
/// at the radius of `spec`. The starting vector gets a distance but is not
/// counted as a visit. A zero horizon yields 0.
pub fn visit_density<T: Real>(
    rec: &mut OrbitRecord<T>,
    target: &TruncatedSeries<T>,
    delta: T,
    spec: &SemiNormSpec<T>,
) -> Result<T> {
    if !(delta > T::zero()) {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let r = spec.radius();
    let mut distances = Vec::with_capacity(rec.iterates.len());
    for it in &rec.iterates {
        if it.dim() != target.dim() {
            return Err(Error::DimMismatch {
                expected: it.dim(),
                got: target.dim(),
            });
        }
        let degree = it.cutoff().min(target.cutoff());
        let diff = it.truncate(degree).sub(&target.truncate(degree))?;
        distances.push(diff.exact_part().majorant(r));
    }
    let hits: Vec<usize> = distances
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, d)| **d < delta)
        .map(|(k, _)| k)
        .collect();
    let horizon = rec.steps();
    let proxy = if horizon == 0 {
        T::zero()
    } else {
        T::of_u64(hits.len() as u64) / T::of_u64(horizon as u64)
    };
    rec.distances = Some(distances);
    rec.hits = hits;
    rec.density_proxy = Some(proxy);
    Ok(proxy)
}
