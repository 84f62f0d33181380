//! Operator algebra on truncated series.
//!
//! - [`WeylOperator`]: normal-ordered polynomial differential operators with
//!   symbolic composition and commutators.
//! - [`ConvolutionSymbol`]: polynomial characteristic functions and the
//!   convolution operators, dual pairings and Laplace evaluations they define.
//! - [`CROperator`]: the canonical `M_C − a z_j` operators satisfying
//!   `[T_j, D_k] = δ_jk a_j I`.

mod convolution;
mod cr;
mod weyl;

pub use convolution::{exponential, ConvolutionSymbol};
pub use cr::CROperator;
pub use weyl::WeylOperator;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::{indices_up_to, MultiIndex};
use crate::scalar::Real;
use crate::series::TruncatedSeries;

/// One operator whose commutators with the partials are to be checked
/// against a claimed constant.
#[derive(Clone, Debug)]
pub struct CommutationClaim<T: Real> {
    pub operator: WeylOperator<T>,
    pub axis: usize,
    pub a: Complex<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommutatorResidual<T: Real> {
    /// Operator axis `j` (0-based).
    pub j: usize,
    /// Partial derivative axis `k` (0-based).
    pub k: usize,
    /// Max coefficient of `[T_j, D_k] z^m − δ_jk a_j z^m` over probe monomials.
    pub residual: T,
    /// Max coefficient of the symbolic `[T_j, D_k] − δ_jk a_j I`.
    pub symbolic_residual: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrReport<T: Real> {
    pub probe_degree: usize,
    pub entries: Vec<CommutatorResidual<T>>,
}

impl<T: Real> CrReport<T> {
    pub fn max_residual(&self) -> T {
        self.entries
            .iter()
            .map(|e| e.residual.max(e.symbolic_residual))
            .fold(T::zero(), T::max)
    }

    pub fn passes(&self, tolerance: T) -> bool {
        self.max_residual() <= tolerance
    }
}

/// Checks `[T_j, D_k] = δ_jk a_j I` for every operator and every axis `k`.
pub fn verify_cr<T: Real>(ops: &[CROperator<T>], probe_degree: usize) -> Result<CrReport<T>> {
    let claims: Vec<_> = ops
        .iter()
        .map(|t| CommutationClaim {
            operator: t.to_weyl(),
            axis: t.axis(),
            a: t.a(),
        })
        .collect();
    verify_commutation(&claims, probe_degree)
}

/// Two independent routes per `(j, k)`: the numeric one applies
/// `T_j D_k − D_k T_j − δ_jk a_j` to every monomial of degree `<= probe_degree`,
/// the symbolic one normal-orders the commutator.
pub fn verify_commutation<T: Real>(
    claims: &[CommutationClaim<T>],
    probe_degree: usize,
) -> Result<CrReport<T>> {
    let mut entries = Vec::new();
    for claim in claims {
        let dim = claim.operator.dim();
        if claim.axis >= dim {
            return Err(Error::AxisOutOfRange {
                axis: claim.axis,
                dim,
            });
        }
        let cutoff = probe_degree + claim.operator.multiplier_degree() + 1;
        let probes: Vec<TruncatedSeries<T>> = indices_up_to(dim, probe_degree)
            .into_iter()
            .map(|m| TruncatedSeries::monomial(dim, cutoff, m, Complex::one()))
            .collect::<Result<_>>()?;
        for k in 0..dim {
            let dk = MultiIndex::unit(dim, k);
            let delta = if k == claim.axis {
                claim.a
            } else {
                Complex::zero()
            };
            let mut residual = T::zero();
            for p in &probes {
                let lhs = claim.operator.apply(&p.differentiate(&dk))?;
                let rhs = claim.operator.apply(p)?.differentiate(&dk);
                let defect = TruncatedSeries::linear_combine(&[
                    (Complex::one(), &lhs),
                    (-Complex::<T>::one(), &rhs),
                    (-delta, p),
                ])?;
                residual = residual.max(defect.max_abs_exact());
            }
            let symbolic = claim
                .operator
                .commutator(&WeylOperator::derivative(dim, k))?
                .sub(&WeylOperator::scalar(dim, delta))?;
            entries.push(CommutatorResidual {
                j: claim.axis,
                k,
                residual,
                symbolic_residual: symbolic.max_abs_coeff(),
            });
        }
    }
    Ok(CrReport {
        probe_degree,
        entries,
    })
}
