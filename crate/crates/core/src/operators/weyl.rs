use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::scalar::Real;
use crate::series::TruncatedSeries;

/// Finite sum `sum c · z^alpha · D^beta` in normal order (z-powers left of D-powers).
///
/// Storage holds at most one coefficient per `(alpha, beta)` and never a zero
/// coefficient, so structural equality is operator equality.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylOperator<T: Real> {
    dim: usize,
    terms: BTreeMap<(MultiIndex, MultiIndex), Complex<T>>,
}

impl<T: Real> WeylOperator<T> {
    pub fn zero(dim: usize) -> Self {
        WeylOperator {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(dim: usize, c: Complex<T>) -> Self {
        Self::term(dim, c, MultiIndex::zeros(dim), MultiIndex::zeros(dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Complex::one())
    }

    /// Multiplication by `z_axis`.
    pub fn coordinate(dim: usize, axis: usize) -> Self {
        Self::term(
            dim,
            Complex::one(),
            MultiIndex::unit(dim, axis),
            MultiIndex::zeros(dim),
        )
    }

    /// Partial derivative along `axis`.
    pub fn derivative(dim: usize, axis: usize) -> Self {
        Self::term(
            dim,
            Complex::one(),
            MultiIndex::zeros(dim),
            MultiIndex::unit(dim, axis),
        )
    }

    pub fn term(dim: usize, c: Complex<T>, zpow: MultiIndex, dpow: MultiIndex) -> Self {
        assert_eq!(zpow.dim(), dim);
        assert_eq!(dpow.dim(), dim);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((zpow, dpow), c);
        }
        WeylOperator { dim, terms }
    }

    /// Collects `(c, alpha, beta)` triples, merging repeated monomials.
    pub fn from_terms(
        dim: usize,
        terms: impl IntoIterator<Item = (Complex<T>, MultiIndex, MultiIndex)>,
    ) -> Result<Self> {
        let mut out = Self::zero(dim);
        for (c, alpha, beta) in terms {
            if alpha.dim() != dim || beta.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: if alpha.dim() != dim {
                        alpha.dim()
                    } else {
                        beta.dim()
                    },
                });
            }
            out.accumulate(alpha, beta, c);
        }
        out.prune();
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Terms as `(coefficient, z-power, D-power)`.
    pub fn terms(&self) -> impl Iterator<Item = (Complex<T>, &MultiIndex, &MultiIndex)> {
        self.terms.iter().map(|((a, b), c)| (*c, a, b))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs_coeff(&self) -> T {
        self.terms
            .values()
            .map(|c| c.norm())
            .fold(T::zero(), T::max)
    }

    /// Highest total derivative order among the terms.
    pub fn derivative_order(&self) -> usize {
        self.terms.keys().map(|(_, b)| b.order()).max().unwrap_or(0)
    }

    /// Highest total power of `z` among the terms.
    pub fn multiplier_degree(&self) -> usize {
        self.terms.keys().map(|(a, _)| a.order()).max().unwrap_or(0)
    }

    fn accumulate(&mut self, alpha: MultiIndex, beta: MultiIndex, c: Complex<T>) {
        let slot = self
            .terms
            .entry((alpha, beta))
            .or_insert_with(Complex::zero);
        *slot += c;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.accumulate(a.clone(), b.clone(), *c);
        }
        out.prune();
        Ok(out)
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        let mut out = self.clone();
        out.terms.values_mut().for_each(|c| *c *= s);
        out.prune();
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-Complex::<T>::one()))
    }

    /// Operator product `self ∘ other` (apply `other` first), normal ordered.
    ///
    /// Uses `D^beta z^gamma = sum_k binom(beta, k) gamma!/(gamma-k)! z^(gamma-k) D^(beta-k)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.dim);
        for ((alpha, beta), c1) in &self.terms {
            for ((gamma, delta), c2) in &other.terms {
                for k in common_sub_indices(beta, gamma) {
                    let weight: T = beta.binomial::<T>(&k) * gamma.falling::<T>(&k);
                    let z = alpha.add(&gamma.checked_sub(&k).expect("k <= gamma"));
                    let d = beta.checked_sub(&k).expect("k <= beta").add(delta);
                    out.accumulate(z, d, *c1 * *c2 * weight);
                }
            }
        }
        out.prune();
        Ok(out)
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.sub(&other.compose(self)?)
    }

    /// `sum c · z^alpha · (D^beta f)`; exactness is the minimum over terms.
    pub fn apply(&self, f: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
        if f.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: f.dim(),
            });
        }
        let mut parts = Vec::with_capacity(self.terms.len());
        for ((alpha, beta), c) in &self.terms {
            let mut g = f.differentiate(beta);
            for axis in 0..self.dim {
                for _ in 0..alpha.get(axis) {
                    g = g.multiply_coordinate(axis)?;
                }
            }
            parts.push((*c, g));
        }
        if parts.is_empty() {
            return Ok(TruncatedSeries::zero(
                f.dim(),
                f.cutoff(),
                f.exact_degree(),
                f.is_polynomial(),
            ));
        }
        let refs: Vec<_> = parts.iter().map(|(c, g)| (*c, g)).collect();
        TruncatedSeries::linear_combine(&refs)
    }
}

fn common_sub_indices(a: &MultiIndex, b: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zeros(a.dim())];
    for axis in 0..a.dim() {
        let hi = a.get(axis).min(b.get(axis));
        out = out
            .into_iter()
            .flat_map(|m| (0..=hi).map(move |e| m.with(axis, e)))
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn canonical_commutation() {
        let d = WeylOperator::<f64>::derivative(1, 0);
        let z = WeylOperator::coordinate(1, 0);
        assert_eq!(d.commutator(&z).unwrap(), WeylOperator::identity(1));
        assert_eq!(
            z.commutator(&d).unwrap(),
            WeylOperator::scalar(1, c(-1.0, 0.0))
        );
    }

    #[test]
    fn d_minus_z_commutes_to_identity() {
        let t = WeylOperator::<f64>::derivative(1, 0)
            .sub(&WeylOperator::coordinate(1, 0))
            .unwrap();
        let d = WeylOperator::derivative(1, 0);
        assert_eq!(t.commutator(&d).unwrap(), WeylOperator::identity(1));
    }

    #[test]
    fn cross_axis_commutator_vanishes() {
        let t1 = WeylOperator::<f64>::derivative(2, 0)
            .sub(&WeylOperator::coordinate(2, 0))
            .unwrap();
        let d2 = WeylOperator::derivative(2, 1);
        assert!(t1.commutator(&d2).unwrap().is_zero());
    }

    #[test]
    fn normal_ordering_of_d_squared_z() {
        // D^2 z = z D^2 + 2 D
        let d2 = WeylOperator::<f64>::term(1, c(1.0, 0.0), idx(&[0]), idx(&[2]));
        let z = WeylOperator::coordinate(1, 0);
        let p = d2.compose(&z).unwrap();
        let expect = WeylOperator::from_terms(
            1,
            [
                (c(1.0, 0.0), idx(&[1]), idx(&[2])),
                (c(2.0, 0.0), idx(&[0]), idx(&[1])),
            ],
        )
        .unwrap();
        assert_eq!(p, expect);
    }

    #[test]
    fn apply_examples() {
        let z3 = TruncatedSeries::<f64>::monomial(1, 4, idx(&[3]), c(1.0, 0.0)).unwrap();
        let euler = WeylOperator::term(1, c(1.0, 0.0), idx(&[1]), idx(&[1]));
        let r = euler.apply(&z3).unwrap();
        assert_eq!(r.coeff(&idx(&[3])), c(3.0, 0.0));
        assert_eq!(r.nnz(), 1);
        assert_eq!(WeylOperator::identity(1).apply(&z3).unwrap(), z3);
    }

    #[test]
    fn dimension_checks() {
        let a = WeylOperator::<f64>::identity(1);
        let b = WeylOperator::<f64>::identity(2);
        assert!(a.commutator(&b).is_err());
        let f = TruncatedSeries::<f64>::zero(2, 2, 2, true);
        assert!(a.apply(&f).is_err());
    }
}
