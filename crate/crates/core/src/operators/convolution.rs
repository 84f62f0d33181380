use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::scalar::Real;
use crate::series::TruncatedSeries;

use super::weyl::WeylOperator;

/// Polynomial characteristic function `F^(lambda) = sum b_n lambda^n / n!`.
///
/// The associated convolution operator is `M_F f = sum b_n D^n f / n!`, a
/// constant-coefficient differential operator of finite order. Only finitely
/// supported symbols are represented.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvolutionSymbol<T: Real> {
    dim: usize,
    bcoeffs: BTreeMap<MultiIndex, Complex<T>>,
}

impl<T: Real> ConvolutionSymbol<T> {
    /// Symbol from its Taylor data `b_n`.
    pub fn new(
        dim: usize,
        entries: impl IntoIterator<Item = (MultiIndex, Complex<T>)>,
    ) -> Result<Self> {
        let mut bcoeffs = BTreeMap::new();
        for (idx, b) in entries {
            if idx.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: idx.dim(),
                });
            }
            if bcoeffs.insert(idx.clone(), b).is_some() {
                return Err(Error::DuplicateIndex(idx.to_string()));
            }
        }
        bcoeffs.retain(|_, b: &mut Complex<T>| !b.is_zero());
        Ok(ConvolutionSymbol { dim, bcoeffs })
    }

    /// Symbol of the differential operator `sum c_n D^n`, i.e. `b_n = n! c_n`.
    pub fn from_differential(
        dim: usize,
        entries: impl IntoIterator<Item = (MultiIndex, Complex<T>)>,
    ) -> Result<Self> {
        let entries: Vec<_> = entries.into_iter().collect();
        let scaled = entries.into_iter().map(|(n, c)| {
            let f: T = n.factorial();
            (n, c * f)
        });
        Self::new(dim, scaled)
    }

    /// The point evaluation at 0 (`b_0 = 1`), acting as the identity.
    pub fn dirac(dim: usize) -> Self {
        let mut bcoeffs = BTreeMap::new();
        bcoeffs.insert(MultiIndex::zeros(dim), Complex::new(T::one(), T::zero()));
        ConvolutionSymbol { dim, bcoeffs }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn b(&self, idx: &MultiIndex) -> Complex<T> {
        self.bcoeffs.get(idx).copied().unwrap_or_else(Complex::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex<T>)> {
        self.bcoeffs.iter()
    }

    /// Coefficient of `D^n` in the differential form, `b_n / n!`.
    pub fn differential_coeff(&self, idx: &MultiIndex) -> Complex<T> {
        self.b(idx) / idx.factorial::<T>()
    }

    /// Largest total degree in the support (0 for the empty symbol).
    pub fn max_degree(&self) -> usize {
        self.bcoeffs
            .keys()
            .map(MultiIndex::order)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.bcoeffs.is_empty()
    }

    /// Support confined to multiples of `e_axis`.
    pub fn is_single_axis(&self, axis: usize) -> bool {
        self.bcoeffs
            .keys()
            .all(|n| (0..self.dim).all(|i| i == axis || n.get(i) == 0))
    }

    pub fn to_weyl(&self) -> WeylOperator<T> {
        let zero = MultiIndex::zeros(self.dim);
        WeylOperator::from_terms(
            self.dim,
            self.bcoeffs
                .keys()
                .map(|n| (self.differential_coeff(n), zero.clone(), n.clone())),
        )
        .expect("dimensions agree by construction")
    }

    /// `M_F f = sum_n b_n D^n f / n!`.
    pub fn apply(&self, f: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
        if f.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: f.dim(),
            });
        }
        if self.bcoeffs.is_empty() {
            let e = if f.is_polynomial() {
                f.cutoff() as i64
            } else {
                f.exact_degree()
            };
            return Ok(TruncatedSeries::zero(
                f.dim(),
                f.cutoff(),
                e,
                f.is_polynomial(),
            ));
        }
        let parts: Vec<(Complex<T>, TruncatedSeries<T>)> = self
            .bcoeffs
            .keys()
            .map(|n| (self.differential_coeff(n), f.differentiate(n)))
            .collect();
        let refs: Vec<_> = parts.iter().map(|(c, g)| (*c, g)).collect();
        TruncatedSeries::linear_combine(&refs)
    }

    /// `(F, f) = sum_n a_n b_n`.
    ///
    /// Fails when the symbol reaches past the exactness region of a
    /// non-polynomial `f`, since the pairing is then not determined by the
    /// stored coefficients.
    pub fn dual_pairing(&self, f: &TruncatedSeries<T>) -> Result<Complex<T>> {
        if f.dim() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: f.dim(),
            });
        }
        if !f.is_polynomial() && !self.is_zero() && self.max_degree() as i64 > f.exact_degree() {
            return Err(Error::PairingUndetermined {
                symbol_degree: self.max_degree(),
                exact_degree: f.exact_degree(),
            });
        }
        Ok(self
            .bcoeffs
            .iter()
            .fold(Complex::zero(), |acc, (n, b)| acc + *b * f.coeff(n)))
    }

    /// `F^(lambda) = sum_n b_n lambda^n / n!`.
    pub fn characteristic(&self, lambda: &[Complex<T>]) -> Result<Complex<T>> {
        if lambda.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: lambda.len(),
            });
        }
        Ok(self.bcoeffs.iter().fold(Complex::zero(), |acc, (n, b)| {
            acc + *b * n.monomial(lambda) / n.factorial::<T>()
        }))
    }
}

/// Truncation of `exp(<w, z>)` to total degree `degree` (exact up to `degree`).
pub fn exponential<T: Real>(w: &[Complex<T>], degree: usize) -> TruncatedSeries<T> {
    let entries = crate::multi_index::indices_up_to(w.len(), degree)
        .into_iter()
        .map(|n| {
            let v = n.monomial(w) / n.factorial::<T>();
            (n, v)
        });
    TruncatedSeries::new(w.len(), degree, entries, false).expect("indices are within the cutoff")
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

    fn poly(entries: &[(&[u32], f64)], cutoff: usize) -> TruncatedSeries<f64> {
        TruncatedSeries::new(
            entries[0].0.len(),
            cutoff,
            entries.iter().map(|(i, v)| (idx(i), c(*v, 0.0))),
            true,
        )
        .unwrap()
    }

    fn gaussian6() -> TruncatedSeries<f64> {
        TruncatedSeries::new(
            1,
            6,
            [(0, 1.0), (2, 0.5), (4, 0.125), (6, 1.0 / 48.0)]
                .iter()
                .map(|&(k, v)| (idx(&[k]), c(v, 0.0))),
            false,
        )
        .unwrap()
    }

    #[test]
    fn apply_examples() {
        let f = poly(&[(&[0], 2.0), (&[1], -1.0), (&[3], 4.0)], 5);
        assert_eq!(ConvolutionSymbol::dirac(1).apply(&f).unwrap(), f);

        let d = ConvolutionSymbol::new(1, [(idx(&[1]), c(1.0, 0.0))]).unwrap();
        assert_eq!(d.apply(&f).unwrap(), f.differentiate(&idx(&[1])));

        let d2 = ConvolutionSymbol::new(1, [(idx(&[2]), c(2.0, 0.0))]).unwrap();
        let z3 = poly(&[(&[3], 1.0)], 3);
        let r = d2.apply(&z3).unwrap();
        assert_eq!(r.coeff(&idx(&[1])), c(6.0, 0.0));
        assert_eq!(r.nnz(), 1);

        let g = gaussian6();
        assert_eq!(d2.apply(&g).unwrap().exact_degree(), 4);
    }

    #[test]
    fn pairing_examples() {
        let g = gaussian6();
        assert_eq!(
            ConvolutionSymbol::dirac(1).dual_pairing(&g).unwrap(),
            c(1.0, 0.0)
        );

        let b1 = ConvolutionSymbol::new(1, [(idx(&[1]), c(1.0, 0.0))]).unwrap();
        let f = poly(&[(&[1], 3.0), (&[2], 1.0)], 2);
        assert_eq!(b1.dual_pairing(&f).unwrap(), c(3.0, 0.0));

        let b2 = ConvolutionSymbol::new(1, [(idx(&[2]), c(2.0, 0.0))]).unwrap();
        let z3 = poly(&[(&[3], 1.0)], 3);
        let shifted = z3.translate(&[c(1.0, 0.0)]).unwrap().series;
        assert_eq!(b2.dual_pairing(&shifted).unwrap(), c(6.0, 0.0));

        let high = ConvolutionSymbol::new(1, [(idx(&[7]), c(1.0, 0.0))]).unwrap();
        assert!(matches!(
            high.dual_pairing(&g),
            Err(Error::PairingUndetermined { .. })
        ));
    }

    #[test]
    fn characteristic_examples() {
        assert_eq!(
            ConvolutionSymbol::<f64>::dirac(1)
                .characteristic(&[c(5.0, 1.0)])
                .unwrap(),
            c(1.0, 0.0)
        );
        let b1 = ConvolutionSymbol::new(1, [(idx(&[1]), c(1.0, 0.0))]).unwrap();
        assert_eq!(b1.characteristic(&[c(2.0, 0.0)]).unwrap(), c(2.0, 0.0));
        let b2 = ConvolutionSymbol::new(1, [(idx(&[2]), c(2.0, 0.0))]).unwrap();
        assert_eq!(b2.characteristic(&[c(3.0, 0.0)]).unwrap(), c(9.0, 0.0));
    }

    #[test]
    fn laplace_consistency() {
        let sym = ConvolutionSymbol::new(
            2,
            [
                (idx(&[0, 0]), c(0.5, 0.0)),
                (idx(&[1, 2]), c(-1.0, 2.0)),
                (idx(&[3, 0]), c(0.25, 0.0)),
            ],
        )
        .unwrap();
        let w = [c(0.3, -0.2), c(-1.1, 0.4)];
        let e = exponential(&w, sym.max_degree());
        let lhs = sym.dual_pairing(&e).unwrap();
        let rhs = sym.characteristic(&w).unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn differential_form_roundtrip() {
        let s = ConvolutionSymbol::<f64>::from_differential(1, [(idx(&[2]), c(1.0, 0.0))]).unwrap();
        assert_eq!(s.b(&idx(&[2])), c(2.0, 0.0));
        assert_eq!(s.differential_coeff(&idx(&[2])), c(1.0, 0.0));
        assert!(s.is_single_axis(0));
    }
}
