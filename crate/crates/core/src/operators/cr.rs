use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::MultiIndex;
use crate::scalar::Real;
use crate::series::TruncatedSeries;

use super::convolution::ConvolutionSymbol;
use super::weyl::WeylOperator;

/// `T_j = M_{C_j} − a_j z_j` acting on `H(C^d)`.
///
/// Any continuous `T_j` with `[T_j, D_k] = δ_jk a_j I` has this shape:
/// `T_j + a_j z_j` commutes with every partial derivative and is therefore a
/// convolution operator. Storing the canonical form makes the commutation
/// relations hold by construction; [`super::verify_cr`] checks them anyway.
#[derive(Clone, Debug, PartialEq)]
pub struct CROperator<T: Real> {
    axis: usize,
    a: Complex<T>,
    conv: ConvolutionSymbol<T>,
}

impl<T: Real> CROperator<T> {
    pub fn new(axis: usize, a: Complex<T>, conv: ConvolutionSymbol<T>) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroConstant);
        }
        if axis >= conv.dim() {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: conv.dim(),
            });
        }
        Ok(CROperator { axis, a, conv })
    }

    /// `D_axis^order − a·z_axis`; order 1 and 2 give the Gaussian and Airy families.
    pub fn derivative_minus_z(dim: usize, axis: usize, order: u32, a: Complex<T>) -> Result<Self> {
        if axis >= dim {
            return Err(Error::AxisOutOfRange { axis, dim });
        }
        let conv = ConvolutionSymbol::from_differential(
            dim,
            [(MultiIndex::along(dim, axis, order), Complex::one())],
        )?;
        Self::new(axis, a, conv)
    }

    pub fn dim(&self) -> usize {
        self.conv.dim()
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn a(&self) -> Complex<T> {
        self.a
    }

    pub fn conv(&self) -> &ConvolutionSymbol<T> {
        &self.conv
    }

    /// Returns the operator with `extra` added to its convolution part.
    /// The commutation relations are unaffected.
    pub fn with_added_symbol(&self, extra: &ConvolutionSymbol<T>) -> Result<Self> {
        if extra.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: extra.dim(),
            });
        }
        let mut merged: std::collections::BTreeMap<MultiIndex, Complex<T>> =
            self.conv.iter().map(|(k, v)| (k.clone(), *v)).collect();
        for (k, v) in extra.iter() {
            let slot = merged.entry(k.clone()).or_insert_with(Complex::zero);
            *slot += *v;
        }
        Self::new(
            self.axis,
            self.a,
            ConvolutionSymbol::new(self.dim(), merged)?,
        )
    }

    pub fn to_weyl(&self) -> WeylOperator<T> {
        let dim = self.dim();
        self.conv
            .to_weyl()
            .sub(&WeylOperator::coordinate(dim, self.axis).scale(self.a))
            .expect("same dimension")
    }

    /// `T f = M_C f − a·z_axis·f`.
    pub fn apply(&self, f: &TruncatedSeries<T>) -> Result<TruncatedSeries<T>> {
        let conv = self.conv.apply(f)?;
        let shifted = f.multiply_coordinate(self.axis)?;
        TruncatedSeries::linear_combine(&[(Complex::one(), &conv), (-self.a, &shifted)])
    }

    /// Applies the operator `times` times.
    pub fn apply_n(&self, f: &TruncatedSeries<T>, times: usize) -> Result<TruncatedSeries<T>> {
        let mut g = f.clone();
        for _ in 0..times {
            g = self.apply(&g)?;
        }
        Ok(g)
    }
}
