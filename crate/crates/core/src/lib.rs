//! Truncated Taylor-series calculus for operators `T_j` on entire functions
//! of several complex variables satisfying `[T_j, D_k] = δ_jk a_j I`.
//!
//! The crate covers series arithmetic ([`series`]), the operator algebra
//! ([`operators`]), joint kernels of separable operators ([`kernel`]),
//! numerical completeness tests for derivative and translate spans
//! ([`completeness`]), the ladder calculus behind the frequent
//! hypercyclicity criterion ([`fhc`]) and finite orbit statistics
//! ([`orbit`]).
//!
//! Everything numeric is generic over a real scalar `T: Real` (`f32` or
//! `f64`) with coefficients in `Complex<T>`; the symbolic `H_0` vectors are
//! generic over any [`FieldScalar`], exact rationals included. The aliases
//! below fix `f64`.
//!
//! ```
//! use crcalc::{c64, AxisKernelProblem, Series};
//! use crcalc::kernel::solve_kernel_axis;
//!
//! // exp(z^2 / 2) spans the kernel of D - z
//! let f: Series = solve_kernel_axis(&AxisKernelProblem::gaussian(c64(1.0, 0.0), 6)).unwrap();
//! let two = crcalc::MultiIndex::new(vec![2]);
//! assert!((f.coeff(&two).re - 0.5).abs() < 1e-15);
//! ```

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod completeness;
pub mod error;
pub mod fhc;
pub mod kernel;
pub mod linalg;
pub mod multi_index;
pub mod operators;
pub mod orbit;
pub mod scalar;
pub mod series;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;

pub use completeness::{Approximation, CompletenessReport, RowLabel, SpanMatrix};
pub use error::{Error, Result};
pub use fhc::{FhcReport, H0Vector};
pub use kernel::{AxisKernelProblem, KernelReport};
pub use multi_index::MultiIndex;
pub use operators::{CROperator, ConvolutionSymbol, CrReport, WeylOperator};
pub use orbit::OrbitRecord;
pub use scalar::{FieldScalar, Real};
pub use series::{SemiNormBound, SemiNormSpec, Translation, TruncatedSeries};

pub type C64 = Complex<f64>;
pub type Series = TruncatedSeries<f64>;
pub type Series32 = TruncatedSeries<f32>;
pub type Weyl = WeylOperator<f64>;
pub type Symbol = ConvolutionSymbol<f64>;
pub type CrOp = CROperator<f64>;
pub type KernelProblem = AxisKernelProblem<f64>;
pub type SemiNorm = SemiNormSpec<f64>;
/// `H_0` vectors with floating complex coefficients.
pub type H0 = H0Vector<C64>;
/// `H_0` vectors with exact rational coefficients.
pub type ExactH0 = H0Vector<BigRational>;

/// `re + i·im` as a [`C64`].
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// The rational `n / d`.
///
/// # Panics
/// If `d == 0`.
pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
