//! Total-degree-truncated Taylor series of entire functions on `C^d`.
//!
//! A [`TruncatedSeries`] stores the coefficients `a_n` of `z^n` for
//! `|n| <= cutoff` together with an exactness bound: every coefficient with
//! `|n| <= exact_degree` is the true Taylor coefficient of the represented
//! function. Operations shrink that bound when they consume degrees
//! (differentiation) and never grow it past the cutoff.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::multi_index::{self, MultiIndex};
use crate::scalar::Real;

/// Default number of equispaced angles per axis for the semi-norm lower bound.
pub const GRID_ANGLES: usize = 64;
/// Largest dimension for which the grid lower bound is evaluated.
pub const GRID_MAX_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<T: Real> {
    dim: usize,
    cutoff: usize,
    exact_degree: i64,
    polynomial: bool,
    coeffs: BTreeMap<MultiIndex, Complex<T>>,
}

/// Result of [`TruncatedSeries::translate`].
///
/// `approximate` is set when the source was a non-polynomial truncation and
/// the shift was nonzero: the output is then the exact translate of the stored
/// polynomial, not of the represented function, and its exact degree is `-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Translation<T: Real> {
    pub series: TruncatedSeries<T>,
    pub approximate: bool,
}

/// Radius parameters of the semi-norm `p_m(g) = sup { |g(z)| : |z_j| <= m·epsilon }`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiNormSpec<T: Real> {
    pub m: u32,
    pub epsilon: T,
}

impl<T: Real> SemiNormSpec<T> {
    pub fn new(m: u32, epsilon: T) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "semi-norm index m must be >= 1".into(),
            ));
        }
        if !(epsilon > T::zero()) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(
                "epsilon must be positive and finite".into(),
            ));
        }
        Ok(SemiNormSpec { m, epsilon })
    }

    /// Polydisc radius `m·epsilon`.
    pub fn radius(&self) -> T {
        T::of_u64(self.m as u64) * self.epsilon
    }
}

/// Two-sided estimate of the sup of the stored polynomial on the polydisc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SemiNormBound<T: Real> {
    pub lower: T,
    pub upper: T,
}

impl<T: Real> TruncatedSeries<T> {
    /// Builds a series from explicit coefficients with `exact_degree = cutoff`.
    pub fn new(
        dim: usize,
        cutoff: usize,
        entries: impl IntoIterator<Item = (MultiIndex, Complex<T>)>,
        polynomial: bool,
    ) -> Result<Self> {
        Self::with_exact_degree(dim, cutoff, cutoff as i64, entries, polynomial)
    }

    /// Like [`new`](Self::new) but with a caller-declared exactness bound
    /// (clamped to `-1..=cutoff`; forced to `cutoff` for polynomials).
    pub fn with_exact_degree(
        dim: usize,
        cutoff: usize,
        exact_degree: i64,
        entries: impl IntoIterator<Item = (MultiIndex, Complex<T>)>,
        polynomial: bool,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        let mut coeffs = BTreeMap::new();
        for (idx, c) in entries {
            if idx.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: idx.dim(),
                });
            }
            if idx.order() > cutoff {
                return Err(Error::IndexExceedsCutoff {
                    index: idx.to_string(),
                    cutoff,
                });
            }
            if coeffs.contains_key(&idx) {
                return Err(Error::DuplicateIndex(idx.to_string()));
            }
            coeffs.insert(idx, c);
        }
        coeffs.retain(|_, c| !c.is_zero());
        let exact_degree = if polynomial {
            cutoff as i64
        } else {
            exact_degree.clamp(-1, cutoff as i64)
        };
        Ok(TruncatedSeries {
            dim,
            cutoff,
            exact_degree,
            polynomial,
            coeffs,
        })
    }

    pub fn zero(dim: usize, cutoff: usize, exact_degree: i64, polynomial: bool) -> Self {
        TruncatedSeries {
            dim,
            cutoff,
            exact_degree: if polynomial {
                cutoff as i64
            } else {
                exact_degree.clamp(-1, cutoff as i64)
            },
            polynomial,
            coeffs: BTreeMap::new(),
        }
    }

    /// The polynomial `c·z^idx`.
    pub fn monomial(dim: usize, cutoff: usize, idx: MultiIndex, c: Complex<T>) -> Result<Self> {
        Self::new(dim, cutoff, [(idx, c)], true)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn exact_degree(&self) -> i64 {
        self.exact_degree
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Complex<T> {
        self.coeffs.get(idx).copied().unwrap_or_else(Complex::zero)
    }

    /// Nonzero stored coefficients in graded-lex order.
    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Complex<T>)> {
        self.coeffs.iter()
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest total degree carrying a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(MultiIndex::order).max()
    }

    /// Whether the coefficient of `z^idx` is guaranteed exact.
    pub fn is_exact_at(&self, idx: &MultiIndex) -> bool {
        self.polynomial || (idx.order() as i64) <= self.exact_degree
    }

    /// Drops every coefficient outside the exactness region.
    pub fn exact_part(&self) -> Self {
        if self.polynomial {
            return self.clone();
        }
        let mut out = self.clone();
        let e = self.exact_degree;
        out.coeffs.retain(|idx, _| idx.order() as i64 <= e);
        out
    }

    /// Largest coefficient magnitude on the exactness region.
    pub fn max_abs_exact(&self) -> T {
        self.coeffs
            .iter()
            .filter(|(idx, _)| self.is_exact_at(idx))
            .map(|(_, c)| c.norm())
            .fold(T::zero(), T::max)
    }

    /// Re-truncates to total degree `degree <= cutoff`.
    pub fn truncate(&self, degree: usize) -> Self {
        let degree = degree.min(self.cutoff);
        let mut dropped = false;
        let coeffs: BTreeMap<_, _> = self
            .coeffs
            .iter()
            .filter(|(idx, _)| {
                let keep = idx.order() <= degree;
                dropped |= !keep;
                keep
            })
            .map(|(k, v)| (k.clone(), *v))
            .collect();
        let polynomial = self.polynomial && !dropped;
        let exact_degree = if self.polynomial {
            degree as i64
        } else {
            self.exact_degree.min(degree as i64)
        };
        TruncatedSeries {
            dim: self.dim,
            cutoff: degree,
            exact_degree,
            polynomial,
            coeffs,
        }
    }

    /// Coefficient vector over all monomials of degree `<= degree` in graded-lex order.
    pub fn dense(&self, degree: usize) -> Vec<Complex<T>> {
        multi_index::indices_up_to(self.dim, degree)
            .iter()
            .map(|idx| self.coeff(idx))
            .collect()
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|v| *v *= c);
        out.coeffs.retain(|_, v| !v.is_zero());
        out
    }

    /// `sum_i c_i f_i` over series sharing dimension and cutoff.
    pub fn linear_combine(terms: &[(Complex<T>, &TruncatedSeries<T>)]) -> Result<Self> {
        let (_, first) = terms.first().ok_or(Error::Empty("linear combination"))?;
        let (dim, cutoff) = (first.dim, first.cutoff);
        let mut coeffs: BTreeMap<MultiIndex, Complex<T>> = BTreeMap::new();
        let mut exact_degree = i64::MAX;
        let mut polynomial = true;
        for (c, f) in terms {
            if f.dim != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    got: f.dim,
                });
            }
            if f.cutoff != cutoff {
                return Err(Error::ShapeMismatch(format!(
                    "cutoff {} vs {}",
                    cutoff, f.cutoff
                )));
            }
            exact_degree = exact_degree.min(f.exact_degree);
            polynomial &= f.polynomial;
            for (idx, v) in &f.coeffs {
                let slot = coeffs.entry(idx.clone()).or_insert_with(Complex::zero);
                *slot += *c * *v;
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        let exact_degree = if polynomial {
            cutoff as i64
        } else {
            exact_degree
        };
        Ok(TruncatedSeries {
            dim,
            cutoff,
            exact_degree,
            polynomial,
            coeffs,
        })
    }

    /// `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::linear_combine(&[(Complex::one(), self), (-Complex::<T>::one(), other)])
    }

    /// Partial derivative `D^order f`.
    pub fn differentiate(&self, order: &MultiIndex) -> Self {
        assert_eq!(
            order.dim(),
            self.dim,
            "derivative order has wrong dimension"
        );
        let mut coeffs = BTreeMap::new();
        for (idx, v) in &self.coeffs {
            if let Some(m) = idx.checked_sub(order) {
                let factor: T = idx.falling(order);
                coeffs.insert(m, *v * factor);
            }
        }
        let exact_degree = if self.polynomial {
            self.cutoff as i64
        } else {
            (self.exact_degree - order.order() as i64).max(-1)
        };
        TruncatedSeries {
            dim: self.dim,
            cutoff: self.cutoff,
            exact_degree,
            polynomial: self.polynomial,
            coeffs,
        }
    }

    /// `z_axis · f`, dropping whatever is pushed past the cutoff.
    pub fn multiply_coordinate(&self, axis: usize) -> Result<Self> {
        if axis >= self.dim {
            return Err(Error::AxisOutOfRange {
                axis,
                dim: self.dim,
            });
        }
        let e = MultiIndex::unit(self.dim, axis);
        let mut dropped = false;
        let mut coeffs = BTreeMap::new();
        for (idx, v) in &self.coeffs {
            let shifted = idx.add(&e);
            if shifted.order() > self.cutoff {
                dropped = true;
            } else {
                coeffs.insert(shifted, *v);
            }
        }
        let polynomial = self.polynomial && !dropped;
        let exact_degree = (self.exact_degree + 1).min(self.cutoff as i64);
        Ok(TruncatedSeries {
            dim: self.dim,
            cutoff: self.cutoff,
            exact_degree,
            polynomial,
            coeffs,
        })
    }

    /// `S_lambda f(z) = f(z + lambda)`, re-expanded at the origin.
    pub fn translate(&self, lambda: &[Complex<T>]) -> Result<Translation<T>> {
        if lambda.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: lambda.len(),
            });
        }
        if lambda.iter().all(|l| l.is_zero()) {
            return Ok(Translation {
                series: self.clone(),
                approximate: false,
            });
        }
        let mut coeffs: BTreeMap<MultiIndex, Complex<T>> = BTreeMap::new();
        for (n, a) in &self.coeffs {
            for m in sub_indices(n) {
                let k = n.checked_sub(&m).expect("m <= n");
                let w = *a * n.binomial::<T>(&m) * k.monomial(lambda);
                let slot = coeffs.entry(m).or_insert_with(Complex::zero);
                *slot += w;
            }
        }
        coeffs.retain(|_, v| !v.is_zero());
        let (exact_degree, approximate) = if self.polynomial {
            (self.cutoff as i64, false)
        } else {
            (-1, true)
        };
        Ok(Translation {
            series: TruncatedSeries {
                dim: self.dim,
                cutoff: self.cutoff,
                exact_degree,
                polynomial: self.polynomial,
                coeffs,
            },
            approximate,
        })
    }

    /// Value of the stored polynomial at `z` (no tail correction).
    pub fn evaluate(&self, z: &[Complex<T>]) -> Result<Complex<T>> {
        if z.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: z.len(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .fold(Complex::zero(), |acc, (idx, a)| acc + *a * idx.monomial(z)))
    }

    /// Coefficient majorant `sum |a_n| r^|n|`, an upper bound for `sup |f|`
    /// on the polydisc of radius `r`.
    pub fn majorant(&self, r: T) -> T {
        self.coeffs
            .iter()
            .map(|(idx, a)| a.norm() * r.powi(idx.order() as i32))
            .sum::<T>()
    }

    /// Bounds on `sup |f|` over the polydisc of radius `m·epsilon`.
    ///
    /// `upper` is the coefficient majorant `sum |a_n| r^|n|`. `lower` is the
    /// largest modulus on a grid of the distinguished boundary for `d <= 3`,
    /// and `|a_0|` otherwise.
    pub fn seminorm_bound(&self, spec: &SemiNormSpec<T>) -> SemiNormBound<T> {
        let r = spec.radius();
        let upper = self.majorant(r);
        let lower = if self.dim <= GRID_MAX_DIM {
            self.grid_max_modulus(r, GRID_ANGLES)
        } else {
            self.coeff(&MultiIndex::zeros(self.dim)).norm()
        };
        SemiNormBound {
            lower: lower.min(upper),
            upper,
        }
    }

    fn grid_max_modulus(&self, r: T, angles: usize) -> T {
        if self.coeffs.is_empty() {
            return T::zero();
        }
        let max_exp = self.degree().unwrap_or(0);
        // powers[e][t] = (r e^{2 pi i t / angles})^e
        let step = T::of(2.0) * T::PI() / T::of_u64(angles as u64);
        let points: Vec<Complex<T>> = (0..angles)
            .map(|t| Complex::from_polar(r, step * T::of_u64(t as u64)))
            .collect();
        let powers: Vec<Vec<Complex<T>>> = (0..=max_exp)
            .map(|e| points.iter().map(|p| p.powu(e as u32)).collect())
            .collect();
        let total = angles.pow(self.dim as u32);
        let mut best = T::zero();
        let mut grid = vec![0usize; self.dim];
        for flat in 0..total {
            let mut rem = flat;
            for g in grid.iter_mut() {
                *g = rem % angles;
                rem /= angles;
            }
            let v = self.coeffs.iter().fold(Complex::zero(), |acc, (idx, a)| {
                let mono = idx
                    .entries()
                    .iter()
                    .zip(&grid)
                    .fold(Complex::one(), |m, (&e, &t)| m * powers[e as usize][t]);
                acc + *a * mono
            });
            best = best.max(v.norm());
        }
        best
    }
}

/// All `m` with `m <= n` componentwise.
fn sub_indices(n: &MultiIndex) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zeros(n.dim())];
    for axis in 0..n.dim() {
        out = out
            .into_iter()
            .flat_map(|m| (0..=n.get(axis)).map(move |e| m.with(axis, e)))
            .collect();
    }
    out
}
