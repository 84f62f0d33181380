//! Completeness of derivative and translate systems at finite truncation.
//!
//! A system is complete in `H(C^d)` when its finite linear combinations are
//! dense. From finite data we can only test the projection onto polynomials
//! of total degree `<= N`: the system is *complete at truncation* when those
//! projections span all `binom(N+d, d)` monomials. Nothing here decides
//! completeness in the full space; see [`rank_trajectory`] for the trend as
//! `N` grows.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg;
use crate::multi_index::{basis_size, indices_up_to, MultiIndex};
use crate::scalar::Real;
use crate::series::TruncatedSeries;

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub enum RowLabel<T: Real> {
    /// Row is the truncation of `D^n f`.
    Derivative(MultiIndex),
    /// Row is the truncation of `f(· + λ)`.
    Translate(Vec<Complex<T>>),
}

/// Coefficient rows over the graded-lex monomial basis of degree `<= degree`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanMatrix<T: Real> {
    pub rows: Vec<Vec<Complex<T>>>,
    pub labels: Vec<RowLabel<T>>,
    pub degree: usize,
    pub dim: usize,
    /// Rows are translates of a non-polynomial truncation.
    pub approximate: bool,
}

impl<T: Real> SpanMatrix<T> {
    pub fn ambient_dim(&self) -> usize {
        basis_size(self.dim, self.degree)
    }

    /// Multiplies row `i` by `s`.
    pub fn scale_row(&mut self, i: usize, s: Complex<T>) {
        self.rows[i].iter_mut().for_each(|x| *x *= s);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompletenessReport<T: Real> {
    pub rank: usize,
    pub ambient_dim: usize,
    pub complete_at_truncation: bool,
    /// Singular values of the row-normalized matrix, descending.
    pub singular_values: Vec<T>,
    pub tolerance: T,
}

/// Rows `D^n f` truncated to `degree`, for every `|n| <= max_order`.
pub fn derivative_span<T: Real>(
    f: &TruncatedSeries<T>,
    degree: usize,
    max_order: usize,
) -> Result<SpanMatrix<T>> {
    let required = degree + max_order;
    if !f.is_polynomial() && f.exact_degree() < required as i64 {
        return Err(Error::InsufficientExactness {
            required,
            available: f.exact_degree(),
        });
    }
    let orders = indices_up_to(f.dim(), max_order);
    let rows = orders
        .iter()
        .map(|n| f.differentiate(n).dense(degree))
        .collect();
    Ok(SpanMatrix {
        rows,
        labels: orders.into_iter().map(RowLabel::Derivative).collect(),
        degree,
        dim: f.dim(),
        approximate: false,
    })
}

/// Rows `f(· + λ)` truncated to `degree`, one per sample point.
///
/// For non-polynomial `f` each row translates the stored polynomial, and the
/// matrix is flagged approximate.
pub fn translate_span<T: Real>(
    f: &TruncatedSeries<T>,
    degree: usize,
    samples: &[Vec<Complex<T>>],
) -> Result<SpanMatrix<T>> {
    if samples.is_empty() {
        return Err(Error::Empty("translate samples"));
    }
    let mut rows = Vec::with_capacity(samples.len());
    let mut approximate = false;
    for lambda in samples {
        let t = f.translate(lambda)?;
        approximate |= t.approximate;
        rows.push(t.series.dense(degree));
    }
    Ok(SpanMatrix {
        rows,
        labels: samples.iter().cloned().map(RowLabel::Translate).collect(),
        degree,
        dim: f.dim(),
        approximate,
    })
}

/// Numerical rank after scaling every nonzero row to unit max-magnitude.
///
/// Singular values at or below `tolerance · σ_max` count as zero.
pub fn rank_report<T: Real>(m: &SpanMatrix<T>, tolerance: T) -> Result<CompletenessReport<T>> {
    if m.rows.is_empty() {
        return Err(Error::Empty("span matrix"));
    }
    if !(tolerance > T::zero()) {
        return Err(Error::InvalidParameter(
            "rank tolerance must be positive".into(),
        ));
    }
    let ambient_dim = m.ambient_dim();
    let normalized: Vec<Vec<Complex<T>>> = m.rows.iter().map(|r| normalize_row(r)).collect();
    let singular_values = linalg::singular_values(&normalized);
    let top = singular_values.first().copied().unwrap_or_else(T::zero);
    let rank = if top > T::zero() {
        singular_values
            .iter()
            .filter(|s| **s > tolerance * top)
            .count()
    } else {
        0
    };
    Ok(CompletenessReport {
        rank,
        ambient_dim,
        complete_at_truncation: rank == ambient_dim,
        singular_values,
        tolerance,
    })
}

fn normalize_row<T: Real>(row: &[Complex<T>]) -> Vec<Complex<T>> {
    let peak = row.iter().map(|x| x.norm()).fold(T::zero(), T::max);
    if peak > T::zero() {
        row.iter().map(|x| *x / peak).collect()
    } else {
        row.to_vec()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation<T: Real> {
    /// `c_n` for every `|n| <= max_order`, graded-lex.
    pub coefficients: Vec<(MultiIndex, Complex<T>)>,
    /// Euclidean norm of the coefficient defect on degrees `<= degree`.
    pub residual: T,
}

/// Least-squares fit `sum c_n D^n f ≈ target` in the degree-`<= degree` coefficient norm.
pub fn approximate_target<T: Real>(
    f: &TruncatedSeries<T>,
    target: &TruncatedSeries<T>,
    degree: usize,
    max_order: usize,
) -> Result<Approximation<T>> {
    if target.dim() != f.dim() {
        return Err(Error::DimMismatch {
            expected: f.dim(),
            got: target.dim(),
        });
    }
    if !target.is_polynomial() || target.degree().unwrap_or(0) > degree {
        return Err(Error::InvalidParameter(format!(
            "target must be a polynomial of degree <= {degree}"
        )));
    }
    let span = derivative_span(f, degree, max_order)?;
    let b = target.dense(degree);
    // columns are the (scaled) rows of the span
    let scales: Vec<T> = span
        .rows
        .iter()
        .map(|r| r.iter().map(|x| x.norm()).fold(T::zero(), T::max))
        .collect();
    let scaled: Vec<Vec<Complex<T>>> = span.rows.iter().map(|r| normalize_row(r)).collect();
    let system = transpose(&scaled);
    let rcond = T::epsilon() * T::of_u64(10 * system.len().max(scaled.len()) as u64);
    let y = linalg::least_squares(&system, &b, rcond);
    let coeffs: Vec<Complex<T>> = y
        .iter()
        .zip(&scales)
        .map(|(yi, s)| {
            if *s > T::zero() {
                *yi / *s
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
        .collect();

    let residual = (0..b.len())
        .map(|i| {
            let fit = span
                .rows
                .iter()
                .zip(&coeffs)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (r, c)| {
                    acc + r[i] * c
                });
            (fit - b[i]).norm_sqr()
        })
        .sum::<T>()
        .sqrt();

    let coefficients = span
        .labels
        .into_iter()
        .zip(coeffs)
        .map(|(label, c)| match label {
            RowLabel::Derivative(n) => (n, c),
            RowLabel::Translate(_) => unreachable!("derivative span"),
        })
        .collect();
    Ok(Approximation {
        coefficients,
        residual,
    })
}

fn transpose<T: Real>(rows: &[Vec<Complex<T>>]) -> Vec<Vec<Complex<T>>> {
    let n = rows.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect()
}

/// `(N, rank, ambient)` for `N = 0..=max_degree` with `max_order = N`.
pub fn rank_trajectory<T: Real>(
    f: &TruncatedSeries<T>,
    max_degree: usize,
    tolerance: T,
) -> Result<Vec<(usize, usize, usize)>> {
    (0..=max_degree)
        .map(|n| {
            let r = rank_report(&derivative_span(f, n, n)?, tolerance)?;
            Ok((n, r.rank, r.ambient_dim))
        })
        .collect()
}
