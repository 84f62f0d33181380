//! Dense complex SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! Column pairs of a working copy of `A` are rotated until mutually
//! orthogonal; the column norms are then the singular values and the
//! accumulated rotations form `V`. Deterministic for a fixed input.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::scalar::Real;

const MAX_SWEEPS: usize = 80;

/// `A = U Σ V^H` with singular values sorted in descending order.
///
/// `u[i]` and `v[i]` are the i-th left and right singular vectors (columns).
/// Left vectors of zero singular values are zero.
#[derive(Clone, Debug)]
pub struct Svd<T: Real> {
    pub singular_values: Vec<T>,
    pub u: Vec<Vec<Complex<T>>>,
    pub v: Vec<Vec<Complex<T>>>,
}

/// SVD of the `m × n` matrix given as rows.
pub fn svd<T: Real>(rows: &[Vec<Complex<T>>]) -> Svd<T> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut cols: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| rows.iter().map(|r| r[j]).collect())
        .collect();
    let mut v: Vec<Vec<Complex<T>>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex::zero(); n];
            e[j] = Complex::one();
            e
        })
        .collect();
    let tol = T::epsilon() * T::of_u64(m.max(1) as u64);

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha: T = cols[p].iter().map(|x| x.norm_sqr()).sum();
                let beta: T = cols[q].iter().map(|x| x.norm_sqr()).sum();
                let gamma = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold(Complex::<T>::zero(), |acc, (x, y)| acc + x.conj() * y);
                let g = gamma.norm();
                if g.is_zero() || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // phase-align column q so the pair's inner product is real
                let phase = (gamma / g).conj();
                let zeta = (beta - alpha) / (T::of(2.0) * g);
                let sign = if zeta >= T::zero() {
                    T::one()
                } else {
                    -T::one()
                };
                let t = sign / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                rotate(&mut cols, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(T, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, col)| (col.iter().map(|x| x.norm_sqr()).sum::<T>().sqrt(), j))
        .collect();
    order.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });

    let mut singular_values = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for (sigma, j) in order {
        singular_values.push(sigma);
        let col = if sigma > T::zero() {
            cols[j].iter().map(|x| *x / sigma).collect()
        } else {
            vec![Complex::zero(); m]
        };
        u.push(col);
        vs.push(v[j].clone());
    }
    Svd {
        singular_values,
        u,
        v: vs,
    }
}

fn rotate<T: Real>(
    cols: &mut [Vec<Complex<T>>],
    p: usize,
    q: usize,
    phase: Complex<T>,
    c: T,
    s: T,
) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let w = *y * phase;
        let nx = *x * c - w * s;
        let ny = *x * s + w * c;
        *x = nx;
        *y = ny;
    }
}

/// Singular values only.
pub fn singular_values<T: Real>(rows: &[Vec<Complex<T>>]) -> Vec<T> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    // orthogonalize the shorter dimension
    if m < n {
        svd(&conjugate_transpose(rows)).singular_values
    } else {
        svd(rows).singular_values
    }
}

pub fn conjugate_transpose<T: Real>(rows: &[Vec<Complex<T>>]) -> Vec<Vec<Complex<T>>> {
    let n = rows.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| rows.iter().map(|r| r[j].conj()).collect())
        .collect()
}

/// Minimum-norm least-squares solution of `A x ≈ b`, discarding singular
/// values below `rcond · σ_max`.
pub fn least_squares<T: Real>(
    rows: &[Vec<Complex<T>>],
    b: &[Complex<T>],
    rcond: T,
) -> Vec<Complex<T>> {
    let n = rows.first().map_or(0, Vec::len);
    let dec = svd(rows);
    let cutoff = dec.singular_values.first().copied().unwrap_or_else(T::zero) * rcond;
    let mut x = vec![Complex::zero(); n];
    for ((sigma, u), v) in dec.singular_values.iter().zip(&dec.u).zip(&dec.v) {
        if *sigma <= cutoff || sigma.is_zero() {
            continue;
        }
        let proj = u
            .iter()
            .zip(b)
            .fold(Complex::zero(), |acc, (ui, bi)| acc + ui.conj() * bi)
            / *sigma;
        for (xi, vi) in x.iter_mut().zip(v) {
            *xi += *vi * proj;
        }
    }
    x
}
