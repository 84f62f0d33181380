//! Multi-indices `n = (n_1, ..., n_d)` and the graded-lex monomial basis.

use std::cmp::Ordering;
use std::fmt;

use crate::scalar::Real;

/// A d-tuple of non-negative integers.
///
/// Ordering is graded lexicographic: first by total order `|n|`, then
/// lexicographically by entries, so in two variables the degree-2 block is
/// `(0,2) < (1,1) < (2,0)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    /// The unit index `e_axis`.
    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        MultiIndex(v)
    }

    /// `order · e_axis`.
    pub fn along(dim: usize, axis: usize, order: u32) -> Self {
        let mut v = vec![0; dim];
        v[axis] = order;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// Total order `|n| = n_1 + ... + n_d`.
    pub fn order(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), other.dim());
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` unless `other <= self` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// Componentwise `self <= other`.
    pub fn le_componentwise(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn with(&self, axis: usize, value: u32) -> MultiIndex {
        let mut v = self.0.clone();
        v[axis] = value;
        MultiIndex(v)
    }

    /// `n! = n_1! ... n_d!`.
    pub fn factorial<T: Real>(&self) -> T {
        self.0
            .iter()
            .fold(T::one(), |acc, &e| acc * factorial::<T>(e as u64))
    }

    /// `n! / (n - k)!` for `k <= n`.
    pub fn falling<T: Real>(&self, k: &MultiIndex) -> T {
        self.0.iter().zip(&k.0).fold(T::one(), |acc, (&n, &k)| {
            acc * falling::<T>(n as u64, k as u64)
        })
    }

    /// Multinomial `binom(n, k) = prod binom(n_i, k_i)` for `k <= n`.
    pub fn binomial<T: Real>(&self, k: &MultiIndex) -> T {
        self.0.iter().zip(&k.0).fold(T::one(), |acc, (&n, &k)| {
            acc * binomial::<T>(n as u64, k as u64)
        })
    }

    /// Monomial `z^n` evaluated at a point.
    pub fn monomial<T: Real>(&self, z: &[num_complex::Complex<T>]) -> num_complex::Complex<T> {
        self.0.iter().zip(z).fold(
            num_complex::Complex::new(T::one(), T::zero()),
            |acc, (&e, zi)| acc * zi.powu(e),
        )
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

pub fn factorial<T: Real>(n: u64) -> T {
    (1..=n).fold(T::one(), |acc, i| acc * T::of_u64(i))
}

/// `n (n-1) ... (n-k+1)`.
pub fn falling<T: Real>(n: u64, k: u64) -> T {
    debug_assert!(k <= n);
    ((n - k + 1)..=n).fold(T::one(), |acc, i| acc * T::of_u64(i))
}

pub fn binomial<T: Real>(n: u64, k: u64) -> T {
    if k > n {
        return T::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, i| acc * T::of_u64(n - i) / T::of_u64(i + 1))
}

/// `binom(n + d, d)`: number of monomials of total degree `<= n` in `d` variables.
pub fn basis_size(dim: usize, degree: usize) -> usize {
    let mut r: u128 = 1;
    for i in 1..=dim as u128 {
        r = r * (degree as u128 + i) / i;
    }
    r as usize
}

/// All multi-indices of dimension `dim` with `|n| <= degree`, graded-lex sorted.
pub fn indices_up_to(dim: usize, degree: usize) -> Vec<MultiIndex> {
    let mut out = Vec::with_capacity(basis_size(dim, degree));
    for total in 0..=degree {
        let mut block = Vec::new();
        compositions(dim, total as u32, &mut Vec::with_capacity(dim), &mut block);
        block.sort();
        out.extend(block);
    }
    out
}

/// All multi-indices with entries in `0..=max_entry`.
pub fn indices_in_box(dim: usize, max_entry: u32) -> Vec<MultiIndex> {
    let mut out = vec![MultiIndex::zeros(dim)];
    for axis in 0..dim {
        out = out
            .into_iter()
            .flat_map(|m| (0..=max_entry).map(move |e| m.with(axis, e)))
            .collect();
    }
    out.sort();
    out
}

fn compositions(dim: usize, total: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if prefix.len() + 1 == dim {
        prefix.push(total);
        out.push(MultiIndex(prefix.clone()));
        prefix.pop();
        return;
    }
    if dim == 0 {
        return;
    }
    for first in 0..=total {
        prefix.push(first);
        compositions(dim, total - first, prefix, out);
        prefix.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let v = indices_up_to(2, 2);
        let got: Vec<Vec<u32>> = v.iter().map(|m| m.entries().to_vec()).collect();
        assert_eq!(
            got,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, 0],
                vec![0, 2],
                vec![1, 1],
                vec![2, 0]
            ]
        );
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_size(1, 4), 5);
        assert_eq!(basis_size(2, 4), 15);
        assert_eq!(basis_size(2, 6), 28);
        assert_eq!(basis_size(3, 3), 20);
        for d in 1..4 {
            for n in 0..7 {
                assert_eq!(indices_up_to(d, n).len(), basis_size(d, n));
            }
        }
    }

    #[test]
    fn combinatorics() {
        let n = MultiIndex::new(vec![3, 2]);
        let k = MultiIndex::new(vec![1, 2]);
        assert_eq!(n.factorial::<f64>(), 12.0);
        assert_eq!(n.falling::<f64>(&k), 3.0 * 2.0);
        assert_eq!(n.binomial::<f64>(&k), 3.0);
        assert_eq!(n.checked_sub(&k), Some(MultiIndex::new(vec![2, 0])));
        assert_eq!(k.checked_sub(&n), None);
        assert_eq!(binomial::<f64>(10, 3), 120.0);
    }

    #[test]
    fn box_enumeration() {
        let v = indices_in_box(2, 4);
        assert_eq!(v.len(), 25);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
