//! The frequent hypercyclicity criterion on `H_0 = span{D^n f}`.
//!
//! For `f` in the joint kernel of operators with `[T_j, D_k] = δ_jk a_j I`,
//! the ladder identity
//!
//! ```text
//! T^k D^n f = a^k n!/(n-k)! D^(n-k) f     if k <= n componentwise, else 0
//! ```
//!
//! makes every `T_j` act on `H_0` by index lowering, and
//! `S_j D^n f = D^(n+e_j) f / (a_j (n_j+1))` is a right inverse. Vectors of
//! `H_0` are kept symbolically (index → coefficient) so these identities are
//! checked exactly; only the semi-norm estimates of the convergence report
//! go through numeric series.

use std::collections::BTreeMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::kernel::{joint_kernel, AxisKernelProblem};
use crate::multi_index::MultiIndex;
use crate::scalar::{FieldScalar, Real};
use crate::series::{SemiNormSpec, TruncatedSeries};

/// Relative tolerance for float comparisons of ladder scalars.
pub const LADDER_REL_TOL: f64 = 1e-14;
/// Relative agreement required between realizations at `N` and `N + 4`.
pub const STABILITY_REL_TOL: f64 = 0.05;
/// Extra realization degree used by the stability check.
pub const STABILITY_STEP: usize = 4;

/// Finite combination `sum c_n D^n f` for a fixed joint-kernel generator `f`
/// whose operators carry the constants `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct H0Vector<K: FieldScalar> {
    a: Vec<K>,
    terms: BTreeMap<MultiIndex, K>,
}

impl<K: FieldScalar> H0Vector<K> {
    pub fn zero(a: Vec<K>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::Empty("operator constants"));
        }
        if a.iter().any(|x| x.is_zero()) {
            return Err(Error::ZeroConstant);
        }
        Ok(H0Vector {
            a,
            terms: BTreeMap::new(),
        })
    }

    /// `D^n f`.
    pub fn basis(a: Vec<K>, n: MultiIndex) -> Result<Self> {
        Self::from_terms(a, [(n, K::one())])
    }

    pub fn from_terms(a: Vec<K>, terms: impl IntoIterator<Item = (MultiIndex, K)>) -> Result<Self> {
        let mut x = Self::zero(a)?;
        for (n, c) in terms {
            if n.dim() != x.dim() {
                return Err(Error::DimMismatch {
                    expected: x.dim(),
                    got: n.dim(),
                });
            }
            x.accumulate(n, c);
        }
        Ok(x)
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[K] {
        &self.a
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &K)> {
        self.terms.iter()
    }

    pub fn coeff(&self, n: &MultiIndex) -> K {
        self.terms.get(n).cloned().unwrap_or_else(K::zero)
    }

    /// Number of nonzero terms.
    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|n|` in the support.
    pub fn max_order(&self) -> usize {
        self.terms.keys().map(MultiIndex::order).max().unwrap_or(0)
    }

    fn accumulate(&mut self, n: MultiIndex, c: K) {
        let next = self.coeff(&n) + c;
        if next.is_zero() {
            self.terms.remove(&n);
        } else {
            self.terms.insert(n, next);
        }
    }

    fn check_axis(&self, j: usize) -> Result<()> {
        if j >= self.dim() {
            return Err(Error::AxisOutOfRange {
                axis: j,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.a != other.a {
            return Err(Error::ShapeMismatch(
                "H0 vectors over different generators".into(),
            ));
        }
        let mut out = self.clone();
        for (n, c) in &other.terms {
            out.accumulate(n.clone(), c.clone());
        }
        Ok(out)
    }

    /// `T_j x`: each `c D^n f` maps to `c a_j n_j D^(n-e_j) f`, or vanishes when `n_j = 0`.
    pub fn apply_t(&self, j: usize) -> Result<Self> {
        self.check_axis(j)?;
        let mut out = Self {
            a: self.a.clone(),
            terms: BTreeMap::new(),
        };
        for (n, c) in &self.terms {
            let nj = n.get(j);
            if nj == 0 {
                continue;
            }
            let scalar = c.clone() * self.a[j].clone() * K::from_count(nj as u64);
            out.accumulate(n.with(j, nj - 1), scalar);
        }
        Ok(out)
    }

    /// `S_j x`: each `c D^n f` maps to `c / (a_j (n_j+1)) D^(n+e_j) f`.
    pub fn apply_s(&self, j: usize) -> Result<Self> {
        self.check_axis(j)?;
        let mut out = Self {
            a: self.a.clone(),
            terms: BTreeMap::new(),
        };
        for (n, c) in &self.terms {
            let nj = n.get(j);
            let scalar = c.clone() / (self.a[j].clone() * K::from_count(nj as u64 + 1));
            out.accumulate(n.with(j, nj + 1), scalar);
        }
        Ok(out)
    }

    /// `T_j^times x`.
    pub fn apply_t_n(&self, j: usize, times: usize) -> Result<Self> {
        (0..times).try_fold(self.clone(), |x, _| x.apply_t(j))
    }

    /// `S_j^times x`.
    pub fn apply_s_n(&self, j: usize, times: usize) -> Result<Self> {
        (0..times).try_fold(self.clone(), |x, _| x.apply_s(j))
    }

    /// Coefficientwise comparison, exact for exact scalars.
    pub fn approx_eq(&self, other: &Self, rel: f64) -> bool {
        if self.a != other.a {
            return false;
        }
        let keys: std::collections::BTreeSet<&MultiIndex> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .all(|n| self.coeff(n).close_to(&other.coeff(n), rel))
    }
}

/// `T^k D^n f` as `(scalar, index)`, or `None` when some `k_j > n_j`.
pub fn t_power_on_basis<K: FieldScalar>(
    k: &MultiIndex,
    n: &MultiIndex,
    a: &[K],
) -> Option<(K, MultiIndex)> {
    let rest = n.checked_sub(k)?;
    let mut scalar = K::one();
    for (axis, aj) in a.iter().enumerate().take(n.dim()) {
        let (kj, nj) = (k.get(axis) as u64, n.get(axis) as u64);
        for i in 0..kj {
            scalar = scalar * aj.clone() * K::from_count(nj - i);
        }
    }
    Some((scalar, rest))
}

/// Closed form of the scalar in `S_j^k D^n f = s · D^(n + k e_j) f`:
/// `s = n_j! / (a_j^k (n_j + k)!)`.
pub fn s_power_scalar<K: FieldScalar>(n: &MultiIndex, j: usize, k: usize, a: &[K]) -> K {
    let nj = n.get(j) as u64;
    let mut denom = K::one();
    for i in 1..=k as u64 {
        denom = denom * a[j].clone() * K::from_count(nj + i);
    }
    K::one() / denom
}

/// Whether `T_j S_j x = x`.
pub fn verify_right_inverse<K: FieldScalar>(x: &H0Vector<K>, j: usize) -> Result<bool> {
    Ok(x.apply_s(j)?.apply_t(j)?.approx_eq(x, LADDER_REL_TOL))
}

/// Smallest `K` with `T_j^K x = 0`; equals `1 + max n_j` over the support.
pub fn nilpotency_index<K: FieldScalar>(x: &H0Vector<K>, j: usize) -> Result<usize> {
    x.check_axis(j)?;
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut y = x.clone();
    let mut count = 0;
    while !y.is_zero() {
        y = y.apply_t(j)?;
        count += 1;
    }
    Ok(count)
}

impl<T: Real> H0Vector<Complex<T>> {
    /// Numeric series `sum c_n D^n f` truncated to `degree`.
    ///
    /// `generator` must be exact through `degree + max_order()`.
    pub fn realize(
        &self,
        generator: &TruncatedSeries<T>,
        degree: usize,
    ) -> Result<TruncatedSeries<T>> {
        if generator.dim() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: generator.dim(),
            });
        }
        let required = degree + self.max_order();
        if !generator.is_polynomial() && generator.exact_degree() < required as i64 {
            return Err(Error::InsufficientExactness {
                required,
                available: generator.exact_degree(),
            });
        }
        if self.is_zero() {
            return Ok(TruncatedSeries::zero(
                self.dim(),
                degree,
                degree as i64,
                false,
            ));
        }
        let parts: Vec<(Complex<T>, TruncatedSeries<T>)> = self
            .terms
            .iter()
            .map(|(n, c)| (*c, generator.differentiate(n).truncate(degree)))
            .collect();
        let refs: Vec<_> = parts.iter().map(|(c, g)| (*c, g)).collect();
        TruncatedSeries::linear_combine(&refs)
    }
}

/// Semi-norm majorants of the series `sum_k S_j^k x`.
#[derive(Clone, Debug, PartialEq)]
pub struct FhcReport<T: Real> {
    pub axis: usize,
    pub m: u32,
    pub epsilon: T,
    /// Limit bound `1 / (|a_j| m ε)` for the k-th roots.
    pub bound: T,
    /// `u_k`: coefficient majorant of `S_j^k x` on the polydisc of radius `mε`, `k = 0..=kmax`.
    pub u: Vec<T>,
    /// `u_{k+1} / u_k`.
    pub ratios: Vec<T>,
    /// `u_k^{1/k}` for `k = 1..=kmax`.
    pub kth_roots: Vec<T>,
    /// `sum_{i<=k} u_i`.
    pub partial_sums: Vec<T>,
    /// Cauchy-estimate majorant of `u_k` from radius `2mε`, `k = 0..=kmax`.
    pub cauchy: Vec<T>,
    /// Final ratio and k-th root agree within 5% between degrees `N` and `N+4`.
    pub stable: bool,
    pub realization_degree: usize,
}

impl<T: Real> FhcReport<T> {
    pub fn final_kth_root(&self) -> Option<T> {
        self.kth_roots.last().copied()
    }

    pub fn final_ratio(&self) -> Option<T> {
        self.ratios.last().copied()
    }
}

/// `ε = 2 max_s 1/|a_s|`.
pub fn default_epsilon<T: Real>(a: &[Complex<T>]) -> T {
    T::of(2.0) * min_epsilon(a)
}

fn min_epsilon<T: Real>(a: &[Complex<T>]) -> T {
    a.iter()
        .map(|x| T::one() / x.norm())
        .fold(T::zero(), T::max)
}

/// Realizes `S_j^k x` for `k = 0..=kmax` from the joint kernel of `problems`
/// and reports the semi-norm majorants against the limit bound.
pub fn convergence_report<T: Real>(
    x: &H0Vector<Complex<T>>,
    j: usize,
    spec: &SemiNormSpec<T>,
    kmax: usize,
    realization_degree: usize,
    problems: &[AxisKernelProblem<T>],
) -> Result<FhcReport<T>> {
    x.check_axis(j)?;
    if problems.len() != x.dim() {
        return Err(Error::DimMismatch {
            expected: x.dim(),
            got: problems.len(),
        });
    }
    if problems.iter().zip(x.a()).any(|(p, a)| p.a != *a) {
        return Err(Error::InvalidParameter(
            "H0 vector constants differ from the generator's operators".into(),
        ));
    }
    let required = min_epsilon(x.a());
    if !(spec.epsilon > required) {
        return Err(Error::EpsilonTooSmall {
            epsilon: spec.epsilon.to_f64().unwrap_or(f64::NAN),
            required: required.to_f64().unwrap_or(f64::NAN),
        });
    }
    if kmax == 0 {
        return Err(Error::InvalidParameter("kmax must be >= 1".into()));
    }

    let coarse = majorants(x, j, spec, kmax, realization_degree, problems)?;
    let fine = majorants(
        x,
        j,
        spec,
        kmax,
        realization_degree + STABILITY_STEP,
        problems,
    )?;

    let u = coarse.0;
    let ratios: Vec<T> = u.windows(2).map(|w| w[1] / w[0]).collect();
    let kth_roots: Vec<T> = u
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, v)| v.powf(T::one() / T::of_u64(k as u64)))
        .collect();
    let partial_sums: Vec<T> = u
        .iter()
        .scan(T::zero(), |acc, v| {
            *acc += *v;
            Some(*acc)
        })
        .collect();

    let fine_ratio = fine.0[kmax] / fine.0[kmax - 1];
    let fine_root = fine.0[kmax].powf(T::one() / T::of_u64(kmax as u64));
    let stable = agrees(*ratios.last().expect("kmax >= 1"), fine_ratio)
        && agrees(*kth_roots.last().expect("kmax >= 1"), fine_root);

    let r = spec.radius();
    Ok(FhcReport {
        axis: j,
        m: spec.m,
        epsilon: spec.epsilon,
        bound: T::one() / (x.a()[j].norm() * r),
        u,
        ratios,
        kth_roots,
        partial_sums,
        cauchy: coarse.1,
        stable,
        realization_degree,
    })
}

fn agrees<T: Real>(a: T, b: T) -> bool {
    let scale = a.abs().max(b.abs());
    scale.is_zero() || (a - b).abs() <= T::of(STABILITY_REL_TOL) * scale
}

/// `(u_k, cauchy_k)` at one realization degree.
fn majorants<T: Real>(
    x: &H0Vector<Complex<T>>,
    j: usize,
    spec: &SemiNormSpec<T>,
    kmax: usize,
    degree: usize,
    problems: &[AxisKernelProblem<T>],
) -> Result<(Vec<T>, Vec<T>)> {
    let top = degree + kmax + x.max_order();
    let generator_problems: Vec<_> = problems.iter().map(|p| p.with_degree(top)).collect();
    let generator = joint_kernel(&generator_problems)?;
    let r = spec.radius();
    let two_r = r + r;

    // majorants of each basis element D^n f at radius 2r, over the degrees
    // that feed S_j^k D^n f up to `degree`
    let wide: Vec<(MultiIndex, Complex<T>, T)> = x
        .terms()
        .map(|(n, c)| {
            let m2 = generator
                .differentiate(n)
                .truncate(degree + kmax)
                .majorant(two_r);
            (n.clone(), *c, m2)
        })
        .collect();

    let mut u = Vec::with_capacity(kmax + 1);
    let mut cauchy = Vec::with_capacity(kmax + 1);
    let mut y = x.clone();
    for k in 0..=kmax {
        u.push(y.realize(&generator, degree)?.majorant(r));
        // |s| k! M_{2r}(D^n f) / r^k with s the S_j^k scalar
        let kfact = crate::multi_index::factorial::<T>(k as u64);
        let bound = wide
            .iter()
            .map(|(n, c, m2)| {
                let s: Complex<T> = s_power_scalar(n, j, k, x.a());
                c.norm() * s.norm() * kfact * *m2 / r.powi(k as i32)
            })
            .sum::<T>();
        cauchy.push(bound);
        if k < kmax {
            y = y.apply_s(j)?;
        }
    }
    Ok((u, cauchy))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn idx(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn ladder_examples() {
        let (s, n) = t_power_on_basis(&idx(&[1]), &idx(&[2]), &[q(1, 1)]).unwrap();
        assert_eq!((s, n), (q(2, 1), idx(&[1])));
        let (s, n) = t_power_on_basis(&idx(&[0, 0]), &idx(&[3, 1]), &[q(2, 1), q(5, 1)]).unwrap();
        assert_eq!((s, n), (q(1, 1), idx(&[3, 1])));
        assert!(t_power_on_basis(&idx(&[1, 0]), &idx(&[0, 3]), &[q(1, 1), q(1, 1)]).is_none());
        // a^k n!/(n-k)! with a = (2, 3), k = (2, 1), n = (3, 2): 4·6 · 3·2
        let (s, _) = t_power_on_basis(&idx(&[2, 1]), &idx(&[3, 2]), &[q(2, 1), q(3, 1)]).unwrap();
        assert_eq!(s, q(144, 1));
    }

    #[test]
    fn apply_t_examples() {
        let a = vec![q(1, 1)];
        let x = H0Vector::basis(a.clone(), idx(&[2])).unwrap();
        let tx = x.apply_t(0).unwrap();
        assert_eq!(
            tx,
            H0Vector::from_terms(a.clone(), [(idx(&[1]), q(2, 1))]).unwrap()
        );

        let f = H0Vector::basis(a, idx(&[0])).unwrap();
        assert!(f.apply_t(0).unwrap().is_zero());

        let a2 = vec![q(2, 1)];
        let x =
            H0Vector::from_terms(a2.clone(), [(idx(&[1]), q(1, 1)), (idx(&[3]), q(1, 1))]).unwrap();
        let expect =
            H0Vector::from_terms(a2, [(idx(&[0]), q(2, 1)), (idx(&[2]), q(6, 1))]).unwrap();
        assert_eq!(x.apply_t(0).unwrap(), expect);
    }

    #[test]
    fn apply_s_examples() {
        let a = vec![q(1, 1)];
        let f = H0Vector::basis(a.clone(), idx(&[0])).unwrap();
        assert_eq!(
            f.apply_s(0).unwrap(),
            H0Vector::basis(a.clone(), idx(&[1])).unwrap()
        );
        let twice = f.apply_s_n(0, 2).unwrap();
        assert_eq!(
            twice,
            H0Vector::from_terms(a.clone(), [(idx(&[2]), q(1, 2))]).unwrap()
        );
        assert_eq!(s_power_scalar(&idx(&[0]), 0, 2, &a), q(1, 2));

        let a2 = vec![q(2, 1), q(7, 1)];
        let x = H0Vector::basis(a2.clone(), idx(&[0, 1])).unwrap();
        let expect = H0Vector::from_terms(a2, [(idx(&[1, 1]), q(1, 2))]).unwrap();
        assert_eq!(x.apply_s(0).unwrap(), expect);
    }

    #[test]
    fn right_inverse_but_not_left_inverse() {
        let f = H0Vector::basis(vec![q(3, 2)], idx(&[0])).unwrap();
        assert!(verify_right_inverse(&f, 0).unwrap());
        // S T f = 0 != f
        let st = f.apply_t(0).unwrap().apply_s(0).unwrap();
        assert!(!st.approx_eq(&f, LADDER_REL_TOL));
    }

    #[test]
    fn nilpotency_examples() {
        let a = vec![q(1, 1), q(1, 1)];
        let x = H0Vector::basis(a.clone(), idx(&[2, 0])).unwrap();
        assert_eq!(nilpotency_index(&x, 0).unwrap(), 3);
        assert_eq!(nilpotency_index(&x, 1).unwrap(), 1);
        let f = H0Vector::basis(a.clone(), idx(&[0, 0])).unwrap();
        assert_eq!(nilpotency_index(&f, 0).unwrap(), 1);
        let zero = H0Vector::zero(a).unwrap();
        assert_eq!(nilpotency_index(&zero, 0), Err(Error::ZeroVector));
    }

    #[test]
    fn zero_constant_rejected() {
        assert_eq!(H0Vector::zero(vec![q(0, 1)]), Err(Error::ZeroConstant));
    }

    #[test]
    fn realize_matches_derivatives() {
        let problems = vec![AxisKernelProblem::gaussian(c(1.0, 0.0), 12)];
        let g = joint_kernel(&problems).unwrap();
        let x = H0Vector::from_terms(
            vec![c(1.0, 0.0)],
            [(idx(&[1]), c(2.0, 0.0)), (idx(&[3]), c(0.0, 1.0))],
        )
        .unwrap();
        let r = x.realize(&g, 6).unwrap();
        for k in 0..=6u32 {
            let want = g.differentiate(&idx(&[1])).coeff(&idx(&[k])) * 2.0
                + g.differentiate(&idx(&[3])).coeff(&idx(&[k])) * c(0.0, 1.0);
            assert!((r.coeff(&idx(&[k])) - want).norm() < 1e-14);
        }
        assert!(matches!(
            x.realize(&g, 10),
            Err(Error::InsufficientExactness { .. })
        ));
    }

    #[test]
    fn gaussian_convergence_report() {
        let problems = vec![AxisKernelProblem::gaussian(c(1.0, 0.0), 0)];
        let x = H0Vector::basis(vec![c(1.0, 0.0)], idx(&[0])).unwrap();
        let spec = SemiNormSpec::new(1, 2.0).unwrap();
        let rep = convergence_report(&x, 0, &spec, 20, 32, &problems).unwrap();
        assert_eq!(rep.u.len(), 21);
        assert_eq!(rep.kth_roots.len(), 20);
        assert!((rep.bound - 0.5).abs() < 1e-15);
        assert!(rep.stable);
        assert!(rep.final_kth_root().unwrap() <= 0.55);
        for (u, b) in rep.u.iter().zip(&rep.cauchy) {
            assert!(u <= b);
        }
        // partial sums settle
        let n = rep.partial_sums.len();
        let tail = rep.partial_sums[n - 1] - rep.partial_sums[n - 2];
        assert!(tail < 1e-4 * rep.partial_sums[n - 1]);
    }

    #[test]
    fn small_epsilon_rejected() {
        let problems = vec![AxisKernelProblem::gaussian(c(1.0, 0.0), 0)];
        let x = H0Vector::basis(vec![c(1.0, 0.0)], idx(&[0])).unwrap();
        let spec = SemiNormSpec::new(1, 0.5).unwrap();
        assert!(matches!(
            convergence_report(&x, 0, &spec, 20, 32, &problems),
            Err(Error::EpsilonTooSmall { .. })
        ));
        assert_eq!(default_epsilon(&[c(1.0, 0.0), c(0.0, 0.25)]), 8.0);
    }

    #[test]
    fn airy_convergence_report() {
        let problems = vec![AxisKernelProblem::airy(c(1.0, 0.0), 0)];
        let x = H0Vector::basis(vec![c(1.0, 0.0)], idx(&[0])).unwrap();
        let spec = SemiNormSpec::new(1, 2.0).unwrap();
        let rep = convergence_report(&x, 0, &spec, 12, 32, &problems).unwrap();
        assert!(rep.partial_sums.iter().all(|s| s.is_finite()));
        assert!(rep.final_ratio().unwrap() < 1.0);
        assert!(rep.stable);
    }
}
