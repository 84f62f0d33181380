use crcalc::completeness::{derivative_span, rank_report};
use crcalc::fhc::t_power_on_basis;
use crcalc::kernel::{joint_kernel, problems_from_operators, solve_kernel_axis, verify_kernel};
use crcalc::multi_index::{factorial, indices_in_box};
use crcalc::{c64, AxisKernelProblem, CROperator, KernelProblem, MultiIndex, Series, C64};
use num_complex::Complex;

fn family(order: u32, a: [C64; 2]) -> Vec<CROperator<f64>> {
    (0..2)
        .map(|j| CROperator::derivative_minus_z(2, j, order, a[j]).unwrap())
        .collect()
}

/// Applies `T^k` factor by factor and compares with the closed-form ladder.
///
/// Deviations are measured against the largest exact coefficient met along
/// the chain, since results that should vanish are differences of such values.
fn ladder_deviation(ops: &[CROperator<f64>], degree: usize) -> (f64, usize) {
    let problems = problems_from_operators(ops, degree).unwrap();
    let f = joint_kernel(&problems).unwrap();
    let a: Vec<C64> = ops.iter().map(|t| t.a()).collect();
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in indices_in_box(2, 4) {
        let dn = f.differentiate(&n);
        for k in indices_in_box(2, 4) {
            let mut g = dn.clone();
            let mut chain = dn.max_abs_exact();
            for (axis, op) in ops.iter().enumerate() {
                for _ in 0..k.get(axis) {
                    g = op.apply(&g).unwrap();
                    chain = chain.max(g.max_abs_exact());
                }
            }
            let expected = match t_power_on_basis(&k, &n, &a) {
                Some((s, rest)) => f.differentiate(&rest).scale(s),
                None => Series::zero(2, g.cutoff(), g.cutoff() as i64, false),
            };
            let exact = g.exact_degree();
            assert!(exact >= 0, "degree budget too small");
            let scale = chain.max(expected.max_abs_exact());
            for idx in crcalc::multi_index::indices_up_to(2, exact as usize) {
                let d = (g.coeff(&idx) - expected.coeff(&idx)).norm() / scale;
                worst = worst.max(d);
            }
            cases += 1;
        }
    }
    (worst, cases)
}

#[test]
fn ladder_matches_repeated_application_gaussian() {
    let (dev, cases) = ladder_deviation(&family(1, [c64(1.0, 0.0), c64(0.5, 0.5)]), 24);
    assert_eq!(cases, 625);
    assert!(dev <= 1e-10, "{dev}");
}

#[test]
fn ladder_matches_repeated_application_airy() {
    let (dev, cases) = ladder_deviation(&family(2, [c64(1.0, 0.0), c64(1.0, 0.0)]), 30);
    assert_eq!(cases, 625);
    assert!(dev <= 1e-10, "{dev}");
}

#[test]
fn gaussian_coefficients_match_closed_form() {
    // exp(a z^2 / 2) = sum (a/2)^m z^(2m) / m!
    let a = c64(0.3, -1.2);
    let f = solve_kernel_axis(&AxisKernelProblem::gaussian(a, 20)).unwrap();
    for m in 0..=10u32 {
        let want = (a / 2.0).powu(m) / factorial::<f64>(m as u64);
        let got = f.coeff(&MultiIndex::new(vec![2 * m]));
        assert!((got - want).norm() <= 1e-15 * (1.0 + want.norm()));
        assert_eq!(f.coeff(&MultiIndex::new(vec![2 * m + 1])), c64(0.0, 0.0));
    }
}

#[test]
fn airy_coefficients_match_product_formula() {
    // f'' = a z f with f(0)=1, f'(0)=0: f_{3m} = a^m / prod_{i<=m} (3i)(3i-1)
    let a = c64(2.0, 1.0);
    let f = solve_kernel_axis(&AxisKernelProblem::airy(a, 30)).unwrap();
    let mut want = c64(1.0, 0.0);
    for m in 0..=10u32 {
        if m > 0 {
            want = want * a / f64::from((3 * m) * (3 * m - 1));
        }
        let got = f.coeff(&MultiIndex::new(vec![3 * m]));
        assert!((got - want).norm() <= 1e-14 * want.norm());
        for off in 1..3 {
            if 3 * m + off <= 30 {
                assert_eq!(f.coeff(&MultiIndex::new(vec![3 * m + off])), c64(0.0, 0.0));
            }
        }
    }
}

#[test]
fn product_kernels_are_killed_by_both_operators() {
    for order in [1, 2] {
        let ops = family(order, [c64(1.0, 0.0), c64(1.0, 0.0)]);
        let f = joint_kernel(&problems_from_operators(&ops, 16).unwrap()).unwrap();
        let report = verify_kernel(&ops, &f, 1e-12).unwrap();
        assert!(report.passes(), "{:?}", report.residuals);
    }
}

#[test]
fn product_kernels_complete_at_small_truncations() {
    for order in [1, 2] {
        let ops = family(order, [c64(1.0, 0.0), c64(1.0, 0.0)]);
        let f = joint_kernel(&problems_from_operators(&ops, 16).unwrap()).unwrap();
        // Airy truncations need two derivative orders beyond N
        let extra = 2 * (order as usize - 1);
        for (n, dim) in [(4, 15), (6, 28)] {
            let r = rank_report(&derivative_span(&f, n, n + extra).unwrap(), 1e-8).unwrap();
            assert_eq!((r.rank, r.ambient_dim), (dim, dim));
        }
    }
}

#[test]
fn single_precision_path() {
    let p: AxisKernelProblem<f32> = AxisKernelProblem::gaussian(Complex::new(1.0, 0.0), 8);
    let f = solve_kernel_axis(&p).unwrap();
    assert!((f.coeff(&MultiIndex::new(vec![4])).re - 0.125).abs() < 1e-7);
    let op = CROperator::<f32>::derivative_minus_z(1, 0, 1, Complex::new(1.0, 0.0)).unwrap();
    let r = verify_kernel(&[op], &f, 1e-5).unwrap();
    assert!(r.passes());
}

#[test]
fn single_variable_generator_is_incomplete() {
    // exp(z1^2/2) is constant in z2, so no derivative reaches z2
    let g: KernelProblem = AxisKernelProblem::gaussian(c64(1.0, 0.0), 8);
    let g1 = solve_kernel_axis(&g).unwrap();
    let entries = g1
        .iter()
        .map(|(n, c)| (MultiIndex::new(vec![n.get(0), 0]), *c));
    let f = Series::with_exact_degree(2, 8, 8, entries, false).unwrap();
    let r = rank_report(&derivative_span(&f, 4, 4).unwrap(), 1e-8).unwrap();
    assert_eq!((r.rank, r.ambient_dim), (5, 15));
}
