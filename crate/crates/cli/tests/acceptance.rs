//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use crcalc::completeness::{approximate_target, derivative_span, rank_report, translate_span};
use crcalc::fhc::{convergence_report, nilpotency_index, t_power_on_basis, verify_right_inverse};
use crcalc::kernel::{joint_kernel, problems_from_operators, solve_kernel_axis, verify_kernel};
use crcalc::multi_index::{factorial, indices_in_box, indices_up_to};
use crcalc::operators::verify_cr;
use crcalc::{
    c64, rational, AxisKernelProblem, CROperator, ConvolutionSymbol, ExactH0, KernelProblem,
    MultiIndex, SemiNormSpec, Series, C64, H0,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn family(order: u32, a: [C64; 2]) -> Vec<CROperator<f64>> {
    (0..2)
        .map(|j| CROperator::derivative_minus_z(2, j, order, a[j]).unwrap())
        .collect()
}

fn product_kernel(order: u32, degree: usize) -> (Vec<CROperator<f64>>, Series) {
    let ops = family(order, [c64(1.0, 0.0), c64(1.0, 0.0)]);
    let f = joint_kernel(&problems_from_operators(&ops, degree).unwrap()).unwrap();
    (ops, f)
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

fn random_poly(rng: &mut ChaCha8Rng, dim: usize, deg: usize, density: f64) -> Series {
    let mut terms = Vec::new();
    for n in indices_up_to(dim, deg) {
        // never return the zero polynomial
        if rng.gen_bool(density) || n.order() == deg && terms.is_empty() {
            terms.push((n, random_c64(rng)));
        }
    }
    Series::new(dim, deg, terms, true).unwrap()
}

fn commutation() -> Outcome {
    let mut worst = 0.0f64;
    for order in [1, 2] {
        let r = verify_cr(&family(order, [c64(1.0, 0.0), c64(1.0, 0.0)]), 8)
            .map_err(|e| e.to_string())?;
        ensure(r.entries.len() == 4, "expected 4 (j,k) pairs")?;
        worst = worst.max(r.max_residual());
    }
    ensure(worst <= 1e-12, format!("max residual {worst:e}"))?;
    Ok(format!("max residual {worst:e}"))
}

/// Brute-force `T^k D^n f` against the ladder; deviation relative to the
/// largest exact coefficient met along the chain.
fn ladder_deviation(ops: &[CROperator<f64>], degree: usize) -> (f64, usize) {
    let f = joint_kernel(&problems_from_operators(ops, degree).unwrap()).unwrap();
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
            let scale = chain.max(expected.max_abs_exact());
            for idx in indices_up_to(2, g.exact_degree().max(0) as usize) {
                worst = worst.max((g.coeff(&idx) - expected.coeff(&idx)).norm() / scale);
            }
            cases += 1;
        }
    }
    (worst, cases)
}

fn ladder_oracle() -> Outcome {
    let (g, gc) = ladder_deviation(&family(1, [c64(1.0, 0.0), c64(0.5, 0.5)]), 24);
    let (a, ac) = ladder_deviation(&family(2, [c64(1.0, 0.0), c64(1.0, 0.0)]), 30);
    let worst = g.max(a);
    ensure(worst <= 1e-10, format!("deviation {worst:e}"))?;
    Ok(format!(
        "{} cases, max relative deviation {worst:e}",
        gc + ac
    ))
}

fn kernel_correctness() -> Outcome {
    let one = c64(1.0, 0.0);
    let g = solve_kernel_axis(&AxisKernelProblem::gaussian(one, 12)).map_err(|e| e.to_string())?;
    for m in 0..=6u32 {
        let want = 1.0 / (2f64.powi(m as i32) * factorial::<f64>(m as u64));
        let got = g.coeff(&MultiIndex::new(vec![2 * m]));
        ensure(
            (got - want).norm() <= 1e-12,
            format!("gaussian m={m}: {got} vs {want}"),
        )?;
    }
    let airy: KernelProblem = AxisKernelProblem::airy(one, 12);
    let f = solve_kernel_axis(&airy).map_err(|e| e.to_string())?;
    for (n, want) in [(3u32, 1.0 / 6.0), (6, 1.0 / 180.0)] {
        let got = f.coeff(&MultiIndex::new(vec![n]));
        ensure(
            (got - want).norm() <= 1e-12,
            format!("airy f_{n}: {got} vs {want}"),
        )?;
    }
    let mut worst = 0.0f64;
    for order in [1, 2] {
        let (ops, f) = product_kernel(order, 16);
        let r = verify_kernel(&ops, &f, 1e-12).map_err(|e| e.to_string())?;
        worst = r.residuals.iter().copied().fold(worst, f64::max);
    }
    ensure(worst <= 1e-12, format!("kernel residual {worst:e}"))?;
    Ok(format!(
        "coefficients match, product-kernel residual {worst:e}"
    ))
}

fn completeness() -> Outcome {
    let mut seen = Vec::new();
    for order in [1u32, 2] {
        let (_, f) = product_kernel(order, 16);
        let extra = 2 * (order as usize - 1);
        for (n, dim) in [(4, 15), (6, 28)] {
            let span = derivative_span(&f, n, n + extra).map_err(|e| e.to_string())?;
            let r = rank_report(&span, 1e-8).map_err(|e| e.to_string())?;
            ensure(
                r.complete_at_truncation && r.rank == dim && r.ambient_dim == dim,
                format!("order {order} N={n}: rank {}/{}", r.rank, r.ambient_dim),
            )?;
            seen.push(format!("{}/{}", r.rank, r.ambient_dim));
        }
    }
    Ok(format!(
        "ranks {} (Airy uses max_order N+2)",
        seen.join(", ")
    ))
}

fn single_variable_generator() -> Outcome {
    let g = solve_kernel_axis(&AxisKernelProblem::gaussian(c64(1.0, 0.0), 8))
        .map_err(|e| e.to_string())?;
    let entries = g
        .iter()
        .map(|(n, c)| (MultiIndex::new(vec![n.get(0), 0]), *c));
    let f = Series::with_exact_degree(2, 8, 8, entries, false).map_err(|e| e.to_string())?;
    let r = rank_report(&derivative_span(&f, 4, 4).unwrap(), 1e-8).map_err(|e| e.to_string())?;
    ensure(
        (r.rank, r.ambient_dim) == (5, 15),
        format!("rank {}/{}", r.rank, r.ambient_dim),
    )?;
    Ok("rank 5/15".into())
}

fn fhc_criterion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..100 {
        let a: Vec<_> = (0..2)
            .map(|_| {
                rational(
                    rng.gen_range(1..9) * if rng.gen_bool(0.5) { -1 } else { 1 },
                    rng.gen_range(1..9),
                )
            })
            .collect();
        let terms: Vec<_> = (0..rng.gen_range(1..6))
            .map(|_| {
                let n = MultiIndex::new(vec![rng.gen_range(0..=5), rng.gen_range(0..=5)]);
                (n, rational(rng.gen_range(-20..20), rng.gen_range(1..7)))
            })
            .collect();
        let x = ExactH0::from_terms(a, terms).map_err(|e| e.to_string())?;
        for j in 0..2 {
            ensure(
                verify_right_inverse(&x, j).map_err(|e| e.to_string())?,
                format!("trial {trial} axis {j}"),
            )?;
        }
    }
    let a = vec![rational(1, 1), rational(-2, 3)];
    for n in indices_in_box(2, 5) {
        let x = ExactH0::basis(a.clone(), n.clone()).map_err(|e| e.to_string())?;
        for j in 0..2 {
            let got = nilpotency_index(&x, j).map_err(|e| e.to_string())?;
            ensure(
                got == n.get(j) as usize + 1,
                format!("nilpotency of {n:?} on axis {j}: {got}"),
            )?;
        }
    }
    let one = c64(1.0, 0.0);
    let x = H0::basis(vec![one], MultiIndex::zeros(1)).map_err(|e| e.to_string())?;
    let spec = SemiNormSpec::new(1, 2.0).map_err(|e| e.to_string())?;
    let problems = [AxisKernelProblem::gaussian(one, 32)];
    let rep = convergence_report(&x, 0, &spec, 20, 32, &problems).map_err(|e| e.to_string())?;
    let root = rep.final_kth_root().unwrap_or(f64::INFINITY);
    ensure(
        root <= 0.55 && rep.stable,
        format!("k-th root {root}, stable {}", rep.stable),
    )?;
    Ok(format!(
        "100 exact right inverses, 36 nilpotency indices, k-th root {root:.4} vs bound {}, stable",
        rep.bound
    ))
}

fn route_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut checks = 0;
    for _ in 0..20 {
        let f = random_poly(&mut rng, 2, 5, 1.0);
        for _ in 0..5 {
            let entries: Vec<_> = indices_up_to(2, 3)
                .into_iter()
                .map(|n| (n, random_c64(&mut rng)))
                .collect();
            let sym = ConvolutionSymbol::new(2, entries).map_err(|e| e.to_string())?;
            let mf = sym.apply(&f).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let l = vec![random_c64(&mut rng), random_c64(&mut rng)];
                let lhs = mf.evaluate(&l).map_err(|e| e.to_string())?;
                let shifted = f.translate(&l).map_err(|e| e.to_string())?.series;
                let rhs = sym.dual_pairing(&shifted).map_err(|e| e.to_string())?;
                worst = worst.max((lhs - rhs).norm() / (1.0 + lhs.norm()));
                checks += 1;
            }
        }
    }
    ensure(worst <= 1e-10, format!("deviation {worst:e}"))?;
    Ok(format!("{checks} evaluations, max deviation {worst:e}"))
}

fn span_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ranks = Vec::new();
    for trial in 0..20 {
        let dim = if trial < 4 { 1 } else { 2 };
        let n = rng.gen_range(2..=4);
        let deg = rng.gen_range(0..=n);
        let f = random_poly(&mut rng, dim, deg, 0.6);
        let samples: Vec<Vec<C64>> = (0..3 * crcalc::multi_index::basis_size(dim, n))
            .map(|_| {
                (0..dim)
                    .map(|_| c64(rng.gen_range(-1.0..=1.0), 0.0))
                    .collect()
            })
            .collect();
        let d =
            rank_report(&derivative_span(&f, n, n).unwrap(), 1e-8).map_err(|e| e.to_string())?;
        let t = rank_report(&translate_span(&f, n, &samples).unwrap(), 1e-8)
            .map_err(|e| e.to_string())?;
        ensure(
            d.rank == t.rank,
            format!(
                "trial {trial}: derivative {} vs translate {}",
                d.rank, t.rank
            ),
        )?;
        ranks.push(d.rank);
    }
    Ok(format!("20 generators agree, ranks {ranks:?}"))
}

fn constructive_approximation() -> Outcome {
    let f = solve_kernel_axis(&AxisKernelProblem::gaussian(c64(1.0, 0.0), 6))
        .map_err(|e| e.to_string())?;
    let target = Series::new(1, 3, [(MultiIndex::new(vec![1]), c64(1.0, 0.0))], true).unwrap();
    let fit = approximate_target(&f, &target, 3, 3).map_err(|e| e.to_string())?;
    let coeff = |k: u32| {
        fit.coefficients
            .iter()
            .find(|(n, _)| n.get(0) == k)
            .map_or(c64(0.0, 0.0), |(_, c)| *c)
    };
    let (c1, c3) = (coeff(1), coeff(3));
    ensure(
        (c1 - 2.5).norm() <= 1e-12 && (c3 + 0.5).norm() <= 1e-12 && fit.residual <= 1e-12,
        format!("c1 {c1}, c3 {c3}, residual {:e}", fit.residual),
    )?;
    Ok(format!(
        "c1 = {:.15}, c3 = {:.15}, residual {:e}",
        c1.re, c3.re, fit.residual
    ))
}

fn determinism() -> Outcome {
    let scenario = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios/gaussian2d.json");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_crcalc"))
            .args(["--seed", "7", "run"])
            .arg(&scenario)
            .output()
            .map_err(|e| e.to_string())
    };
    let (first, second) = (run()?, run()?);
    ensure(
        first.status.success(),
        format!("exit status {:?}", first.status.code()),
    )?;
    ensure(
        !first.stdout.is_empty() && first.stdout == second.stdout,
        "reports differ between runs",
    )?;
    Ok(format!("{} identical bytes", first.stdout.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("commutation relations", commutation),
        ("ladder oracle", ladder_oracle),
        ("kernel correctness", kernel_correctness),
        ("product kernels complete", completeness),
        (
            "single-variable generator incomplete",
            single_variable_generator,
        ),
        ("frequent hypercyclicity criterion", fhc_criterion),
        ("route equality", route_equality),
        ("derivative vs translate span", span_equivalence),
        ("constructive approximation", constructive_approximation),
        ("determinism", determinism),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    let total = start.elapsed().as_secs_f64();
    println!(
        "acceptance: {} passed, {failed} failed in {total:.2} s",
        criteria.len() - failed
    );
    if total >= 10.0 {
        println!("FAIL acceptance suite exceeded 10 s");
        failed += 1;
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
