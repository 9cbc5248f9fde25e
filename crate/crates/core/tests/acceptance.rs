//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.
//! Run with `cargo test -p ordcalc-core --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ordcalc_core::combinatorics::{
    factorial, falling_factorial, forward_difference, stirling2, FunctionTable, StirlingTable,
};
use ordcalc_core::fock::{
    antinormal_moment, expect_exp_coherent_closed, expect_exp_coherent_series,
    expect_exp_fock_closed, expect_exp_fock_series, laguerre, matrix_expectation,
    negbinom_partial_sum, FockSpace, StateVector,
};
use ordcalc_core::opalgebra::{
    parse, print_expr, rewrite, rewrite_with, Letter, Monomial, OperatorExpr, Ordering, RawWord,
};
use ordcalc_core::ordering::{
    antinormal_function, antinormal_power, lemma1_coefficients, lemma2_coefficients,
    normal_function, normal_power, taylor_difference_check, Coefficients,
};

fn verdict(id: u32, name: &str, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {id}: {status} {name}");
    for f in failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:#?}");
}

fn ints(v: &[i64]) -> Vec<BigRational> {
    v.iter()
        .map(|&n| BigRational::from_integer(BigInt::from(n)))
        .collect()
}

fn exact(c: &Coefficients) -> Vec<BigRational> {
    match c {
        Coefficients::Exact(v) => v.clone(),
        Coefficients::Float(_) => panic!("expected exact coefficients"),
    }
}

#[test]
fn criterion_01_golden_expansions() {
    let start = Instant::now();
    let got = [normal_power(2), normal_power(3), normal_power(4)];
    let elapsed = start.elapsed();
    let want = [
        ints(&[0, 1, 1]),
        ints(&[0, 1, 3, 1]),
        ints(&[0, 1, 7, 6, 1]),
    ];
    let mut failures = Vec::new();
    for (k, (g, w)) in (2..).zip(got.iter().zip(&want)) {
        if exact(g.coefficients()) != *w {
            failures.push(format!("n^{k}: {:?}", g.coefficients()));
        }
    }
    if elapsed >= Duration::from_millis(1) {
        failures.push(format!("took {elapsed:?}, limit 1 ms"));
    }
    verdict(1, "golden normal-order expansions of n^2, n^3, n^4", &failures);
}

#[test]
fn criterion_02_oracle_equivalence() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 0..=12u32 {
        let words = parse(&format!("n^{k}")).unwrap();
        let normal = rewrite(&words, Ordering::Normal);
        let anti = rewrite(&words, Ordering::Antinormal);
        if normal_power(k).to_operator_expr().unwrap() != normal {
            failures.push(format!("normal k={k}: oracle {}", print_expr(&normal)));
        }
        if antinormal_power(k).to_operator_expr().unwrap() != anti {
            failures.push(format!("antinormal k={k}: oracle {}", print_expr(&anti)));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(5) {
        failures.push(format!("took {elapsed:?}, limit 5 s"));
    }
    verdict(2, "closed forms equal the rewrite oracle for k = 0..12", &failures);
}

#[test]
fn criterion_03_stirling_identities() {
    let table = StirlingTable::new(13);
    let mut failures = Vec::new();
    for k in 0..=12u32 {
        for m in 0..=k {
            if stirling2(k, m) != table.get(k, m) {
                failures.push(format!("explicit sum != recurrence at S({k},{m})"));
            }
            let shifted = BigInt::from(m + 1) * table.get(k, m + 1) + table.get(k, m);
            if table.get(k + 1, m + 1) != shifted {
                failures.push(format!("shift identity fails at k={k}, m={m}"));
            }
        }
        for x in 0..=30i64 {
            let rhs: BigInt = (0..=k)
                .map(|m| table.get(k, m) * falling_factorial(x, m))
                .sum();
            if BigInt::from(x).pow(k) != rhs {
                failures.push(format!("falling factorial identity fails at x={x}, k={k}"));
            }
        }
    }
    verdict(3, "Stirling dual path, shift and falling-factorial identities", &failures);
}

const LEMMA_GAMMAS: [f64; 3] = [0.1, 0.5, 1.0];
const LEMMA_TOL: f64 = 1e-12;

fn floats(c: &Coefficients) -> Vec<f64> {
    match c {
        Coefficients::Float(v) => v.clone(),
        Coefficients::Exact(_) => panic!("expected float coefficients"),
    }
}

#[test]
fn criterion_04_normal_exp_coefficients() {
    let mut failures = Vec::new();
    for gamma in LEMMA_GAMMAS {
        let f = FunctionTable::from_float_fn(21, |x| (-gamma * x).exp()).unwrap();
        let generic = floats(normal_function(&f, 20).unwrap().coefficients());
        for m in 0..=20 {
            // Direct evaluation of (e^-g - 1)^m / m!, independent of the library.
            let direct = ((-gamma).exp() - 1.0).powi(m as i32)
                / factorial(m as u32).to_f64().unwrap();
            let closed = floats(lemma1_coefficients(gamma, 20).coefficients())[m];
            let err = (generic[m] - direct).abs().max((closed - direct).abs());
            if err > LEMMA_TOL {
                failures.push(format!("gamma={gamma} m={m}: error {err:e}"));
            }
        }
    }
    verdict(4, "normal-order difference path gives (e^-g - 1)^m / m!", &failures);
}

#[test]
fn criterion_05_antinormal_exp_coefficients() {
    let mut failures = Vec::new();
    for gamma in LEMMA_GAMMAS {
        let g = FunctionTable::from_float_fn(22, |u| (gamma * u).exp()).unwrap();
        let generic = floats(antinormal_function(&g, 20).unwrap().coefficients());
        for m in 0..=20 {
            let e = gamma.exp();
            let direct = e * (1.0 - e).powi(m as i32) / factorial(m as u32).to_f64().unwrap();
            let closed = floats(lemma2_coefficients(gamma, 20).coefficients())[m];
            let err = (generic[m] - direct).abs().max((closed - direct).abs());
            if err > LEMMA_TOL {
                failures.push(format!("gamma={gamma} m={m}: error {err:e}"));
            }
        }
    }
    verdict(5, "anti-normal difference path gives e^g (1 - e^g)^m / m!", &failures);
}

#[test]
fn criterion_06_coherent_expectation() {
    const TOL: f64 = 1e-8;
    const SERIES_M: usize = 200;
    const DIM: usize = 64;
    let gammas: [f64; 4] = [0.05, 0.1, 0.3, 0.6];
    let alphas = [
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(2.0, 0.0),
    ];
    let space = FockSpace::new(DIM).unwrap();
    let start = Instant::now();
    let mut failures = Vec::new();
    for gamma in gammas {
        for alpha in alphas {
            let closed = (alpha.norm_sqr() * ((-gamma).exp() - 1.0)).exp();
            assert!((expect_exp_coherent_closed(gamma, alpha) - closed).abs() < 1e-15);

            let series = expect_exp_coherent_series(gamma, alpha, SERIES_M);
            let err = (series.value - closed).abs();
            if !(err <= TOL) {
                failures.push(format!(
                    "series gamma={gamma} alpha={alpha}: error {err:.3e}, last term {:.3e}, {:?}",
                    series.last_term, series.status
                ));
            }

            let psi = StateVector::coherent(&space, alpha);
            match matrix_expectation(&lemma1_coefficients(gamma, 60), &psi, &space) {
                Ok(v) => {
                    let err = (v.re - closed).abs().max(v.im.abs());
                    if !(err <= TOL) {
                        failures.push(format!("matrix gamma={gamma} alpha={alpha}: error {err:.3e}"));
                    }
                }
                Err(e) => failures.push(format!("matrix gamma={gamma} alpha={alpha}: {e}")),
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(1) {
        failures.push(format!("took {elapsed:?}, limit 1 s"));
    }
    verdict(
        6,
        "coherent-state series (M = 200) and matrix (D = 64) match the closed form",
        &failures,
    );
}

#[test]
fn criterion_07_fock_expectation() {
    let mut failures = Vec::new();
    for gamma in [0.1, 0.3, 0.6] {
        for n in 0..=10u32 {
            let r = expect_exp_fock_series(gamma, n, 500);
            let closed = (-gamma * f64::from(n)).exp();
            let err = (r.value - closed).abs();
            if !(err <= 1e-8) || !r.converged() {
                failures.push(format!("gamma={gamma} n={n}: error {err:e}, {:?}", r.status));
            }
        }
    }
    for n in 0..=10u32 {
        let r = expect_exp_fock_series(0.8, n, 500);
        if !r.diverged() {
            failures.push(format!("gamma=0.8 n={n} not flagged diverged: {:?}", r.status));
        }
        let closed = expect_exp_fock_closed(0.8, n);
        if (closed - (-0.8 * f64::from(n)).exp()).abs() > 1e-15 {
            failures.push(format!("closed form wrong at gamma=0.8 n={n}"));
        }
    }
    verdict(7, "Fock-state series converge below ln 2 and diverge at gamma = 0.8", &failures);
}

#[test]
fn criterion_08_moment_identity() {
    let mut failures = Vec::new();
    for m in 0..=20u32 {
        for modulus in [0.0, 0.5, 1.0, 1.5, 2.0] {
            for phase in [0.0, 0.7, 2.0, -2.5] {
                let alpha = Complex64::from_polar(modulus, phase);
                let lhs = antinormal_moment(m, alpha);
                let rhs = factorial(m).to_f64().unwrap() * laguerre(m as usize, -alpha.norm_sqr());
                let rel = (lhs - rhs).abs() / lhs.abs();
                if !(rel <= 1e-9) {
                    failures.push(format!("m={m} alpha={alpha}: relative error {rel:e}"));
                }
            }
        }
    }
    verdict(8, "anti-normal coherent moments equal m! L_m(-|alpha|^2)", &failures);
}

/// Smallest `K` whose geometric tail bound on `sum_j x^j C(n+j, n)` is below
/// `eps`: once the term ratio `|x| (n+j+1)/(j+1)` drops under one, the tail
/// after term `j` is at most `t_j r / (1 - r)`.
fn tail_bound_truncation(x: f64, n: u32, eps: f64) -> usize {
    let ax = x.abs();
    let mut term = 1.0;
    let mut j = 0usize;
    loop {
        let ratio = ax * (j as f64 + 1.0 + f64::from(n)) / (j as f64 + 1.0);
        if ratio < 1.0 && term * ratio / (1.0 - ratio) < eps {
            return j;
        }
        term *= ratio;
        j += 1;
    }
}

#[test]
fn criterion_09_negative_binomial() {
    let mut failures = Vec::new();
    for x in [-0.6, -0.45, -0.3, -0.1, 0.0, 0.1, 0.3, 0.45, 0.6] {
        for n in 0..=8u32 {
            let k = tail_bound_truncation(x, n, 1e-13);
            let partial = negbinom_partial_sum(x, n, k);
            let limit = (1.0 - x).powi(-(n as i32) - 1);
            let err = (partial - limit).abs();
            if !(err <= 1e-10) {
                failures.push(format!("x={x} n={n} K={k}: error {err:e}"));
            }
        }
    }
    verdict(9, "negative-binomial partial sums reach (1-x)^(-n-1)", &failures);
}

#[test]
fn criterion_10_taylor_difference_identity() {
    let gamma = 0.5;
    let truncation = 60;
    let taylor: Vec<f64> = (0..=truncation)
        .map(|k| (-gamma as f64).powi(k as i32) / factorial(k as u32).to_f64().unwrap())
        .collect();
    let f = FunctionTable::from_float_fn(11, |x| (-gamma * x).exp()).unwrap();
    let mut failures = Vec::new();
    for m in 0..=10usize {
        let lhs = taylor_difference_check(&taylor, m, truncation).unwrap();
        let rhs =
            forward_difference(&f, m).unwrap().to_f64() / factorial(m as u32).to_f64().unwrap();
        let err = (lhs - rhs).abs();
        if !(err <= 1e-12) {
            failures.push(format!("m={m}: error {err:e}"));
        }
    }
    verdict(10, "Stirling-weighted Taylor sum equals forward difference / m!", &failures);
}

fn random_canonical(rng: &mut ChaCha8Rng) -> OperatorExpr {
    let ordering = if rng.gen() {
        Ordering::Normal
    } else {
        Ordering::Antinormal
    };
    let terms = rng.gen_range(0..6);
    OperatorExpr::from_terms(
        ordering,
        (0..terms).map(|_| {
            let mono = Monomial::new(rng.gen_range(0..5), rng.gen_range(0..5));
            let num = rng.gen_range(-40i64..=40);
            let den = rng.gen_range(1i64..=7);
            (mono, BigRational::new(num.into(), den.into()))
        }),
    )
}

#[test]
fn criterion_11_round_trip_and_confluence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0dca1c);
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let e = random_canonical(&mut rng);
        let printed = print_expr(&e);
        match parse(&printed) {
            Ok(words) => {
                let back = rewrite(&words, e.ordering());
                if back != e {
                    failures.push(format!("round trip changed {printed:?}"));
                }
            }
            Err(err) => failures.push(format!("cannot reparse {printed:?}: {err}")),
        }
    }
    for _ in 0..1000 {
        let len = rng.gen_range(0..=10);
        let letters: Vec<Letter> = (0..len)
            .map(|_| if rng.gen() { Letter::A } else { Letter::Adag })
            .collect();
        let words = vec![RawWord::unit(letters.clone())];
        for ordering in [Ordering::Normal, Ordering::Antinormal] {
            let reference = rewrite(&words, ordering);
            let mut chooser_rng = ChaCha8Rng::seed_from_u64(rng.gen());
            let mut random = |_: &[Letter], r: &[usize]| chooser_rng.gen_range(0..r.len());
            if rewrite_with(&words, ordering, &mut random) != reference {
                failures.push(format!("{ordering} form depends on rule order for {letters:?}"));
            }
        }
    }
    verdict(11, "printer/parser round trip and confluence under random rule order", &failures);
}
