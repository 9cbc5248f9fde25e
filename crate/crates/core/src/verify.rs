//! Identity suites behind `ordcalc verify`. Each check reports the largest
//! error it saw; exact checks report the largest absolute integer or rational
//! discrepancy, so a pass is always `0`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::combinatorics::{
    factorial, falling_factorial, forward_difference, stirling2, FunctionTable, StirlingTable,
};
use crate::fock::{
    antinormal_moment, expect_exp_coherent_closed, expect_exp_coherent_series,
    expect_exp_fock_closed, expect_exp_fock_series, laguerre, matrix_expectation,
    negbinom_partial_sum, FockSpace, StateVector,
};
use crate::opalgebra::{parse, rewrite_antinormal, rewrite_normal, Monomial, OperatorExpr, Ordering};
use crate::ordering::{
    antinormal_function, antinormal_power_from, lemma1_coefficients, lemma2_coefficients,
    normal_function, normal_power_from, taylor_difference_check, Coefficients,
};
use crate::scalar::{rational_to_f64, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Stirling,
    Lemmas,
    Fock,
    All,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub exact: bool,
}

impl IdentityCheck {
    fn exact(name: &'static str, max_error: f64) -> Self {
        IdentityCheck {
            name,
            max_error,
            tolerance: 0.0,
            exact: true,
        }
    }

    fn within(name: &'static str, max_error: f64, tolerance: f64) -> Self {
        IdentityCheck {
            name,
            max_error,
            tolerance,
            exact: false,
        }
    }

    pub fn passed(&self) -> bool {
        // NaN errors fail.
        self.max_error <= self.tolerance
    }
}

pub fn run(suite: Suite) -> Vec<IdentityCheck> {
    match suite {
        Suite::Stirling => stirling_suite(),
        Suite::Lemmas => lemma_suite(),
        Suite::Fock => fock_suite(),
        Suite::All => {
            let mut all = stirling_suite();
            all.extend(lemma_suite());
            all.extend(fock_suite());
            all
        }
    }
}

/// Largest `k` for which the exact identities are checked.
pub const EXACT_MAX_K: u32 = 12;

fn int_gap(a: &BigInt, b: &BigInt) -> f64 {
    (a - b).abs().to_f64().unwrap_or(f64::INFINITY)
}

fn expr_gap(a: &OperatorExpr, b: &OperatorExpr) -> f64 {
    let mut worst: f64 = 0.0;
    for (m, _) in a.terms().chain(b.terms()) {
        let d = a.coefficient(m) - b.coefficient(m);
        worst = worst.max(rational_to_f64(&d.abs()));
    }
    worst
}

fn stirling_suite() -> Vec<IdentityCheck> {
    let kmax = EXACT_MAX_K;
    let table = StirlingTable::new(kmax + 1);

    let mut dual = 0.0f64;
    let mut shift = 0.0f64;
    for k in 0..=kmax {
        for m in 0..=k {
            dual = dual.max(int_gap(&stirling2(k, m), &table.get(k, m)));
            let rhs = BigInt::from(m + 1) * table.get(k, m + 1) + table.get(k, m);
            shift = shift.max(int_gap(&table.get(k + 1, m + 1), &rhs));
        }
    }

    let mut falling = 0.0f64;
    for x in 0..=30i64 {
        for k in 0..=kmax {
            let rhs: BigInt = (0..=k)
                .map(|m| table.get(k, m) * falling_factorial(x, m))
                .sum();
            falling = falling.max(int_gap(&BigInt::from(x).pow(k), &rhs));
        }
    }

    let mut monomial_diff = 0.0f64;
    for m in 0..=kmax {
        let t = FunctionTable::from_integer_fn(m as usize + 1, |x| BigInt::from(x).pow(m))
            .expect("nonempty");
        let d = forward_difference(&t, m as usize).expect("long enough");
        let target = Scalar::Exact(BigRational::from_integer(factorial(m)));
        let gap = rational_to_f64(&(d.as_exact().unwrap() - target.as_exact().unwrap()).abs());
        monomial_diff = monomial_diff.max(gap);
    }

    let mut oracle_normal = 0.0f64;
    let mut oracle_anti = 0.0f64;
    let mut function_path = 0.0f64;
    for k in 0..=kmax {
        let words = parse(&format!("n^{k}")).expect("valid expression");
        let closed_n = normal_power_from(&table, k);
        let closed_a = antinormal_power_from(&table, k);
        oracle_normal = oracle_normal.max(expr_gap(
            &closed_n.to_operator_expr().unwrap(),
            &rewrite_normal(&words),
        ));
        oracle_anti = oracle_anti.max(expr_gap(
            &closed_a.to_operator_expr().unwrap(),
            &rewrite_antinormal(&words),
        ));

        let len = k as usize;
        let f = FunctionTable::from_integer_fn(len + 1, |x| BigInt::from(x).pow(k)).unwrap();
        let g = FunctionTable::from_integer_fn(len + 2, |u| BigInt::from(-u).pow(k)).unwrap();
        let via_f = normal_function(&f, len).unwrap().to_operator_expr().unwrap();
        let via_g = antinormal_function(&g, len).unwrap().to_operator_expr().unwrap();
        function_path = function_path
            .max(expr_gap(&via_f, &closed_n.to_operator_expr().unwrap()))
            .max(expr_gap(&via_g, &closed_a.to_operator_expr().unwrap()));
    }

    vec![
        IdentityCheck::exact("stirling explicit sum = recurrence", dual),
        IdentityCheck::exact("stirling shift S(k+1,m+1) = (m+1)S(k,m+1) + S(k,m)", shift),
        IdentityCheck::exact("x^k = sum_m S(k,m) x^(m) falling", falling),
        IdentityCheck::exact("forward difference of x^m is m!", monomial_diff),
        IdentityCheck::exact("normal_power = rewrite oracle", oracle_normal),
        IdentityCheck::exact("antinormal_power = rewrite oracle", oracle_anti),
        IdentityCheck::exact("difference path reproduces powers", function_path),
    ]
}

pub const LEMMA_GAMMAS: [f64; 3] = [0.1, 0.5, 1.0];
pub const LEMMA_MAX_M: usize = 20;
pub const LEMMA_TOL: f64 = 1e-12;

fn float_coefficients(c: &Coefficients) -> Vec<f64> {
    c.to_f64()
}

fn lemma_suite() -> Vec<IdentityCheck> {
    let mut lemma1 = 0.0f64;
    let mut lemma2 = 0.0f64;
    for gamma in LEMMA_GAMMAS {
        let f = FunctionTable::from_float_fn(LEMMA_MAX_M + 1, |x| (-gamma * x).exp()).unwrap();
        let g = FunctionTable::from_float_fn(LEMMA_MAX_M + 2, |u| (gamma * u).exp()).unwrap();
        let generic_n = float_coefficients(normal_function(&f, LEMMA_MAX_M).unwrap().coefficients());
        let closed_n = float_coefficients(lemma1_coefficients(gamma, LEMMA_MAX_M).coefficients());
        let generic_a =
            float_coefficients(antinormal_function(&g, LEMMA_MAX_M).unwrap().coefficients());
        let closed_a = float_coefficients(lemma2_coefficients(gamma, LEMMA_MAX_M).coefficients());
        for m in 0..=LEMMA_MAX_M {
            lemma1 = lemma1.max((generic_n[m] - closed_n[m]).abs());
            lemma2 = lemma2.max((generic_a[m] - closed_a[m]).abs());
        }
    }

    let gamma = 0.5;
    let truncation = 60;
    let taylor = exp_taylor(-gamma, truncation);
    let f = FunctionTable::from_float_fn(11, |x| (-gamma * x).exp()).unwrap();
    let mut taylor_gap = 0.0f64;
    for m in 0..=10usize {
        let lhs = taylor_difference_check(&taylor, m, truncation).unwrap();
        let rhs = forward_difference(&f, m).unwrap().to_f64()
            / factorial(m as u32).to_f64().unwrap();
        taylor_gap = taylor_gap.max((lhs - rhs).abs());
    }

    vec![
        IdentityCheck::within("normal exp: difference path = (e^-g - 1)^m / m!", lemma1, LEMMA_TOL),
        IdentityCheck::within(
            "anti-normal exp: difference path = e^g (1 - e^g)^m / m!",
            lemma2,
            LEMMA_TOL,
        ),
        IdentityCheck::within(
            "stirling-weighted taylor sum = forward difference / m!",
            taylor_gap,
            LEMMA_TOL,
        ),
    ]
}

/// Taylor coefficients `rate^k / k!` of `e^(rate x)` up to `k = truncation`.
pub fn exp_taylor(rate: f64, truncation: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(truncation + 1);
    let mut t = 1.0;
    for k in 0..=truncation {
        if k > 0 {
            t *= rate / k as f64;
        }
        out.push(t);
    }
    out
}

pub const FOCK_TOL: f64 = 1e-8;
pub const COHERENT_GAMMAS: [f64; 4] = [0.05, 0.1, 0.3, 0.6];
pub const FOCK_GAMMAS: [f64; 3] = [0.1, 0.3, 0.6];

pub fn coherent_alphas() -> [Complex64; 4] {
    [
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(2.0, 0.0),
    ]
}

/// Series length at which every coherent grid point with `gamma < ln 2` has
/// settled: the slowest case (`gamma = 0.6`, `alpha = 2`) peaks near `m = 100`
/// and its terms fall below 1e-15 only past `m = 800`.
pub const COHERENT_SERIES_SETTLED_M: usize = 2000;

fn fock_suite() -> Vec<IdentityCheck> {
    let moment_alphas = [
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
        Complex64::new(1.0, 1.0),
        Complex64::new(0.0, -1.5),
        Complex64::new(2.0, 0.0),
    ];
    let mut moment_rel = 0.0f64;
    for m in 0..=20u32 {
        let mf = factorial(m).to_f64().unwrap();
        for alpha in moment_alphas {
            let lhs = antinormal_moment(m, alpha);
            let rhs = mf * laguerre(m as usize, -alpha.norm_sqr());
            moment_rel = moment_rel.max((lhs - rhs).abs() / lhs.abs());
        }
    }

    let big = FockSpace::new(128).unwrap();
    let mut matrix_moment_rel = 0.0f64;
    for alpha in coherent_alphas() {
        let psi = StateVector::coherent(&big, alpha);
        for m in 0..=10u32 {
            let mono = OperatorExpr::from_terms(
                Ordering::Antinormal,
                [(Monomial::diagonal(m), BigRational::from_integer(1.into()))],
            );
            let v = match matrix_expectation(&mono, &psi, &big) {
                Ok(v) => v.re,
                Err(_) => f64::NAN,
            };
            let exact = antinormal_moment(m, alpha);
            matrix_moment_rel = matrix_moment_rel.max((v - exact).abs() / exact);
        }
    }

    let mut coherent_series = 0.0f64;
    let mut coherent_matrix = 0.0f64;
    let space = FockSpace::new(64).unwrap();
    for gamma in COHERENT_GAMMAS {
        for alpha in coherent_alphas() {
            let closed = expect_exp_coherent_closed(gamma, alpha);
            let series = expect_exp_coherent_series(gamma, alpha, COHERENT_SERIES_SETTLED_M);
            coherent_series = coherent_series.max((series.value - closed).abs());
            let psi = StateVector::coherent(&space, alpha);
            let v = matrix_expectation(&lemma1_coefficients(gamma, 60), &psi, &space)
                .map(|z| z.re)
                .unwrap_or(f64::NAN);
            coherent_matrix = coherent_matrix.max((v - closed).abs());
        }
    }

    let mut fock_series = 0.0f64;
    for gamma in FOCK_GAMMAS {
        for n in 0..=10u32 {
            let r = expect_exp_fock_series(gamma, n, 500);
            fock_series = fock_series.max((r.value - expect_exp_fock_closed(gamma, n)).abs());
        }
    }

    let mut negbinom = 0.0f64;
    for x in [-0.6, -0.3, 0.0, 0.3, 0.6] {
        for n in 0..=8u32 {
            let exact = (1.0f64 - x).powi(-(n as i32) - 1);
            negbinom = negbinom.max((negbinom_partial_sum(x, n, 200) - exact).abs());
        }
    }

    vec![
        IdentityCheck::within("anti-normal moment = m! L_m(-|a|^2) (relative)", moment_rel, 1e-9),
        IdentityCheck::within(
            "matrix a^m ad^m on |alpha> = analytic moment (relative, D=128)",
            matrix_moment_rel,
            FOCK_TOL,
        ),
        IdentityCheck::within(
            "coherent anti-normal series = closed form",
            coherent_series,
            FOCK_TOL,
        ),
        IdentityCheck::within(
            "coherent normal-order matrix evaluation = closed form (D=64)",
            coherent_matrix,
            FOCK_TOL,
        ),
        IdentityCheck::within("fock anti-normal series = e^(-g n)", fock_series, FOCK_TOL),
        IdentityCheck::within(
            "truncated commutator [a, ad] = 1 below cutoff (D=64)",
            space.commutator_defect(),
            1e-12,
        ),
        IdentityCheck::within(
            "negative binomial partial sum = (1 - x)^(-n-1)",
            negbinom,
            1e-10,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for check in run(Suite::All) {
            assert!(
                check.passed(),
                "{}: error {:e} > {:e}",
                check.name,
                check.max_error,
                check.tolerance
            );
            if check.exact {
                assert_eq!(check.max_error, 0.0);
            }
        }
    }

    #[test]
    fn suites_partition_all() {
        let total = run(Suite::Stirling).len() + run(Suite::Lemmas).len() + run(Suite::Fock).len();
        assert_eq!(run(Suite::All).len(), total);
    }

    #[test]
    fn nan_fails() {
        assert!(!IdentityCheck::within("x", f64::NAN, 1.0).passed());
    }
}
