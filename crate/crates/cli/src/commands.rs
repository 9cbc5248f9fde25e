use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::{json, Value};

use ordcalc_core::combinatorics::{FunctionTable, StirlingTable};
use ordcalc_core::fock::{
    expect_exp_coherent_closed, expect_exp_coherent_series, expect_exp_fock_closed,
    expect_exp_fock_series, matrix_expectation, FockSpace, StateVector, SERIES_TOL,
};
use ordcalc_core::opalgebra::{parse, print_expr, rewrite, Monomial, OperatorExpr, Ordering};
use ordcalc_core::ordering::{
    antinormal_function, antinormal_power, lemma1_coefficients, lemma2_coefficients,
    normal_function, normal_power, Coefficients, OrderedExpansion, Source,
};
use ordcalc_core::verify::{self, Suite};
use ordcalc_core::Error;

use crate::output::{float_cell, params, Convergence, Output, OutputRecord};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TRUNCATION: i32 = 3;

/// A command that could not produce output.
#[derive(Debug)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl CommandError {
    pub fn usage(message: impl Into<String>) -> Self {
        CommandError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::TruncationViolation { .. } | Error::FockIndexOutOfRange { .. } => {
                EXIT_TRUNCATION
            }
            _ => EXIT_USAGE,
        };
        CommandError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CommandResult = Result<Output, CommandError>;

fn ordering_of(antinormal: bool) -> Ordering {
    if antinormal {
        Ordering::Antinormal
    } else {
        Ordering::Normal
    }
}

pub fn stirling(max_k: u32) -> CommandResult {
    let table = StirlingTable::new(max_k);
    let rows: Vec<Vec<String>> = table
        .rows()
        .map(|r| r.iter().map(BigInt::to_string).collect())
        .collect();
    let text = rows
        .iter()
        .enumerate()
        .map(|(k, r)| format!("{k}: {}", r.join(" ")))
        .collect::<Vec<_>>()
        .join("\n");
    let mut csv = vec![vec!["k".into(), "m".into(), "value".into()]];
    for (k, r) in rows.iter().enumerate() {
        for (m, v) in r.iter().enumerate() {
            csv.push(vec![k.to_string(), m.to_string(), v.clone()]);
        }
    }
    Ok(Output {
        record: OutputRecord {
            command: "stirling",
            parameters: params(vec![("max_k", json!(max_k))]),
            exact: true,
            result: json!({ "rows": rows }),
            convergence: None,
            oracle: None,
            agrees: None,
        },
        text,
        csv,
        exit_code: 0,
    })
}

fn coefficient_cells(e: &OrderedExpansion) -> Vec<String> {
    match e.coefficients() {
        Coefficients::Exact(v) => v.iter().map(BigRational::to_string).collect(),
        Coefficients::Float(v) => v.iter().map(|x| float_cell(*x)).collect(),
    }
}

fn coefficient_json(e: &OrderedExpansion) -> Value {
    match e.coefficients() {
        Coefficients::Exact(v) => json!(v.iter().map(BigRational::to_string).collect::<Vec<_>>()),
        Coefficients::Float(v) => json!(v),
    }
}

fn expansion_table(e: &OrderedExpansion) -> (String, Vec<Vec<String>>) {
    let cells = coefficient_cells(e);
    let mut text = String::from("m coefficient\n");
    let mut csv = vec![vec!["m".to_string(), "coefficient".to_string()]];
    for (m, c) in cells.into_iter().enumerate() {
        text.push_str(&format!("{m} {c}\n"));
        csv.push(vec![m.to_string(), c]);
    }
    (text, csv)
}

/// Closed-form expansion of `n^k`, cross-checked against the rewrite engine.
pub fn expand_power(k: u32, antinormal: bool) -> CommandResult {
    let ordering = ordering_of(antinormal);
    let closed = if antinormal {
        antinormal_power(k)
    } else {
        normal_power(k)
    };
    let words = parse(&format!("n^{k}")).expect("n^k is well formed");
    let oracle = rewrite(&words, ordering);
    let closed_expr = closed.to_operator_expr().expect("powers are exact");
    let agrees = closed_expr == oracle;

    let oracle_dense: Vec<String> = (0..=k)
        .map(|m| oracle.coefficient(Monomial::diagonal(m)).to_string())
        .collect();
    let (table, csv) = expansion_table(&closed);
    let text = format!(
        "n^{k} in {ordering} order: {}\n{table}oracle agrees: {agrees}",
        print_expr(&closed_expr)
    );
    Ok(Output {
        record: OutputRecord {
            command: "expand",
            parameters: params(vec![("power", json!(k)), ("order", json!(ordering.name()))]),
            exact: true,
            result: json!({ "ordering": ordering.name(), "coefficients": coefficient_json(&closed) }),
            convergence: None,
            oracle: Some(json!({
                "canonical": print_expr(&oracle),
                "coefficients": oracle_dense,
            })),
            agrees: Some(agrees),
        },
        text,
        csv,
        exit_code: if agrees { 0 } else { EXIT_FAILURE },
    })
}

/// Generic difference-operator expansion of `exp(-gamma x)` from its samples,
/// differenced exactly so only the sampling itself rounds.
fn exp_generic(gamma: f64, max_m: usize, antinormal: bool) -> Result<Vec<f64>, CommandError> {
    let sample = |rate: f64, len: usize| -> Result<FunctionTable, CommandError> {
        let samples = (0..len)
            .map(|x| {
                BigRational::from_float((rate * x as f64).exp())
                    .ok_or_else(|| CommandError::usage("exp(-gamma x) overflows at this order"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FunctionTable::exact(samples)?)
    };
    let expansion = if antinormal {
        antinormal_function(&sample(gamma, max_m + 2)?, max_m)?
    } else {
        normal_function(&sample(-gamma, max_m + 1)?, max_m)?
    };
    Ok(expansion.coefficients().to_f64())
}

/// Agreement tolerance between the lemma closed forms and the generic path.
pub const LEMMA_AGREEMENT_TOL: f64 = 1e-12;

pub fn expand_exp(gamma: f64, antinormal: bool, max_m: usize) -> CommandResult {
    if !gamma.is_finite() {
        return Err(CommandError::usage("--exp must be finite"));
    }
    let ordering = ordering_of(antinormal);
    let closed = if antinormal {
        lemma2_coefficients(gamma, max_m)
    } else {
        lemma1_coefficients(gamma, max_m)
    };
    let generic = exp_generic(gamma, max_m, antinormal)?;
    let closed_f = closed.coefficients().to_f64();
    let deviation = closed_f
        .iter()
        .zip(&generic)
        .map(|(c, g)| (c - g).abs() / c.abs().max(1.0))
        .fold(0.0f64, f64::max);
    let agrees = deviation <= LEMMA_AGREEMENT_TOL;

    let lemma = match closed.source() {
        Source::Lemma1 { .. } => "(e^-g - 1)^m / m!",
        _ => "e^g (1 - e^g)^m / m!",
    };
    let (table, csv) = expansion_table(&closed);
    let text = format!(
        "exp(-{g} n) in {ordering} order, c_m = {lemma}\n{table}difference path agrees: {agrees} (max scaled deviation {dev})",
        g = float_cell(gamma),
        dev = float_cell(deviation),
    );
    Ok(Output {
        record: OutputRecord {
            command: "expand",
            parameters: params(vec![
                ("exp", json!(gamma)),
                ("order", json!(ordering.name())),
                ("max_m", json!(max_m)),
            ]),
            exact: false,
            result: json!({ "ordering": ordering.name(), "coefficients": coefficient_json(&closed) }),
            convergence: None,
            oracle: Some(json!({ "coefficients": generic, "max_scaled_deviation": deviation })),
            agrees: Some(agrees),
        },
        text,
        csv,
        exit_code: if agrees { 0 } else { EXIT_FAILURE },
    })
}

pub fn rewrite_expr(expr: &str, antinormal: bool) -> CommandResult {
    let ordering = ordering_of(antinormal);
    let words = parse(expr).map_err(|e| CommandError::usage(format!("{e}\n  {expr}\n  {}^", " ".repeat(e.offset))))?;
    let canonical = rewrite(&words, ordering);
    let printed = print_expr(&canonical);
    let terms: Vec<Value> = canonical
        .terms()
        .map(|(m, c)| json!({ "p": m.p, "q": m.q, "coefficient": c.to_string() }))
        .collect();
    let mut csv = vec![vec!["p".to_string(), "q".to_string(), "coefficient".to_string()]];
    csv.extend(
        canonical
            .terms()
            .map(|(m, c)| vec![m.p.to_string(), m.q.to_string(), c.to_string()]),
    );
    Ok(Output {
        record: OutputRecord {
            command: "rewrite",
            parameters: params(vec![("expr", json!(expr)), ("order", json!(ordering.name()))]),
            exact: true,
            result: json!({ "canonical": printed, "terms": terms }),
            convergence: None,
            oracle: None,
            agrees: None,
        },
        text: printed,
        csv,
        exit_code: 0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum StateKind {
    Coherent,
    Fock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Closed,
    Series,
    Matrix,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Series => "series",
            Method::Matrix => "matrix",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum State {
    Coherent(Complex64),
    Fock(u32),
}

#[derive(Debug, Clone, Copy)]
pub struct ExpectRequest {
    pub state: State,
    pub gamma: f64,
    pub method: Method,
    pub dim: usize,
    pub max_m: usize,
    pub antinormal: bool,
}

/// `<psi| e^(-gamma n) |psi>` with the matrix method: the chosen lemma
/// expansion applied to the truncated state. Returns the value and the
/// contribution of the highest-order term.
fn expect_matrix(req: &ExpectRequest) -> Result<(f64, f64), CommandError> {
    let space = FockSpace::new(req.dim)?;
    let psi = match req.state {
        State::Coherent(alpha) => StateVector::coherent(&space, alpha),
        State::Fock(n) => StateVector::fock(&space, n as usize)?,
    };
    let expansion = if req.antinormal {
        lemma2_coefficients(req.gamma, req.max_m)
    } else {
        lemma1_coefficients(req.gamma, req.max_m)
    };
    let value = matrix_expectation(&expansion, &psi, &space)?;
    let top = req.max_m;
    let c_top = expansion.coefficients().to_f64()[top];
    let last = OperatorExpr::from_terms(
        expansion.ordering(),
        BigRational::from_float(c_top).map(|c| (Monomial::diagonal(top as u32), c)),
    );
    let last_term = matrix_expectation(&last, &psi, &space)?.re;
    Ok((value.re, last_term))
}

pub fn expect(req: ExpectRequest) -> CommandResult {
    if !req.gamma.is_finite() {
        return Err(CommandError::usage("--gamma must be finite"));
    }
    let (value, convergence) = match req.method {
        Method::Closed => {
            let v = match req.state {
                State::Coherent(alpha) => expect_exp_coherent_closed(req.gamma, alpha),
                State::Fock(n) => expect_exp_fock_closed(req.gamma, n),
            };
            (v, None)
        }
        Method::Series => {
            let r = match req.state {
                State::Coherent(alpha) => expect_exp_coherent_series(req.gamma, alpha, req.max_m),
                State::Fock(n) => expect_exp_fock_series(req.gamma, n, req.max_m),
            };
            (r.value, Some(Convergence::from(&r)))
        }
        Method::Matrix => {
            let (v, last_term) = expect_matrix(&req)?;
            let converged = last_term.abs() <= SERIES_TOL * v.abs().max(1.0);
            (
                v,
                Some(Convergence {
                    converged,
                    diverged: false,
                    last_term,
                    terms: req.max_m + 1,
                }),
            )
        }
    };

    let mut p = Vec::new();
    let (state_name, state_cells) = match req.state {
        State::Coherent(alpha) => {
            p.push(("alpha_re", json!(alpha.re)));
            p.push(("alpha_im", json!(alpha.im)));
            (
                "coherent",
                vec![float_cell(alpha.re), float_cell(alpha.im), String::new()],
            )
        }
        State::Fock(n) => {
            p.push(("n", json!(n)));
            ("fock", vec![String::new(), String::new(), n.to_string()])
        }
    };
    p.push(("state", json!(state_name)));
    p.push(("gamma", json!(req.gamma)));
    p.push(("method", json!(req.method.name())));
    if req.method != Method::Closed {
        p.push(("max_m", json!(req.max_m)));
    }
    if req.method == Method::Matrix {
        p.push(("dim", json!(req.dim)));
        p.push(("order", json!(ordering_of(req.antinormal).name())));
    }

    let converged = convergence.as_ref().is_none_or(|c| c.converged);
    let mut text = float_cell(value).to_string();
    if let Some(c) = &convergence {
        let status = if c.diverged {
            "diverged"
        } else if c.converged {
            "converged"
        } else {
            "not converged"
        };
        text.push_str(&format!(
            "\n{status} after {} terms (last term {})",
            c.terms,
            float_cell(c.last_term)
        ));
    }
    let mut row = vec![state_name.to_string()];
    row.extend(state_cells);
    row.extend([
        float_cell(req.gamma),
        req.method.name().to_string(),
        float_cell(value),
        converged.to_string(),
    ]);
    let header = ["state", "alpha_re", "alpha_im", "n", "gamma", "method", "value", "converged"]
        .map(String::from)
        .to_vec();

    Ok(Output {
        record: OutputRecord {
            command: "expect",
            parameters: params(p),
            exact: false,
            result: json!({ "value": value }),
            convergence,
            oracle: None,
            agrees: None,
        },
        text,
        csv: vec![header, row],
        exit_code: 0,
    })
}

pub fn verify(suite: Suite, suite_name: &str) -> CommandResult {
    let checks = verify::run(suite);
    let all_passed = checks.iter().all(|c| c.passed());
    let identities: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "max_error": c.max_error,
                "tolerance": c.tolerance,
                "exact": c.exact,
                "passed": c.passed(),
            })
        })
        .collect();
    let text = checks
        .iter()
        .map(|c| {
            format!(
                "{} {} (max error {}, tolerance {})",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                float_cell(c.max_error),
                float_cell(c.tolerance)
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    let mut csv = vec![["name", "max_error", "tolerance", "passed"].map(String::from).to_vec()];
    csv.extend(checks.iter().map(|c| {
        vec![
            c.name.to_string(),
            float_cell(c.max_error),
            float_cell(c.tolerance),
            c.passed().to_string(),
        ]
    }));
    Ok(Output {
        record: OutputRecord {
            command: "verify",
            parameters: params(vec![("suite", json!(suite_name))]),
            exact: checks.iter().all(|c| c.exact),
            result: json!({ "passed": all_passed, "identities": identities }),
            convergence: None,
            oracle: None,
            agrees: None,
        },
        text,
        csv,
        exit_code: if all_passed { 0 } else { EXIT_FAILURE },
    })
}
