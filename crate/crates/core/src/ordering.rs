//! Closed-form normal and anti-normal expansions of functions of `n = a† a`.
//!
//! Powers expand through Stirling numbers of the second kind:
//!
//! ```text
//! n^k = sum_m S(k, m) (a†)^m a^m
//!     = (-1)^k sum_m (-1)^m S(k+1, m+1) a^m (a†)^m
//! ```
//!
//! and a function sampled at the integers expands through its forward
//! differences at zero. All series are formal: the caller always picks the
//! truncation order.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{factorial, forward_difference, FunctionTable, StirlingTable};
use crate::error::{Error, Result};
use crate::opalgebra::{Monomial, OperatorExpr, Ordering};
use crate::scalar::{rational_to_f64, Scalar};

/// Where an expansion came from.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Power(u32),
    Function { max_m: usize },
    /// `exp(-gamma n)` through the normal-order closed form.
    Lemma1 { gamma: f64 },
    /// `exp(-gamma n)` through the anti-normal closed form.
    Lemma2 { gamma: f64 },
}

/// Dense coefficient list indexed by `m`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficients {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl Coefficients {
    pub fn len(&self) -> usize {
        match self {
            Coefficients::Exact(v) => v.len(),
            Coefficients::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coefficients::Exact(_))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match self {
            Coefficients::Exact(v) => v.iter().map(rational_to_f64).collect(),
            Coefficients::Float(v) => v.clone(),
        }
    }
}

/// `sum_m c_m (a†)^m a^m` (normal) or `sum_m c_m a^m (a†)^m` (anti-normal).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedExpansion {
    ordering: Ordering,
    coefficients: Coefficients,
    source: Source,
}

impl OrderedExpansion {
    pub fn new(ordering: Ordering, coefficients: Coefficients, source: Source) -> Self {
        OrderedExpansion {
            ordering,
            coefficients,
            source,
        }
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn coefficients(&self) -> &Coefficients {
        &self.coefficients
    }

    pub fn is_exact(&self) -> bool {
        self.coefficients.is_exact()
    }

    /// Highest stored `m`.
    pub fn max_m(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// `c_m`, zero past the stored range.
    pub fn coefficient(&self, m: usize) -> Scalar {
        match &self.coefficients {
            Coefficients::Exact(v) => Scalar::Exact(v.get(m).cloned().unwrap_or_default()),
            Coefficients::Float(v) => Scalar::Float(v.get(m).copied().unwrap_or(0.0)),
        }
    }

    /// The same operator as an [`OperatorExpr`], for comparison with the
    /// rewrite engine. `None` for floating expansions.
    pub fn to_operator_expr(&self) -> Option<OperatorExpr> {
        match &self.coefficients {
            Coefficients::Exact(v) => Some(OperatorExpr::from_terms(
                self.ordering,
                v.iter()
                    .enumerate()
                    .map(|(m, c)| (Monomial::diagonal(m as u32), c.clone())),
            )),
            Coefficients::Float(_) => None,
        }
    }
}

fn int(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// `n^k = sum_m S(k, m) (a†)^m a^m`.
pub fn normal_power(k: u32) -> OrderedExpansion {
    normal_power_from(&StirlingTable::new(k), k)
}

/// [`normal_power`] reading from a shared table built to at least `k`.
pub fn normal_power_from(table: &StirlingTable, k: u32) -> OrderedExpansion {
    let coefficients = table.row(k).iter().map(int).collect();
    OrderedExpansion::new(
        Ordering::Normal,
        Coefficients::Exact(coefficients),
        Source::Power(k),
    )
}

/// `n^k = sum_m (-1)^(k+m) S(k+1, m+1) a^m (a†)^m`.
pub fn antinormal_power(k: u32) -> OrderedExpansion {
    antinormal_power_from(&StirlingTable::new(k + 1), k)
}

/// [`antinormal_power`] reading from a shared table built to at least `k + 1`.
pub fn antinormal_power_from(table: &StirlingTable, k: u32) -> OrderedExpansion {
    let coefficients = (0..=k)
        .map(|m| {
            let s = int(&table.get(k + 1, m + 1));
            if (k + m).is_multiple_of(2) {
                s
            } else {
                -s
            }
        })
        .collect();
    OrderedExpansion::new(
        Ordering::Antinormal,
        Coefficients::Exact(coefficients),
        Source::Power(k),
    )
}

fn require_samples(f: &FunctionTable, needed: usize) -> Result<()> {
    if f.len() < needed {
        return Err(Error::TableTooShort {
            needed,
            available: f.len(),
        });
    }
    Ok(())
}

fn float_factorial(m: usize) -> f64 {
    factorial(m as u32).to_f64().unwrap_or(f64::INFINITY)
}

/// Leading differences `Δ^0 f(0), ..., Δ^count-1 f(0)`.
fn leading_differences(f: &FunctionTable, count: usize) -> Result<Vec<Scalar>> {
    (0..count).map(|m| forward_difference(f, m)).collect()
}

/// `f(n) = sum_{m <= max_m} Δ^m f(0) / m! (a†)^m a^m`, from samples
/// `f(0), ..., f(max_m)`.
pub fn normal_function(f: &FunctionTable, max_m: usize) -> Result<OrderedExpansion> {
    require_samples(f, max_m + 1)?;
    let diffs = leading_differences(f, max_m + 1)?;
    let coefficients = match f {
        FunctionTable::Exact(_) => Coefficients::Exact(
            diffs
                .into_iter()
                .enumerate()
                .map(|(m, d)| {
                    let d = d.as_exact().expect("exact table").clone();
                    d / int(&factorial(m as u32))
                })
                .collect(),
        ),
        FunctionTable::Float(_) => Coefficients::Float(
            diffs
                .into_iter()
                .enumerate()
                .map(|(m, d)| d.to_f64() / float_factorial(m))
                .collect(),
        ),
    };
    Ok(OrderedExpansion::new(
        Ordering::Normal,
        coefficients,
        Source::Function { max_m },
    ))
}

/// Anti-normal expansion `f(n) = sum_m c_m a^m (a†)^m` with
/// `c_m = (-1)^m (Δ^m g(0) + Δ^(m+1) g(0)) / m!`.
///
/// Takes the reflected samples `g(u) = f(-u)` at `u = 0, ..., max_m + 1`; the
/// extra sample feeds the `Δ^(max_m+1)` term.
pub fn antinormal_function(g: &FunctionTable, max_m: usize) -> Result<OrderedExpansion> {
    require_samples(g, max_m + 2)?;
    let diffs = leading_differences(g, max_m + 2)?;
    let coefficients = match g {
        FunctionTable::Exact(_) => Coefficients::Exact(
            (0..=max_m)
                .map(|m| {
                    let sum = diffs[m].as_exact().expect("exact table")
                        + diffs[m + 1].as_exact().expect("exact table");
                    let c = sum / int(&factorial(m as u32));
                    if m % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        ),
        FunctionTable::Float(_) => Coefficients::Float(
            (0..=max_m)
                .map(|m| {
                    let c = (diffs[m].to_f64() + diffs[m + 1].to_f64()) / float_factorial(m);
                    if m % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        ),
    };
    Ok(OrderedExpansion::new(
        Ordering::Antinormal,
        coefficients,
        Source::Function { max_m },
    ))
}

/// `c_0 * x^m / m!` for `m = 0..=max_m`.
fn exponential_series(c0: f64, x: f64, max_m: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(max_m + 1);
    let mut c = c0;
    for m in 0..=max_m {
        if m > 0 {
            c *= x / m as f64;
        }
        out.push(c);
    }
    out
}

/// Normal-order coefficients of `exp(-gamma n)`: `(e^-gamma - 1)^m / m!`.
pub fn lemma1_coefficients(gamma: f64, max_m: usize) -> OrderedExpansion {
    OrderedExpansion::new(
        Ordering::Normal,
        Coefficients::Float(exponential_series(1.0, (-gamma).exp_m1(), max_m)),
        Source::Lemma1 { gamma },
    )
}

/// Anti-normal coefficients of `exp(-gamma n)`: `e^gamma (1 - e^gamma)^m / m!`.
pub fn lemma2_coefficients(gamma: f64, max_m: usize) -> OrderedExpansion {
    OrderedExpansion::new(
        Ordering::Antinormal,
        Coefficients::Float(exponential_series(gamma.exp(), -gamma.exp_m1(), max_m)),
        Source::Lemma2 { gamma },
    )
}

/// `sum_{k=m}^{truncation} taylor[k] S(k, m)`, the Stirling-weighted Taylor
/// sum that equals `Δ^m f(0) / m!` for analytic `f` as the truncation grows.
/// `taylor[k]` holds `f^(k)(0) / k!`.
pub fn taylor_difference_check(taylor: &[f64], m: usize, truncation: usize) -> Result<f64> {
    if taylor.len() <= truncation {
        return Err(Error::TableTooShort {
            needed: truncation + 1,
            available: taylor.len(),
        });
    }
    let table = StirlingTable::new(truncation as u32);
    let mut sum = 0.0;
    for (k, t) in taylor.iter().enumerate().take(truncation + 1).skip(m) {
        let s = table.get(k as u32, m as u32);
        if !s.is_zero() {
            sum += t * s.to_f64().unwrap_or(f64::INFINITY);
        }
    }
    Ok(sum)
}
