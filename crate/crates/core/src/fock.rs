//! Truncated Fock-space numerics used to check the ordered expansions on
//! actual states.
//!
//! The basis is `|0>, ..., |D-1>`. Lowering is exact on this basis; raising
//! drops whatever lands on `|D>`, so every anti-normal evaluation checks that
//! the state sits far enough below the cutoff.

use ndarray::{Array1, Array2};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;

use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::opalgebra::{Monomial, OperatorExpr, Ordering};
use crate::ordering::{Coefficients, OrderedExpansion};
use crate::scalar::rational_to_f64;

/// Amplitudes at or below this magnitude count as outside a state's support.
pub const SUPPORT_EPS: f64 = 1e-13;

/// A series counts as converged once its last term is this small relative to
/// `max(1, |value|)`.
pub const SERIES_TOL: f64 = 1e-12;

/// Number of trailing terms inspected for growth.
const GROWTH_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct FockSpace {
    dim: usize,
    annihilation: Array2<Complex64>,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut a = Array2::zeros((dim, dim));
        for n in 1..dim {
            a[[n - 1, n]] = Complex64::new((n as f64).sqrt(), 0.0);
        }
        Ok(FockSpace {
            dim,
            annihilation: a,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn annihilation(&self) -> &Array2<Complex64> {
        &self.annihilation
    }

    pub fn creation(&self) -> Array2<Complex64> {
        self.annihilation.t().mapv(|z| z.conj())
    }

    pub fn number_operator(&self) -> Array2<Complex64> {
        self.creation().dot(&self.annihilation)
    }

    /// Largest entry of `a a† - a† a - 1` on the first `D - 1` basis vectors.
    /// The last diagonal entry is `-D` by construction and is excluded.
    pub fn commutator_defect(&self) -> f64 {
        let a = &self.annihilation;
        let ad = self.creation();
        let comm = a.dot(&ad) - ad.dot(a);
        let keep = self.dim - 1;
        let mut worst: f64 = 0.0;
        for i in 0..keep {
            for j in 0..keep {
                let identity = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((comm[[i, j]] - identity).norm());
            }
        }
        worst
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateLabel {
    Fock(usize),
    Coherent(Complex64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Array1<Complex64>,
    label: StateLabel,
}

impl StateVector {
    /// The number state `|n>`.
    pub fn fock(space: &FockSpace, n: usize) -> Result<Self> {
        if n >= space.dim() {
            return Err(Error::FockIndexOutOfRange { n, dim: space.dim() });
        }
        let mut amplitudes = Array1::zeros(space.dim());
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            amplitudes,
            label: StateLabel::Fock(n),
        })
    }

    /// The coherent state `|alpha>` with amplitudes
    /// `e^(-|alpha|^2 / 2) alpha^n / sqrt(n!)`, cut off at the space dimension
    /// and not renormalised.
    pub fn coherent(space: &FockSpace, alpha: Complex64) -> Self {
        let mut amplitudes = Array1::zeros(space.dim());
        let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
        for n in 0..space.dim() {
            if n > 0 {
                amp = amp * alpha / (n as f64).sqrt();
            }
            amplitudes[n] = amp;
        }
        StateVector {
            amplitudes,
            label: StateLabel::Coherent(alpha),
        }
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn label(&self) -> StateLabel {
        self.label
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Highest basis index carrying an amplitude above [`SUPPORT_EPS`].
    pub fn support(&self) -> usize {
        self.amplitudes
            .iter()
            .rposition(|z| z.norm() > SUPPORT_EPS)
            .unwrap_or(0)
    }
}

/// `L_m(x)` from `(k+1) L_(k+1) = (2k+1-x) L_k - k L_(k-1)`.
pub fn laguerre(m: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 - x;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `<alpha| a^m (a†)^m |alpha> = sum_k |alpha|^(2k) C(m, k)^2 (m-k)!`,
/// summed exactly over the rationals and rounded once at the end.
pub fn antinormal_moment(m: u32, alpha: Complex64) -> f64 {
    let x = BigRational::from_float(alpha.norm_sqr()).expect("finite |alpha|^2");
    let mut power = BigRational::from_integer(BigInt::from(1));
    let mut sum = BigRational::zero();
    for k in 0..=m {
        if k > 0 {
            power *= &x;
        }
        let c = binomial(m, k);
        let weight = &c * &c * factorial(m - k);
        sum += &power * BigRational::from_integer(weight);
    }
    rational_to_f64(&sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Convergence {
    /// The last term is below [`SERIES_TOL`], or every term past the first vanishes.
    Converged,
    /// Terms are not growing but are still too large to trust the partial sum.
    Unconverged,
    /// Term magnitudes grew over the trailing window.
    Diverged,
}

/// A truncated series value with diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesReport {
    pub value: f64,
    /// Contribution of the final summand.
    pub last_term: f64,
    pub terms: usize,
    pub status: Convergence,
}

impl SeriesReport {
    pub fn converged(&self) -> bool {
        self.status == Convergence::Converged
    }

    pub fn diverged(&self) -> bool {
        self.status == Convergence::Diverged
    }

    /// Sums `terms` and classifies the result. `vanishing_tail` marks series
    /// whose ratio is exactly zero, which are exact after their first term.
    fn from_terms(terms: &[f64], vanishing_tail: bool) -> Self {
        let value: f64 = terms.iter().sum();
        let last_term = terms.last().copied().unwrap_or(0.0);
        let n = terms.len();
        let grew = n > 1 && {
            let reference = terms[n.saturating_sub(1 + GROWTH_WINDOW)];
            last_term.abs() > reference.abs()
        };
        let status = if vanishing_tail {
            Convergence::Converged
        } else if grew || !value.is_finite() {
            Convergence::Diverged
        } else if last_term.abs() <= SERIES_TOL * value.abs().max(1.0) {
            Convergence::Converged
        } else {
            Convergence::Unconverged
        };
        SeriesReport {
            value,
            last_term,
            terms: n,
            status,
        }
    }
}

/// `<alpha| e^(-gamma n) |alpha> = exp(|alpha|^2 (e^-gamma - 1))`.
pub fn expect_exp_coherent_closed(gamma: f64, alpha: Complex64) -> f64 {
    (alpha.norm_sqr() * (-gamma).exp_m1()).exp()
}

/// `e^gamma sum_{m<=max_m} (1 - e^gamma)^m L_m(-|alpha|^2)`, the anti-normal
/// series for the coherent-state average.
pub fn expect_exp_coherent_series(gamma: f64, alpha: Complex64, max_m: usize) -> SeriesReport {
    let ratio = -gamma.exp_m1();
    let x = -alpha.norm_sqr();
    let mut terms = Vec::with_capacity(max_m + 1);
    let mut weight = gamma.exp();
    let (mut l_prev, mut l_cur) = (0.0, 1.0);
    for m in 0..=max_m {
        if m > 0 {
            weight *= ratio;
            let k = (m - 1) as f64;
            let next = if m == 1 {
                1.0 - x
            } else {
                ((2.0 * k + 1.0 - x) * l_cur - k * l_prev) / (k + 1.0)
            };
            l_prev = l_cur;
            l_cur = next;
        }
        terms.push(weight * l_cur);
    }
    SeriesReport::from_terms(&terms, ratio == 0.0)
}

/// `<n| e^(-gamma n) |n> = e^(-gamma n)`.
pub fn expect_exp_fock_closed(gamma: f64, n: u32) -> f64 {
    (-gamma * f64::from(n)).exp()
}

/// `x^j C(n + j, n)` for `j = 0..=count`.
fn negbinom_terms(x: f64, n: u32, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count + 1);
    let mut t = 1.0;
    for j in 0..=count {
        if j > 0 {
            t *= x * (j as f64 + f64::from(n)) / j as f64;
        }
        out.push(t);
    }
    out
}

/// `e^gamma sum_{m<=max_m} (1 - e^gamma)^m (m + n)! / (n! m!)`, the anti-normal
/// series for the number-state average.
pub fn expect_exp_fock_series(gamma: f64, n: u32, max_m: usize) -> SeriesReport {
    let ratio = -gamma.exp_m1();
    let prefactor = gamma.exp();
    let terms: Vec<f64> = negbinom_terms(ratio, n, max_m)
        .into_iter()
        .map(|t| prefactor * t)
        .collect();
    SeriesReport::from_terms(&terms, ratio == 0.0)
}

/// `sum_{k=n}^{n+truncation} x^(k-n) k! / (n! (k-n)!)`, whose limit for
/// `|x| < 1` is `(1 - x)^(-n-1)`.
pub fn negbinom_partial_sum(x: f64, n: u32, truncation: usize) -> f64 {
    negbinom_terms(x, n, truncation).into_iter().sum()
}

/// Anything that can be read as a sum of ordered monomials with real coefficients.
pub trait OrderedTerms {
    fn ordering(&self) -> Ordering;
    fn float_terms(&self) -> Vec<(Monomial, f64)>;
}

impl OrderedTerms for OperatorExpr {
    fn ordering(&self) -> Ordering {
        OperatorExpr::ordering(self)
    }

    fn float_terms(&self) -> Vec<(Monomial, f64)> {
        self.terms().map(|(m, c)| (m, rational_to_f64(c))).collect()
    }
}

impl OrderedTerms for OrderedExpansion {
    fn ordering(&self) -> Ordering {
        OrderedExpansion::ordering(self)
    }

    fn float_terms(&self) -> Vec<(Monomial, f64)> {
        let coeffs = match self.coefficients() {
            Coefficients::Float(v) => v.clone(),
            exact => exact.to_f64(),
        };
        coeffs
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c != 0.0)
            .map(|(m, c)| (Monomial::diagonal(m as u32), c))
            .collect()
    }
}

/// How far above the state's support the operator reaches.
fn required_headroom(ordering: Ordering, terms: &[(Monomial, f64)]) -> usize {
    match ordering {
        // (a†)^p a^q is evaluated as <a^p psi | a^q psi>, which only lowers.
        Ordering::Normal => 0,
        Ordering::Antinormal => terms
            .iter()
            .map(|(m, _)| m.p.max(m.q) as usize)
            .max()
            .unwrap_or(0),
    }
}

/// `<psi| sum c (ordered monomial) |psi>` by dense matrix-vector products.
///
/// Normal monomials are evaluated as `<a^p psi | a^q psi>` and anti-normal ones
/// as `<(a†)^q psi | (a†)^p psi>`. Fails with
/// [`Error::TruncationViolation`] when raising would push the state past the
/// cutoff, or when a coherent state is itself cut off.
pub fn matrix_expectation<T: OrderedTerms + ?Sized>(
    observable: &T,
    psi: &StateVector,
    space: &FockSpace,
) -> Result<Complex64> {
    let dim = space.dim();
    if psi.dim() != dim {
        return Err(Error::TruncationViolation {
            support: psi.dim().saturating_sub(1),
            shift: 0,
            dim,
        });
    }
    let ordering = observable.ordering();
    let terms = observable.float_terms();
    let support = psi.support();
    let shift = required_headroom(ordering, &terms);
    let cut_off_state = matches!(psi.label(), StateLabel::Coherent(_)) && support + 1 >= dim;
    if support + shift >= dim || cut_off_state {
        return Err(Error::TruncationViolation {
            support,
            shift,
            dim,
        });
    }

    let max_power = terms
        .iter()
        .map(|(m, _)| m.p.max(m.q) as usize)
        .max()
        .unwrap_or(0);
    let step = match ordering {
        Ordering::Normal => space.annihilation().clone(),
        Ordering::Antinormal => space.creation(),
    };
    let mut ladder = Vec::with_capacity(max_power + 1);
    ladder.push(psi.amplitudes().clone());
    for j in 1..=max_power {
        let next = step.dot(&ladder[j - 1]);
        ladder.push(next);
    }

    let inner = |u: &Array1<Complex64>, v: &Array1<Complex64>| -> Complex64 {
        u.iter().zip(v).map(|(x, y)| x.conj() * y).sum()
    };
    let mut total = Complex64::zero();
    for (mono, c) in terms {
        let (bra, ket) = match ordering {
            Ordering::Normal => (mono.p, mono.q),
            Ordering::Antinormal => (mono.q, mono.p),
        };
        total += c * inner(&ladder[bra as usize], &ladder[ket as usize]);
    }
    Ok(total)
}
