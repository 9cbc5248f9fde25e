use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{Letter, RawWord};

/// Which letter goes first in a canonical monomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ordering {
    /// `(a†)^p a^q`: creators left of annihilators.
    Normal,
    /// `a^q (a†)^p`: annihilators left of creators.
    Antinormal,
}

impl Ordering {
    pub fn name(self) -> &'static str {
        match self {
            Ordering::Normal => "normal",
            Ordering::Antinormal => "antinormal",
        }
    }
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Key of a canonical monomial: `p` creation and `q` annihilation operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub p: u32,
    pub q: u32,
}

impl Monomial {
    pub fn new(p: u32, q: u32) -> Self {
        Monomial { p, q }
    }

    pub fn diagonal(m: u32) -> Self {
        Monomial { p: m, q: m }
    }

    pub fn degree(self) -> u32 {
        self.p + self.q
    }

    /// Letters of this monomial under `ordering`.
    pub fn letters(self, ordering: Ordering) -> Vec<Letter> {
        let creators = std::iter::repeat_n(Letter::Adag, self.p as usize);
        let annihilators = std::iter::repeat_n(Letter::A, self.q as usize);
        match ordering {
            Ordering::Normal => creators.chain(annihilators).collect(),
            Ordering::Antinormal => annihilators.chain(creators).collect(),
        }
    }
}

/// Exact linear combination of ordered monomials. Zero coefficients are never
/// stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorExpr {
    ordering: Ordering,
    terms: BTreeMap<Monomial, BigRational>,
}

impl OperatorExpr {
    pub fn zero(ordering: Ordering) -> Self {
        OperatorExpr {
            ordering,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        ordering: Ordering,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut e = Self::zero(ordering);
        for (mono, c) in terms {
            e.add_term(mono, c);
        }
        e
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn add_term(&mut self, mono: Monomial, coefficient: BigRational) {
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    pub fn coefficient(&self, mono: Monomial) -> BigRational {
        self.terms.get(&mono).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &BigRational)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every monomial has equal numbers of `a` and `a†`, i.e. the
    /// operator is a function of the number operator.
    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|m| m.p == m.q)
    }

    /// Back to raw words, one per monomial, in the order this expression's
    /// tag prescribes.
    pub fn to_words(&self) -> Vec<RawWord> {
        self.terms
            .iter()
            .map(|(m, c)| RawWord::new(c.clone(), m.letters(self.ordering)))
            .collect()
    }

    /// Monomials in printing order: descending total degree, then descending
    /// number of creators.
    fn display_order(&self) -> Vec<(Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms().collect();
        v.sort_by(|(a, _), (b, _)| b.degree().cmp(&a.degree()).then(b.p.cmp(&a.p)));
        v
    }
}

fn power(name: &str, exp: u32) -> Option<String> {
    match exp {
        0 => None,
        1 => Some(name.to_string()),
        e => Some(format!("{name}^{e}")),
    }
}

fn magnitude(c: &BigRational) -> String {
    let c = c.abs();
    if c.is_integer() {
        c.to_integer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Deterministic text form, reparseable by [`parse`](super::parse):
/// `"ad^3*a^3 + 3*ad^2*a^2 + ad*a"`, `"a^2*ad^2 - 3*a*ad + 1"`, `"0"`.
impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (mono, c)) in self.display_order().into_iter().enumerate() {
            let negative = c.is_negative();
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let dag = power("ad", mono.p);
            let ann = power("a", mono.q);
            let ops: Vec<String> = match self.ordering {
                Ordering::Normal => [dag, ann],
                Ordering::Antinormal => [ann, dag],
            }
            .into_iter()
            .flatten()
            .collect();
            let mut factors = Vec::with_capacity(3);
            if ops.is_empty() || !c.abs().is_one() {
                factors.push(magnitude(c));
            }
            factors.extend(ops);
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

pub fn print_expr(e: &OperatorExpr) -> String {
    e.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn prints_documented_forms() {
        let e = OperatorExpr::from_terms(
            Ordering::Normal,
            [(Monomial::new(1, 1), q(1)), (Monomial::new(0, 0), q(1))],
        );
        assert_eq!(print_expr(&e), "ad*a + 1");
        assert_eq!(print_expr(&OperatorExpr::zero(Ordering::Normal)), "0");
        let anti = OperatorExpr::from_terms(
            Ordering::Antinormal,
            [
                (Monomial::diagonal(2), q(1)),
                (Monomial::diagonal(1), q(-3)),
                (Monomial::diagonal(0), q(1)),
            ],
        );
        assert_eq!(print_expr(&anti), "a^2*ad^2 - 3*a*ad + 1");
    }

    #[test]
    fn prints_signs_and_fractions() {
        let e = OperatorExpr::from_terms(
            Ordering::Normal,
            [
                (Monomial::new(0, 2), BigRational::new(BigInt::from(-3), BigInt::from(2))),
                (Monomial::new(1, 0), q(-1)),
                (Monomial::new(2, 0), q(5)),
            ],
        );
        assert_eq!(print_expr(&e), "5*ad^2 - 3/2*a^2 - ad");
        let neg = OperatorExpr::from_terms(Ordering::Normal, [(Monomial::new(0, 0), q(-4))]);
        assert_eq!(print_expr(&neg), "-4");
    }

    #[test]
    fn zero_terms_are_pruned() {
        let mut e = OperatorExpr::zero(Ordering::Normal);
        e.add_term(Monomial::new(1, 0), q(2));
        e.add_term(Monomial::new(1, 0), q(-2));
        e.add_term(Monomial::new(3, 3), q(0));
        assert!(e.is_empty());
    }
}
