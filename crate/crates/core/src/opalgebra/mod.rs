//! Exact symbolic algebra over words in `a` and `a†`.
//!
//! Expressions are parsed into sums of [`RawWord`]s and then rewritten to a
//! canonical [`OperatorExpr`] using nothing but the commutator `[a, a†] = 1`.
//! This engine knows nothing about Stirling numbers, which makes it an
//! independent oracle for the closed-form expansions in [`crate::ordering`].

mod expr;
mod parser;
mod rewrite;

pub use expr::{print_expr, Monomial, OperatorExpr, Ordering};
pub use parser::{parse, ParseError};
pub use rewrite::{
    rewrite, rewrite_antinormal, rewrite_normal, rewrite_with, LeftmostRedex, RedexChooser,
};

use num_rational::BigRational;
use num_traits::One;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    /// Annihilation operator `a`.
    A,
    /// Creation operator `a†`.
    Adag,
}

/// A coefficient times a product of letters, read left to right. The empty
/// word is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawWord {
    pub coefficient: BigRational,
    pub letters: Vec<Letter>,
}

impl RawWord {
    pub fn new(coefficient: BigRational, letters: Vec<Letter>) -> Self {
        RawWord {
            coefficient,
            letters,
        }
    }

    pub fn identity() -> Self {
        RawWord::new(BigRational::one(), Vec::new())
    }

    pub fn unit(letters: Vec<Letter>) -> Self {
        RawWord::new(BigRational::one(), letters)
    }
}
