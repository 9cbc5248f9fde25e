use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{Letter, Monomial, OperatorExpr, Ordering, RawWord};

/// Picks which inversion to rewrite next in a word.
pub trait RedexChooser {
    /// `redexes` holds the positions `i` where `word[i..i + 2]` is out of
    /// order; it is never empty. Returns an index into `redexes`.
    fn choose(&mut self, word: &[Letter], redexes: &[usize]) -> usize;
}

/// Always rewrites the leftmost inversion.
#[derive(Debug, Default, Clone, Copy)]
pub struct LeftmostRedex;

impl RedexChooser for LeftmostRedex {
    fn choose(&mut self, _word: &[Letter], _redexes: &[usize]) -> usize {
        0
    }
}

impl<F: FnMut(&[Letter], &[usize]) -> usize> RedexChooser for F {
    fn choose(&mut self, word: &[Letter], redexes: &[usize]) -> usize {
        self(word, redexes)
    }
}

/// The adjacent pair that is out of order for `ordering`, and the sign of the
/// identity term produced when swapping it:
/// `a a† -> a† a + 1` (normal) and `a† a -> a a† - 1` (anti-normal).
fn rule(ordering: Ordering) -> ((Letter, Letter), bool) {
    match ordering {
        Ordering::Normal => ((Letter::A, Letter::Adag), false),
        Ordering::Antinormal => ((Letter::Adag, Letter::A), true),
    }
}

fn accumulate(map: &mut HashMap<Vec<Letter>, BigRational>, word: Vec<Letter>, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(word).or_insert_with(BigRational::zero);
    *slot += c;
}

fn monomial_of(word: &[Letter]) -> Monomial {
    let p = word.iter().filter(|&&l| l == Letter::Adag).count() as u32;
    Monomial::new(p, word.len() as u32 - p)
}

/// Rewrites `words` to canonical `ordering` form, letting `chooser` pick the
/// inversion to resolve in each word.
///
/// Every step replaces one inversion by its swap plus a shorter word, so the
/// number of inversions strictly drops along each branch and the process
/// terminates. Identical intermediate words are merged before the next round.
pub fn rewrite_with(
    words: &[RawWord],
    ordering: Ordering,
    chooser: &mut dyn RedexChooser,
) -> OperatorExpr {
    let ((left, right), negate) = rule(ordering);
    let mut result = OperatorExpr::zero(ordering);
    let mut frontier: HashMap<Vec<Letter>, BigRational> = HashMap::new();
    for w in words {
        accumulate(&mut frontier, w.letters.clone(), w.coefficient.clone());
    }
    let mut redexes = Vec::new();
    while !frontier.is_empty() {
        let mut next = HashMap::with_capacity(frontier.len() * 2);
        for (word, c) in frontier {
            if c.is_zero() {
                continue;
            }
            redexes.clear();
            redexes.extend(
                word.windows(2)
                    .enumerate()
                    .filter(|(_, pair)| pair[0] == left && pair[1] == right)
                    .map(|(i, _)| i),
            );
            if redexes.is_empty() {
                result.add_term(monomial_of(&word), c);
                continue;
            }
            let pick = chooser.choose(&word, &redexes);
            let i = redexes[pick.min(redexes.len() - 1)];

            let mut contracted = Vec::with_capacity(word.len() - 2);
            contracted.extend_from_slice(&word[..i]);
            contracted.extend_from_slice(&word[i + 2..]);
            let identity_coeff = if negate { -c.clone() } else { c.clone() };
            accumulate(&mut next, contracted, identity_coeff);

            let mut swapped = word;
            swapped.swap(i, i + 1);
            accumulate(&mut next, swapped, c);
        }
        frontier = next;
    }
    result
}

/// Canonical form under `ordering` using the leftmost-inversion strategy.
pub fn rewrite(words: &[RawWord], ordering: Ordering) -> OperatorExpr {
    rewrite_with(words, ordering, &mut LeftmostRedex)
}

/// All `a†` moved left of all `a`.
pub fn rewrite_normal(words: &[RawWord]) -> OperatorExpr {
    rewrite(words, Ordering::Normal)
}

/// All `a` moved left of all `a†`.
pub fn rewrite_antinormal(words: &[RawWord]) -> OperatorExpr {
    rewrite(words, Ordering::Antinormal)
}
