//! Exact integer combinatorics: Stirling numbers of the second kind, binomial
//! coefficients, falling factorials and the forward difference operator.
//!
//! Everything here is arbitrary precision. `S(k, m)` leaves the range of `u64`
//! around `k = 25`, so no fixed-width integers appear in the public API.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// `C(m, j)`, zero when `j > m`.
pub fn binomial(m: u32, j: u32) -> BigInt {
    if j > m {
        return BigInt::zero();
    }
    let j = j.min(m - j);
    // Each partial product is itself a binomial coefficient, so the division is exact.
    (0..j).fold(BigInt::one(), |acc, i| acc * (m - i) / (i + 1))
}

/// `x (x - 1) ... (x - m + 1)`, with the empty product equal to one.
pub fn falling_factorial(x: i64, m: u32) -> BigInt {
    (0..i64::from(m)).fold(BigInt::one(), |acc, i| acc * (x - i))
}

/// Stirling number of the second kind from the explicit alternating sum
/// `S(k, m) = 1/m! * sum_j (-1)^(m-j) C(m, j) j^k`.
///
/// `0^0` is taken as one, which gives `S(0, 0) = 1` and `S(k, 0) = 0` for
/// `k >= 1`. Returns zero when `m > k`.
pub fn stirling2(k: u32, m: u32) -> BigInt {
    if m > k {
        return BigInt::zero();
    }
    let mut sum = BigInt::zero();
    for j in 0..=m {
        let term = binomial(m, j) * BigInt::from(j).pow(k);
        if (m - j).is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum / factorial(m)
}

/// Triangular table of `S(k, m)` for `0 <= m <= k <= max_k`, filled by the
/// recurrence `S(k+1, m) = m S(k, m) + S(k, m-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StirlingTable {
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    pub fn new(max_k: u32) -> Self {
        let mut table = StirlingTable {
            rows: vec![vec![BigInt::one()]],
        };
        table.grow(max_k);
        table
    }

    /// Extends the table up to `max_k`. Does nothing if it is already that large.
    pub fn grow(&mut self, max_k: u32) {
        while self.max_k() < max_k {
            let prev = self.rows.last().expect("table always holds row 0");
            let k = prev.len();
            let mut row = Vec::with_capacity(k + 1);
            row.push(BigInt::zero());
            for m in 1..=k {
                let stay = if m < k {
                    &prev[m] * BigInt::from(m)
                } else {
                    BigInt::zero()
                };
                row.push(stay + &prev[m - 1]);
            }
            self.rows.push(row);
        }
    }

    pub fn max_k(&self) -> u32 {
        (self.rows.len() - 1) as u32
    }

    /// `S(k, m)`, zero when `m > k`.
    ///
    /// # Panics
    ///
    /// If `k` exceeds [`max_k`](Self::max_k).
    pub fn get(&self, k: u32, m: u32) -> BigInt {
        assert!(
            k <= self.max_k(),
            "S({k}, {m}) requested from a table built to k = {}",
            self.max_k()
        );
        self.rows[k as usize]
            .get(m as usize)
            .cloned()
            .unwrap_or_default()
    }

    /// Row `k`: `[S(k, 0), ..., S(k, k)]`.
    pub fn row(&self, k: u32) -> &[BigInt] {
        &self.rows[k as usize]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.rows.iter().map(Vec::as_slice)
    }
}

/// Samples `f(0), f(1), ..., f(M)` of a scalar function at the nonnegative
/// integers. A table is either entirely exact or entirely floating point.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionTable {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

impl FunctionTable {
    pub fn exact(samples: Vec<BigRational>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(FunctionTable::Exact(samples))
    }

    pub fn float(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(FunctionTable::Float(samples))
    }

    /// Exact samples of an integer-valued function at `0..len`.
    pub fn from_integer_fn(len: usize, f: impl Fn(i64) -> BigInt) -> Result<Self> {
        Self::exact(
            (0..len as i64)
                .map(|x| BigRational::from_integer(f(x)))
                .collect(),
        )
    }

    /// Floating samples of `f` at `0..len`.
    pub fn from_float_fn(len: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::float((0..len).map(|x| f(x as f64)).collect())
    }

    pub fn len(&self) -> usize {
        match self {
            FunctionTable::Exact(s) => s.len(),
            FunctionTable::Float(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, FunctionTable::Exact(_))
    }

    /// Largest `M` such that `f(M)` is available.
    pub fn max_point(&self) -> usize {
        self.len().saturating_sub(1)
    }
}

/// `Δ^m f(0) = sum_k (-1)^(m-k) C(m, k) f(k)`, in the scalar kind of the table.
pub fn forward_difference(f: &FunctionTable, m: usize) -> Result<Scalar> {
    if m >= f.len() {
        return Err(Error::TableTooShort {
            needed: m + 1,
            available: f.len(),
        });
    }
    let m32 = m as u32;
    Ok(match f {
        FunctionTable::Exact(samples) => {
            let mut acc = BigRational::zero();
            for (k, fk) in samples[..=m].iter().enumerate() {
                let weight = BigRational::from_integer(binomial(m32, k as u32));
                let term = weight * fk;
                if (m - k).is_multiple_of(2) {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            Scalar::Exact(acc)
        }
        FunctionTable::Float(samples) => {
            // Pascal-style repeated differencing avoids forming large binomials in f64.
            let mut work = samples[..=m].to_vec();
            for order in 0..m {
                for i in 0..(m - order) {
                    work[i] = work[i + 1] - work[i];
                }
            }
            Scalar::Float(work[0])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Counts partitions of `{0..n}` into exactly `blocks` nonempty blocks by
    /// enumerating restricted growth strings.
    fn count_set_partitions(n: usize, blocks: usize) -> u64 {
        fn walk(pos: usize, n: usize, used: usize, blocks: usize) -> u64 {
            if pos == n {
                return u64::from(used == blocks);
            }
            let mut total = 0;
            for label in 0..=used.min(blocks.saturating_sub(1)) {
                let next_used = if label == used { used + 1 } else { used };
                if next_used <= blocks {
                    total += walk(pos + 1, n, next_used, blocks);
                }
            }
            total
        }
        walk(0, n, 0, blocks)
    }

    fn pascal(m: usize) -> Vec<u64> {
        let mut row = vec![1u64];
        for _ in 0..m {
            let mut next = vec![1u64; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        row
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn stirling_examples() {
        assert_eq!(stirling2(4, 2), BigInt::from(7));
        assert_eq!(stirling2(5, 2), BigInt::from(count_set_partitions(5, 2)));
        assert_eq!(stirling2(5, 2), BigInt::from(15));
        for k in 0..=12 {
            assert_eq!(stirling2(k, k), BigInt::one());
        }
        assert_eq!(stirling2(3, 7), BigInt::zero());
        assert_eq!(stirling2(0, 0), BigInt::one());
        assert_eq!(stirling2(6, 0), BigInt::zero());
    }

    #[test]
    fn stirling_matches_partition_enumeration() {
        for n in 1..=8 {
            for b in 1..=n {
                assert_eq!(
                    stirling2(n as u32, b as u32),
                    BigInt::from(count_set_partitions(n, b)),
                    "S({n}, {b})"
                );
            }
        }
    }

    #[test]
    fn explicit_sum_agrees_with_recurrence_table() {
        let table = StirlingTable::new(12);
        for k in 0..=12 {
            for m in 0..=k {
                assert_eq!(table.get(k, m), stirling2(k, m), "S({k}, {m})");
            }
        }
    }

    #[test]
    fn table_invariants() {
        let table = StirlingTable::new(30);
        for k in 0..=30u32 {
            assert_eq!(table.get(k, k), BigInt::one());
            if k >= 1 {
                assert_eq!(table.get(k, 0), BigInt::zero());
            }
            assert_eq!(table.get(k, k + 3), BigInt::zero());
            for m in 0..=k {
                assert!(table.get(k, m) >= BigInt::zero());
                if k < 30 && m >= 1 {
                    let lhs = table.get(k + 1, m);
                    let rhs = BigInt::from(m) * table.get(k, m) + table.get(k, m - 1);
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // Beyond u64: S(30, 15) ~ 5.7e23.
        assert!(table.get(30, 15) > BigInt::from(u64::MAX));
    }

    #[test]
    fn grow_is_idempotent_and_extends() {
        let mut t = StirlingTable::new(3);
        t.grow(2);
        assert_eq!(t.max_k(), 3);
        t.grow(6);
        assert_eq!(t, StirlingTable::new(6));
        assert_eq!(StirlingTable::new(0).rows().count(), 1);
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(9, 0), BigInt::one());
        assert_eq!(binomial(0, 0), BigInt::one());
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(10, 5), BigInt::from(pascal(10)[5]));
        for m in 0..=40 {
            let row = pascal(m);
            for j in 0..=m {
                assert_eq!(binomial(m as u32, j as u32), BigInt::from(row[j]));
            }
        }
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(5, 2), BigInt::from(20));
        assert_eq!(falling_factorial(3, 5), BigInt::zero());
        assert_eq!(falling_factorial(7, 3), BigInt::from(7 * 6 * 5));
        assert_eq!(falling_factorial(-2, 3), BigInt::from(-24));
        assert_eq!(falling_factorial(0, 0), BigInt::one());
    }

    #[test]
    fn powers_expand_in_falling_factorials() {
        let table = StirlingTable::new(12);
        for x in 0..=30i64 {
            for k in 0..=12u32 {
                let rhs: BigInt = (0..=k)
                    .map(|m| table.get(k, m) * falling_factorial(x, m))
                    .sum();
                assert_eq!(BigInt::from(x).pow(k), rhs, "x = {x}, k = {k}");
            }
        }
    }

    #[test]
    fn forward_difference_examples() {
        let squares = FunctionTable::exact(vec![q(0), q(1), q(4), q(9)]).unwrap();
        assert_eq!(
            forward_difference(&squares, 2).unwrap(),
            Scalar::Exact(q(2))
        );
        assert_eq!(
            forward_difference(&squares, 0).unwrap(),
            Scalar::Exact(q(0))
        );

        let halving = FunctionTable::float(vec![1.0, 0.5, 0.25]).unwrap();
        assert_eq!(
            forward_difference(&halving, 1).unwrap(),
            Scalar::Float(-0.5)
        );
        assert_eq!(forward_difference(&halving, 0).unwrap(), Scalar::Float(1.0));
    }

    #[test]
    fn forward_difference_rejects_short_tables() {
        let t = FunctionTable::float(vec![1.0, 2.0]).unwrap();
        assert_eq!(
            forward_difference(&t, 2),
            Err(Error::TableTooShort {
                needed: 3,
                available: 2
            })
        );
        assert_eq!(FunctionTable::float(vec![]), Err(Error::EmptyTable));
    }

    #[test]
    fn difference_of_monomial_is_factorial() {
        for m in 0..=15u32 {
            let t = FunctionTable::from_integer_fn(m as usize + 1, |x| BigInt::from(x).pow(m))
                .unwrap();
            assert_eq!(
                forward_difference(&t, m as usize).unwrap(),
                Scalar::Exact(BigRational::from_integer(factorial(m)))
            );
        }
    }

    fn poly_table(coeffs: &[i64], len: usize) -> FunctionTable {
        FunctionTable::from_integer_fn(len, |x| {
            coeffs
                .iter()
                .rev()
                .fold(BigInt::zero(), |acc, &c| acc * x + c)
        })
        .unwrap()
    }

    proptest! {
        #[test]
        fn difference_annihilates_low_degree(
            coeffs in prop::collection::vec(-50i64..50, 1..6),
            extra in 1usize..5,
        ) {
            let degree = coeffs.len() - 1;
            let m = degree + extra;
            let t = poly_table(&coeffs, m + 1);
            prop_assert_eq!(forward_difference(&t, m).unwrap(), Scalar::Exact(q(0)));
        }

        #[test]
        fn difference_is_linear(
            f in prop::collection::vec((-100i64..100, 1i64..20), 1..10),
            g in prop::collection::vec((-100i64..100, 1i64..20), 1..10),
            alpha in (-9i64..9, 1i64..9),
            beta in (-9i64..9, 1i64..9),
        ) {
            let len = f.len().min(g.len());
            let rat = |(n, d): (i64, i64)| BigRational::new(BigInt::from(n), BigInt::from(d));
            let fs: Vec<_> = f[..len].iter().copied().map(rat).collect();
            let gs: Vec<_> = g[..len].iter().copied().map(rat).collect();
            let (a, b) = (rat(alpha), rat(beta));
            let combo: Vec<_> = fs.iter().zip(&gs).map(|(x, y)| &a * x + &b * y).collect();
            let ft = FunctionTable::exact(fs).unwrap();
            let gt = FunctionTable::exact(gs).unwrap();
            let ct = FunctionTable::exact(combo).unwrap();
            for m in 0..len {
                let lhs = forward_difference(&ct, m).unwrap();
                let df = forward_difference(&ft, m).unwrap();
                let dg = forward_difference(&gt, m).unwrap();
                let rhs = &a * df.as_exact().unwrap() + &b * dg.as_exact().unwrap();
                prop_assert_eq!(lhs, Scalar::Exact(rhs));
            }
        }
    }
}
