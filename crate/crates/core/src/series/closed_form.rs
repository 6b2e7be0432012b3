//! Closed-form counts for `NC^d_{dk+1}`, evaluated in exact arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `C(n, k)` for any integer `n`, with `C(n, k) = 0` for `k < 0`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if n < 0 {
        // C(n, k) = (-1)^k C(k - n - 1, k)
        let v = binomial(k - n - 1, k);
        return if k % 2 == 0 { v } else { -v };
    }
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(alpha, k)` for rational `alpha`, as a falling factorial over `k!`.
pub fn generalized_binomial(alpha: &BigRational, k: usize) -> BigRational {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= alpha - BigRational::from_integer(BigInt::from(i));
        acc /= BigRational::from_integer(BigInt::from(i + 1));
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `|NC^d_{dk+1}|`.
    Cardinality { k: usize },
    /// Elements of rank `j`, where `k = i + j`.
    RankCount { i: usize, j: usize },
    /// `mu(NC^d_{dk+1})`.
    Mobius { k: usize },
    /// Elements containing `{1}` as a block.
    Singleton { k: usize },
    SingletonRank { i: usize, j: usize },
    /// Elements whose blocks and dual blocks all have size 1 or `d+1`.
    SmallBlocks { k: usize },
    SmallBlocksSingleton { k: usize },
    SmallBlocksRank { i: usize, j: usize },
    /// Maximal chains with falling edge labels.
    FallingChains { k: usize },
}

impl ClosedForm {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedForm::Cardinality { .. } => "cardinality",
            ClosedForm::RankCount { .. } => "rank_count",
            ClosedForm::Mobius { .. } => "mobius",
            ClosedForm::Singleton { .. } => "singleton",
            ClosedForm::SingletonRank { .. } => "singleton_rank",
            ClosedForm::SmallBlocks { .. } => "small_blocks",
            ClosedForm::SmallBlocksSingleton { .. } => "small_blocks_singleton",
            ClosedForm::SmallBlocksRank { .. } => "small_blocks_rank",
            ClosedForm::FallingChains { .. } => "falling_chains",
        }
    }

    /// Builds a kind from its name. Rank-style kinds take `(i, j)` and the
    /// others take `k` only.
    pub fn from_name(name: &str, k: usize, j: Option<usize>) -> Result<Self> {
        let split = |name: &str| match j {
            Some(j) if j <= k => Ok((k - j, j)),
            Some(j) => Err(Error::OutOfRange(format!("rank {j} exceeds k = {k}"))),
            None => Err(Error::OutOfRange(format!("`{name}` needs a rank j"))),
        };
        Ok(match name {
            "cardinality" => ClosedForm::Cardinality { k },
            "mobius" => ClosedForm::Mobius { k },
            "singleton" => ClosedForm::Singleton { k },
            "small_blocks" => ClosedForm::SmallBlocks { k },
            "small_blocks_singleton" => ClosedForm::SmallBlocksSingleton { k },
            "falling_chains" => ClosedForm::FallingChains { k },
            "rank_count" => {
                let (i, j) = split(name)?;
                ClosedForm::RankCount { i, j }
            }
            "singleton_rank" => {
                let (i, j) = split(name)?;
                ClosedForm::SingletonRank { i, j }
            }
            "small_blocks_rank" => {
                let (i, j) = split(name)?;
                ClosedForm::SmallBlocksRank { i, j }
            }
            other => return Err(Error::Parse(format!("unknown closed form `{other}`"))),
        })
    }

    pub const NAMES: [&'static str; 9] = [
        "cardinality",
        "rank_count",
        "mobius",
        "singleton",
        "singleton_rank",
        "small_blocks",
        "small_blocks_singleton",
        "small_blocks_rank",
        "falling_chains",
    ];
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedForm::RankCount { i, j }
            | ClosedForm::SingletonRank { i, j }
            | ClosedForm::SmallBlocksRank { i, j } => write!(f, "{}(i={i}, j={j})", self.name()),
            ClosedForm::Cardinality { k }
            | ClosedForm::Mobius { k }
            | ClosedForm::Singleton { k }
            | ClosedForm::SmallBlocks { k }
            | ClosedForm::SmallBlocksSingleton { k }
            | ClosedForm::FallingChains { k } => write!(f, "{}(k={k})", self.name()),
        }
    }
}

fn b(n: usize, k: usize) -> BigInt {
    binomial(n as i64, k as i64)
}

fn int(n: usize) -> BigInt {
    BigInt::from(n)
}

/// Evaluates `kind` for the given `d`. Every division is checked to be exact.
pub fn closed_form(kind: ClosedForm, d: usize) -> Result<BigInt> {
    if d == 0 {
        return Err(Error::ZeroD);
    }
    let (num, den) = match kind {
        ClosedForm::Cardinality { k } => (int(2) * b(d * k + k + 1, k), int(d * k + 2)),
        ClosedForm::RankCount { i, j } => {
            let k = i + j;
            (
                int(d * k + 1) * b(i + d * j + 1, i) * b(d * i + j + 1, j),
                int(i + d * j + 1) * int(d * i + j + 1),
            )
        }
        ClosedForm::Mobius { k } => {
            let v = b(2 * d * k, k);
            let v = if k % 2 == 0 { v } else { -v };
            (v, int(2 * d * k - k + 1))
        }
        ClosedForm::Singleton { k } => (b(d * k + k, k), int(d * k + 1)),
        ClosedForm::SingletonRank { i, j } => (
            b(i + d * j, i) * binomial((d * i + j) as i64 - 1, j as i64),
            int(d * j + 1),
        ),
        ClosedForm::SmallBlocks { k } => (int(2) * b(d * k + 2, k), int(d * k + 2)),
        ClosedForm::SmallBlocksSingleton { k } => (b(d * k + 1, k), int(d * k + 1)),
        ClosedForm::SmallBlocksRank { i, j } => {
            let k = i + j;
            (
                int(d * k + 1) * b(d * j + 1, i) * b(d * i + 1, j),
                int(d * j + 1) * int(d * i + 1),
            )
        }
        ClosedForm::FallingChains { k } => (b(2 * d * k, k), int(2 * d * k - k + 1)),
    };
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Err(Error::NonIntegral {
            kind: kind.to_string(),
        });
    }
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(kind: ClosedForm, d: usize) -> i64 {
        closed_form(kind, d).unwrap().try_into().unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(-1, 0), BigInt::from(1));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        let third = BigRational::new(BigInt::from(-1), BigInt::from(2));
        // C(-1/2, 2) = 3/8
        assert_eq!(
            generalized_binomial(&third, 2),
            BigRational::new(BigInt::from(3), BigInt::from(8))
        );
    }

    #[test]
    fn examples() {
        assert_eq!(cf(ClosedForm::Cardinality { k: 2 }, 2), 7);
        assert_eq!(cf(ClosedForm::Cardinality { k: 3 }, 1), 14);
        assert_eq!(cf(ClosedForm::Mobius { k: 3 }, 1), -5);
        assert_eq!(cf(ClosedForm::Mobius { k: 2 }, 2), 4);
        assert_eq!(cf(ClosedForm::SingletonRank { i: 2, j: 1 }, 1), 3);
        assert_eq!(cf(ClosedForm::SmallBlocks { k: 2 }, 2), 5);
        assert_eq!(cf(ClosedForm::FallingChains { k: 2 }, 2), 4);
        assert_eq!(cf(ClosedForm::FallingChains { k: 2 }, 1), 2);
        assert_eq!(cf(ClosedForm::RankCount { i: 1, j: 1 }, 2), 5);
        assert_eq!(cf(ClosedForm::SingletonRank { i: 0, j: 0 }, 3), 1);
    }

    #[test]
    fn names_round_trip() {
        for name in ClosedForm::NAMES {
            let kind = ClosedForm::from_name(name, 3, Some(1)).unwrap();
            assert_eq!(kind.name(), name);
        }
        assert!(ClosedForm::from_name("rank_count", 3, None).is_err());
        assert!(ClosedForm::from_name("bogus", 3, None).is_err());
    }
}
