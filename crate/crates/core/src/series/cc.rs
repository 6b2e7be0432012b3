//! The weighted generating functions `C`, `C*` and `B = C·C*`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::closed_form::generalized_binomial;
use super::{rational, StPolynomial, TruncatedSeries};
use crate::error::{Error, Result};
use crate::poset::{build_poset_with, BuildOptions};

fn require_unit_constant(a: &TruncatedSeries) -> Result<()> {
    let unit = a.coefficient((0, 0, 0)).is_one()
        && a.terms().filter(|(m, _)| m.0 == 0).count() == 1;
    if unit {
        Ok(())
    } else {
        Err(Error::NonUnitConstant)
    }
}

/// Solves `C = A*(x s C*^d)` and `C* = A(x t C^d)` modulo `x^{order+1}`
/// by fixed-point iteration from `C = C* = 1`.
pub fn solve_cc_star(
    a: &TruncatedSeries,
    a_star: &TruncatedSeries,
    d: usize,
    order: usize,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    require_unit_constant(a)?;
    require_unit_constant(a_star)?;
    if d == 0 {
        return Err(Error::ZeroD);
    }
    let a = a.truncate(order);
    let a_star = a_star.truncate(order);
    let mut c = TruncatedSeries::one(order);
    let mut c_star = TruncatedSeries::one(order);
    // each round fixes at least one more x-degree
    for _ in 0..=order {
        let next_c = a_star.compose(&c_star.pow(d).shift((1, 1, 0)))?;
        let next_c_star = a.compose(&c.pow(d).shift((1, 0, 1)))?;
        if next_c == c && next_c_star == c_star {
            break;
        }
        c = next_c;
        c_star = next_c_star;
    }
    Ok((c, c_star))
}

fn weight_at(seq: &[BigRational], idx: usize, name: &str) -> Result<BigRational> {
    seq.get(idx)
        .cloned()
        .ok_or_else(|| Error::OutOfRange(format!("sequence {name} has no entry {idx}")))
}

/// `Σ_π wt(π)` over `NC^d_{dk+1}` with
/// `wt(π) = Π_B a((|B|-1)/d) Π_{C'} a*((|C'|-1)/d) s^{corank} t^{rank}`.
pub fn weighted_sum_b(
    k: usize,
    d: usize,
    a: &[BigRational],
    a_star: &[BigRational],
    budget: u128,
) -> Result<StPolynomial> {
    let one = BigRational::one();
    if a.first() != Some(&one) || a_star.first() != Some(&one) {
        return Err(Error::NonUnitConstant);
    }
    let poset = build_poset_with(
        d * k + 1,
        d,
        &BuildOptions {
            budget,
            ..Default::default()
        },
    )?;
    let mut out = StPolynomial::new();
    for pi in poset.elements() {
        let dual = pi.kreweras_dual();
        let mut w = BigRational::one();
        for b in pi.blocks() {
            w *= weight_at(a, (b.len() - 1) / d, "a")?;
        }
        for c in dual.blocks() {
            w *= weight_at(a_star, (c.len() - 1) / d, "a*")?;
        }
        let key = ((pi.num_blocks() - 1) / d, (dual.num_blocks() - 1) / d);
        let entry = out.entry(key).or_insert_with(BigRational::zero);
        *entry += w;
    }
    out.retain(|_, v| !v.is_zero());
    Ok(out)
}

/// Outcome of the Speicher-type identity check for one sequence `a`.
#[derive(Clone, Debug)]
pub struct SpeicherCheck {
    pub a: Vec<BigRational>,
    pub holds: bool,
    /// `1 + x B^d`.
    pub b_bar: TruncatedSeries,
    /// `Ā(x B̄)`.
    pub rhs: TruncatedSeries,
}

/// With `s = t = 1` and `a*(k) = (-1)^k C(-1/d, k)`, checks
/// `B̄(x) = Ā(x B̄(x))` where `Ā = 1 + x A^d` and `B̄ = 1 + x B^d`.
pub fn verify_speicher(d: usize, order: usize, a: &[BigRational]) -> Result<SpeicherCheck> {
    if d == 0 {
        return Err(Error::ZeroD);
    }
    let alpha = BigRational::new(BigInt::from(-1), BigInt::from(d));
    let a_star: Vec<BigRational> = (0..=order)
        .map(|k| {
            let v = generalized_binomial(&alpha, k);
            if k % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    let a_series = TruncatedSeries::from_x_coefficients(a, order);
    let a_star_series = TruncatedSeries::from_x_coefficients(&a_star, order);
    let (c, c_star) = solve_cc_star(&a_series, &a_star_series, d, order)?;
    let b = (&c * &c_star).at_st_one();
    let x = TruncatedSeries::x(order);
    let one = TruncatedSeries::one(order);
    let b_bar = &one + &(&x * &b.pow(d));
    let a_bar = &one + &(&x * &a_series.pow(d));
    let rhs = a_bar.compose(&(&x * &b_bar))?;
    Ok(SpeicherCheck {
        a: a.to_vec(),
        holds: b_bar == rhs,
        b_bar,
        rhs,
    })
}

/// Runs [`verify_speicher`] on `trials` pseudo-random sequences with
/// `a(0) = 1` and other entries in `[-3, 3]`.
pub fn verify_speicher_random(
    d: usize,
    order: usize,
    seed: u64,
    trials: usize,
) -> Result<Vec<SpeicherCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| {
            let a: Vec<BigRational> = (0..=order)
                .map(|k| {
                    if k == 0 {
                        rational(1)
                    } else {
                        rational(rng.random_range(-3..=3))
                    }
                })
                .collect();
            verify_speicher(d, order, &a)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::closed_form::{closed_form, ClosedForm};

    fn ones(n: usize) -> Vec<BigRational> {
        vec![rational(1); n]
    }

    #[test]
    fn trivial_weights() {
        let one = TruncatedSeries::one(5);
        let (c, c_star) = solve_cc_star(&one, &one, 2, 5).unwrap();
        assert_eq!(c, one);
        assert_eq!(c_star, one);
    }

    #[test]
    fn non_unit_rejected() {
        let two = TruncatedSeries::constant(rational(2), 3);
        let one = TruncatedSeries::one(3);
        assert_eq!(solve_cc_star(&two, &one, 1, 3).unwrap_err(), Error::NonUnitConstant);
    }

    #[test]
    fn geometric_weights_give_fuss_catalan_relation() {
        for d in 1..4 {
            let g = TruncatedSeries::geometric(6);
            let (c, c_star) = solve_cc_star(&g, &g, d, 6).unwrap();
            assert!(c.is_balanced() && c_star.is_balanced());
            let c1 = c.at_st_one();
            assert_eq!(c1, c_star.at_st_one());
            let x = TruncatedSeries::x(6);
            let rhs = &TruncatedSeries::one(6) + &(&x * &c1.pow(d + 1));
            assert_eq!(c1, rhs);
            let b = (&c * &c_star).at_st_one();
            for k in 0..=6 {
                let expect = closed_form(ClosedForm::Cardinality { k }, d).unwrap();
                assert_eq!(b.coefficient((k, 0, 0)), BigRational::from_integer(expect));
            }
        }
    }

    #[test]
    fn weighted_sum_examples() {
        let b0 = weighted_sum_b(0, 2, &ones(1), &ones(1), u128::MAX).unwrap();
        assert_eq!(b0, StPolynomial::from([((0, 0), rational(1))]));
        let b1 = weighted_sum_b(1, 2, &ones(2), &ones(2), u128::MAX).unwrap();
        assert_eq!(
            b1,
            StPolynomial::from([((1, 0), rational(1)), ((0, 1), rational(1))])
        );
        let b2 = weighted_sum_b(2, 1, &ones(3), &ones(3), u128::MAX).unwrap();
        let total: BigRational = b2.values().cloned().sum();
        assert_eq!(total, rational(5));
    }

    #[test]
    fn speicher_examples() {
        assert!(verify_speicher(1, 6, &ones(7)).unwrap().holds);
        let mut a = vec![rational(1)];
        a.extend([0; 6].map(rational));
        assert!(verify_speicher(2, 6, &a).unwrap().holds);
        let a: Vec<_> = [1, 2, -1, 3, 0, -2, 1].map(rational).to_vec();
        assert!(verify_speicher(2, 6, &a).unwrap().holds);
        for check in verify_speicher_random(3, 5, 7, 3).unwrap() {
            assert!(check.holds);
        }
    }
}
