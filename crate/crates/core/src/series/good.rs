//! Lagrange and Good inversion.
//!
//! Bivariate series `g(z, w)` are encoded as [`TruncatedSeries`] with `z`
//! stored as `s`, `w` stored as `t` and the `x`-exponent equal to the total
//! degree (see [`TruncatedSeries::bivariate`]).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::closed_form::binomial;
use super::{rational, TruncatedSeries};
use crate::error::{Error, Result};

/// `[z^n] G(z)^l` where `G = 1 + z G^m`, namely `l/(mn+l) C(mn+l, n)`.
pub fn algebraic_coefficient(m: usize, l: usize, n: usize) -> Result<BigInt> {
    if l == 0 || m == 0 {
        return Err(Error::OutOfRange(format!(
            "need m >= 1 and l >= 1, got m = {m}, l = {l}"
        )));
    }
    let top = m * n + l;
    let num = BigInt::from(l) * binomial(top as i64, n as i64);
    let (q, r) = num.div_rem(&BigInt::from(top));
    if !r.is_zero() {
        return Err(Error::NonIntegral {
            kind: format!("algebraic_coefficient(m={m}, l={l}, n={n})"),
        });
    }
    Ok(q)
}

fn check_constant(g: &TruncatedSeries) -> Result<()> {
    let rest_zero = g
        .terms()
        .all(|(&(x, s, t), _)| x == s + t);
    if !rest_zero {
        return Err(Error::Parse(
            "bivariate series must have x-exponent equal to total degree".into(),
        ));
    }
    if g.coefficient((0, 0, 0)).is_zero() {
        return Err(Error::ZeroConstant);
    }
    Ok(())
}

/// `[z^m w^n] f1^k f2^l` where `f1 = z g1(f1, f2)` and `f2 = w g2(f1, f2)`,
/// from the two-variable determinant formula
/// `[z^{m-k} w^{n-l}] det M` with
/// `M = [[g1^m - z g1_z g1^{m-1}, -w g1_w g1^{m-1}],
///       [-z g2_z g2^{n-1}, g2^n - w g2_w g2^{n-1}]]`.
pub fn good_inversion_2(
    g1: &TruncatedSeries,
    g2: &TruncatedSeries,
    m: usize,
    n: usize,
    k: usize,
    l: usize,
) -> Result<BigRational> {
    check_constant(g1)?;
    check_constant(g2)?;
    if k > m || l > n {
        return Ok(BigRational::zero());
    }
    let (a, b) = (m - k, n - l);
    let order = a + b;
    let g1 = g1.truncate(order);
    let g2 = g2.truncate(order);
    let g1m1 = g1.pow_i(m as i64 - 1)?;
    let g2n1 = g2.pow_i(n as i64 - 1)?;
    let m11 = &(&g1m1 * &g1) - &(&g1.euler_s() * &g1m1);
    let m12 = -&(&g1.euler_t() * &g1m1);
    let m21 = -&(&g2.euler_s() * &g2n1);
    let m22 = &(&g2n1 * &g2) - &(&g2.euler_t() * &g2n1);
    let det = &(&m11 * &m22) - &(&m12 * &m21);
    Ok(det.coefficient((order, a, b)))
}

/// Solves `f1 = z g1(f1, f2)`, `f2 = w g2(f1, f2)` to total degree `order`.
pub fn good_fixed_point_series(
    g1: &TruncatedSeries,
    g2: &TruncatedSeries,
    order: usize,
) -> Result<(TruncatedSeries, TruncatedSeries)> {
    check_constant(g1)?;
    check_constant(g2)?;
    let g1 = g1.truncate(order);
    let g2 = g2.truncate(order);
    let mut f1 = TruncatedSeries::zero(order);
    let mut f2 = TruncatedSeries::zero(order);
    for _ in 0..=order {
        let n1 = g1.substitute_st(&f1, &f2)?.shift((1, 1, 0));
        let n2 = g2.substitute_st(&f1, &f2)?.shift((1, 0, 1));
        if n1 == f1 && n2 == f2 {
            break;
        }
        f1 = n1;
        f2 = n2;
    }
    Ok((f1, f2))
}

/// The same coefficient as [`good_inversion_2`], read off the fixed point.
pub fn good_fixed_point(
    g1: &TruncatedSeries,
    g2: &TruncatedSeries,
    m: usize,
    n: usize,
    k: usize,
    l: usize,
) -> Result<BigRational> {
    let (f1, f2) = good_fixed_point_series(g1, g2, m + n)?;
    Ok((&f1.pow(k) * &f2.pow(l)).coefficient((m + n, m, n)))
}

/// Number of elements of rank `j` in `NC^d_{d(i+j)+1}` whose blocks and
/// dual blocks have sizes in `{1, d+1}`, as `[s^i t^j] (1 + D)(1 + D*)` with
/// `D = s (1 + D*)^d` and `D* = t (1 + D)^d`.
pub fn small_blocks_rank_via_good(d: usize, i: usize, j: usize) -> Result<BigRational> {
    let order = i + j;
    let one_plus = |var: (usize, usize)| {
        TruncatedSeries::bivariate(&[((0, 0), rational(1)), (var, rational(1))], order).pow(d)
    };
    let g1 = one_plus((0, 1));
    let g2 = one_plus((1, 0));
    let mut total = if i == 0 && j == 0 {
        rational(1)
    } else {
        BigRational::zero()
    };
    for (k, l) in [(1, 0), (0, 1), (1, 1)] {
        total += good_inversion_2(&g1, &g2, i, j, k, l)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebraic_examples() {
        assert_eq!(algebraic_coefficient(2, 1, 3).unwrap(), BigInt::from(5));
        assert_eq!(algebraic_coefficient(3, 1, 2).unwrap(), BigInt::from(3));
        for m in 1..5 {
            assert_eq!(algebraic_coefficient(m, 1, 0).unwrap(), BigInt::from(1));
        }
    }

    #[test]
    fn algebraic_matches_series_solution() {
        // G = 1 + z G^m solved by iteration
        for m in 1..4 {
            let order = 6;
            let z = TruncatedSeries::x(order);
            let mut g = TruncatedSeries::one(order);
            for _ in 0..=order {
                g = &TruncatedSeries::one(order) + &(&z * &g.pow(m));
            }
            for l in 1..4 {
                let gl = g.pow(l);
                for n in 0..=order {
                    assert_eq!(
                        gl.coefficient((n, 0, 0)),
                        BigRational::from_integer(algebraic_coefficient(m, l, n).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn trivial_g() {
        let one = TruncatedSeries::one(0);
        for m in 0..3 {
            for n in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let expect = if (m, n) == (k, l) { 1 } else { 0 };
                        let got = good_inversion_2(&one, &one, m, n, k, l).unwrap();
                        assert_eq!(got, rational(expect), "{m} {n} {k} {l}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_constant_rejected() {
        let z = TruncatedSeries::bivariate(&[((1, 0), rational(1))], 3);
        let one = TruncatedSeries::one(3);
        assert_eq!(
            good_inversion_2(&z, &one, 1, 1, 1, 1).unwrap_err(),
            Error::ZeroConstant
        );
    }

    #[test]
    fn small_blocks_rank_d1() {
        assert_eq!(small_blocks_rank_via_good(1, 1, 1).unwrap(), rational(3));
        assert_eq!(small_blocks_rank_via_good(2, 0, 0).unwrap(), rational(1));
    }
}
