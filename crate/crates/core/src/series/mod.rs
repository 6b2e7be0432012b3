//! Exact truncated power series in `x` with polynomial coefficients in `s`
//! and `t`.

pub mod cc;
pub mod closed_form;
pub mod good;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cc::{solve_cc_star, verify_speicher, verify_speicher_random, weighted_sum_b, SpeicherCheck};
pub use closed_form::{binomial, closed_form, generalized_binomial, ClosedForm};
pub use good::{
    algebraic_coefficient, good_fixed_point, good_fixed_point_series, good_inversion_2,
    small_blocks_rank_via_good,
};

/// Exponent triple `(x, s, t)`.
pub type Monomial = (usize, usize, usize);

/// Polynomial in `s` and `t`, keyed by `(s, t)` exponents.
pub type StPolynomial = BTreeMap<(usize, usize), BigRational>;

/// A power series truncated above `x^order`. Zero coefficients are never
/// stored, so structural equality is equality of series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

pub fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(BigRational::one(), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        Self::monomial(c, (0, 0, 0), order)
    }

    pub fn monomial(c: BigRational, m: Monomial, order: usize) -> Self {
        let mut out = Self::zero(order);
        out.add_term(m, c);
        out
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::monomial(BigRational::one(), (1, 0, 0), order)
    }

    /// `Σ_k coeffs[k] x^k`.
    pub fn from_x_coefficients(coeffs: &[BigRational], order: usize) -> Self {
        let mut out = Self::zero(order);
        for (k, c) in coeffs.iter().enumerate() {
            out.add_term((k, 0, 0), c.clone());
        }
        out
    }

    /// A polynomial in two variables `s, t` graded by total degree: the term
    /// `s^i t^j` is stored with `x`-exponent `i + j`.
    pub fn bivariate(terms: &[((usize, usize), BigRational)], order: usize) -> Self {
        let mut out = Self::zero(order);
        for ((i, j), c) in terms {
            out.add_term((i + j, *i, *j), c.clone());
        }
        out
    }

    /// `1/(1-x)`.
    pub fn geometric(order: usize) -> Self {
        Self::from_x_coefficients(&vec![BigRational::one(); order + 1], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: Monomial) -> BigRational {
        self.terms.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The `s, t` polynomial multiplying `x^k`.
    pub fn x_coefficient(&self, k: usize) -> StPolynomial {
        self.terms
            .range((k, 0, 0)..(k + 1, 0, 0))
            .map(|(&(_, i, j), c)| ((i, j), c.clone()))
            .collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if m.0 > self.order || c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0 <= order)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut out = Self::zero(self.order);
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    /// Multiplies by `x^a s^b t^c`, keeping the current order.
    pub fn shift(&self, by: Monomial) -> Self {
        let mut out = Self::zero(self.order);
        for (m, v) in &self.terms {
            out.add_term((m.0 + by.0, m.1 + by.1, m.2 + by.2), v.clone());
        }
        out
    }

    /// True when the `x^0` part is a constant with no `s` or `t`.
    fn scalar_constant(&self) -> Option<BigRational> {
        let mut x0 = self.terms.range((0, 0, 0)..(1, 0, 0));
        match (x0.next(), x0.next()) {
            (None, _) => Some(BigRational::zero()),
            (Some(((0, 0, 0), c)), None) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn has_zero_x_constant(&self) -> bool {
        self.terms.range((0, 0, 0)..(1, 0, 0)).next().is_none()
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative inverse; the `x^0` part must be a nonzero scalar.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.scalar_constant().ok_or(Error::NonUnitConstant)?;
        if c0.is_zero() {
            return Err(Error::ZeroConstant);
        }
        let inv0 = c0.recip();
        // 1/(c0 (1 + h)) with h = self/c0 - 1
        let h = &self.scale(&inv0) - &Self::one(self.order);
        let neg_h = -&h;
        let mut acc = Self::one(self.order);
        for _ in 0..self.order {
            acc = &Self::one(self.order) + &(&neg_h * &acc);
        }
        Ok(acc.scale(&inv0))
    }

    /// Integer power, negative exponents through the inverse.
    pub fn pow_i(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as usize))
        } else {
            Ok(self.inverse()?.pow(e.unsigned_abs() as usize))
        }
    }

    /// Substitutes `inner` for `x`. `inner` must have no `x^0` terms.
    pub fn compose(&self, inner: &TruncatedSeries) -> Result<Self> {
        if !inner.has_zero_x_constant() {
            return Err(Error::NonzeroInnerConstant);
        }
        let order = self.order.min(inner.order);
        let inner = inner.truncate(order);
        let top = self.terms.keys().map(|m| m.0).max().unwrap_or(0).min(order);
        let mut acc = Self::zero(order);
        for k in (0..=top).rev() {
            acc = &acc * &inner;
            for (&(_, i, j), c) in self.terms.range((k, 0, 0)..(k + 1, 0, 0)) {
                acc.add_term((0, i, j), c.clone());
            }
        }
        Ok(acc)
    }

    /// Treats the `s` and `t` exponents of `self` as the arguments of a
    /// function `g(u, v)` and evaluates `g(f1, f2)`. Both arguments need
    /// zero `x^0` part.
    pub fn substitute_st(&self, f1: &TruncatedSeries, f2: &TruncatedSeries) -> Result<Self> {
        if !f1.has_zero_x_constant() || !f2.has_zero_x_constant() {
            return Err(Error::NonzeroInnerConstant);
        }
        let order = self.order.min(f1.order).min(f2.order);
        let mut out = Self::zero(order);
        let mut p1: Vec<TruncatedSeries> = vec![Self::one(order)];
        let mut p2: Vec<TruncatedSeries> = vec![Self::one(order)];
        for (&(_, a, b), c) in &self.terms {
            while p1.len() <= a {
                let next = p1.last().unwrap() * f1;
                p1.push(next);
            }
            while p2.len() <= b {
                let next = p2.last().unwrap() * f2;
                p2.push(next);
            }
            out = &out + &(&p1[a] * &p2[b]).scale(c);
        }
        Ok(out)
    }

    /// `s ∂/∂s`.
    pub fn euler_s(&self) -> Self {
        self.map_coefficients(|m, c| c * BigInt::from(m.1))
    }

    /// `t ∂/∂t`.
    pub fn euler_t(&self) -> Self {
        self.map_coefficients(|m, c| c * BigInt::from(m.2))
    }

    fn map_coefficients(&self, f: impl Fn(&Monomial, &BigRational) -> BigRational) -> Self {
        let mut out = Self::zero(self.order);
        for (m, c) in &self.terms {
            out.add_term(*m, f(m, c));
        }
        out
    }

    /// Sets `s = t = 1`.
    pub fn at_st_one(&self) -> Self {
        let mut out = Self::zero(self.order);
        for (m, c) in &self.terms {
            out.add_term((m.0, 0, 0), c.clone());
        }
        out
    }

    /// True when every monomial `x^k s^i t^j` has `i + j = k`.
    pub fn is_balanced(&self) -> bool {
        self.terms.keys().all(|&(k, i, j)| i + j == k)
    }

    pub fn to_dump(&self) -> SeriesDump {
        SeriesDump {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(&(x, s, t), c)| TermDump {
                    x,
                    s,
                    t,
                    num: json_int(c.numer()),
                    den: json_int(c.denom()),
                })
                .collect(),
        }
    }

    pub fn from_dump(dump: &SeriesDump) -> Result<Self> {
        let mut out = Self::zero(dump.order);
        for term in &dump.terms {
            let num = parse_json_int(&term.num)?;
            let den = parse_json_int(&term.den)?;
            if den.is_zero() {
                return Err(Error::Parse("zero denominator".into()));
            }
            out.add_term((term.x, term.s, term.t), BigRational::new(num, den));
        }
        Ok(out)
    }
}

fn json_int(v: &BigInt) -> serde_json::Value {
    match v.to_i64() {
        Some(small) => serde_json::Value::from(small),
        None => serde_json::Value::from(v.to_string()),
    }
}

fn parse_json_int(v: &serde_json::Value) -> Result<BigInt> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        serde_json::Value::String(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        other => Err(Error::Parse(format!("not an integer: {other}"))),
    }
}

/// JSON form `{"order", "terms": [{"x","s","t","num","den"}]}`. Numerators
/// and denominators outside the `i64` range are written as strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesDump {
    pub order: usize,
    pub terms: Vec<TermDump>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDump {
    pub x: usize,
    pub s: usize,
    pub t: usize,
    pub num: serde_json::Value,
    pub den: serde_json::Value,
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let mut out = self.truncate(self.order.min(rhs.order));
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self + &(-rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        self.map_coefficients(|_, c| -c)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        let mut out = TruncatedSeries::zero(order);
        for (a, x) in &self.terms {
            if a.0 > order {
                break;
            }
            for (b, y) in &rhs.terms {
                if a.0 + b.0 > order {
                    break;
                }
                out.add_term((a.0 + b.0, a.1 + b.1, a.2 + b.2), x * y);
            }
        }
        out
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (idx, (&(x, s, t), c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if idx == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let abs = c.abs();
            let bare = x + s + t > 0 && abs.is_one();
            if !bare {
                write!(f, "{abs}")?;
            }
            let mut first = bare;
            for (name, e) in [("x", x), ("s", s), ("t", t)] {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        write!(f, " + O(x^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        rational(n)
    }

    #[test]
    fn geometric_inverse() {
        let g = TruncatedSeries::geometric(6);
        let inv = g.inverse().unwrap();
        let expect = &TruncatedSeries::one(6) - &TruncatedSeries::x(6);
        assert_eq!(inv, expect);
        assert_eq!(&g * &inv, TruncatedSeries::one(6));
    }

    #[test]
    fn inverse_rejects_bad_constants() {
        assert_eq!(TruncatedSeries::x(3).inverse().unwrap_err(), Error::ZeroConstant);
        let st = TruncatedSeries::monomial(r(1), (0, 1, 0), 3);
        let f = &TruncatedSeries::one(3) + &st;
        assert_eq!(f.inverse().unwrap_err(), Error::NonUnitConstant);
    }

    #[test]
    fn compose_requires_zero_inner_constant() {
        let g = TruncatedSeries::geometric(4);
        assert_eq!(
            g.compose(&TruncatedSeries::one(4)).unwrap_err(),
            Error::NonzeroInnerConstant
        );
        // 1/(1 - 2x)
        let two_x = TruncatedSeries::x(4).scale(&r(2));
        let c = g.compose(&two_x).unwrap();
        for k in 0..=4 {
            assert_eq!(c.coefficient((k, 0, 0)), r(1 << k));
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = &TruncatedSeries::one(5) + &TruncatedSeries::monomial(r(3), (1, 1, 0), 5);
        let mut slow = TruncatedSeries::one(5);
        for _ in 0..4 {
            slow = &slow * &f;
        }
        assert_eq!(f.pow(4), slow);
        assert_eq!(f.pow_i(-2).unwrap(), f.pow(2).inverse().unwrap());
    }

    #[test]
    fn dump_round_trip() {
        let f = TruncatedSeries::geometric(3)
            .inverse()
            .unwrap()
            .scale(&BigRational::new(BigInt::from(2), BigInt::from(3)));
        let text = serde_json::to_string(&f.to_dump()).unwrap();
        assert!(text.contains("\"num\":-2"));
        let back: SeriesDump = serde_json::from_str(&text).unwrap();
        assert_eq!(TruncatedSeries::from_dump(&back).unwrap(), f);
    }

    #[test]
    fn display() {
        let f = &TruncatedSeries::one(2) - &TruncatedSeries::monomial(r(2), (1, 0, 1), 2);
        assert_eq!(f.to_string(), "1 - 2*x*t + O(x^3)");
    }
}
