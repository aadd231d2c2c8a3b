//! The coefficient field: finitely supported series `sum q_e t^e` with
//! rational coefficients, rational exponents, and `|t| = 1/2`.
//!
//! The absolute value of a nonzero element is `2^(-v)` where `v` is the
//! smallest exponent in its support, so the attainable norms are
//! `{2^e : e rational} ∪ {0}` — a value group dense in `[0, oo)`. All
//! arithmetic is exact; inverses are truncated on demand.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lognorm::{parse_rational, rational_int, LogNorm};

/// An element of the coefficient field, stored in canonical sparse form:
/// a map from exponent to nonzero rational coefficient.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValuedScalar {
    terms: BTreeMap<BigRational, BigRational>,
}

impl ValuedScalar {
    pub fn zero() -> Self {
        ValuedScalar::default()
    }

    pub fn one() -> Self {
        ValuedScalar::from_rational(BigRational::one())
    }

    /// The constant `q t^0`.
    pub fn from_rational(q: BigRational) -> Self {
        Self::monomial(BigRational::zero(), q)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rational_int(n))
    }

    /// The single term `q t^e`.
    pub fn monomial(e: BigRational, q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(e, q);
        }
        ValuedScalar { terms }
    }

    /// `t^e`, the canonical element of absolute value `2^(-e)`.
    pub fn var_power(e: BigRational) -> Self {
        Self::monomial(e, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Smallest exponent in the support; `None` for zero.
    pub fn valuation(&self) -> Option<&BigRational> {
        self.terms.keys().next()
    }

    /// `log2` of the absolute value: minus the valuation, `Bottom` for zero.
    pub fn log_norm(&self) -> LogNorm {
        match self.valuation() {
            None => LogNorm::Bottom,
            Some(v) => LogNorm::Finite(-v),
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigRational, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert_add(terms: &mut BTreeMap<BigRational, BigRational>, e: BigRational, q: BigRational) {
        if q.is_zero() {
            return;
        }
        match terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(q);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += q;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn pow(&self, n: u64) -> ValuedScalar {
        let mut acc = ValuedScalar::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    /// Truncated inverse: returns `b` such that every exponent of `a*b - 1`
    /// is at least `precision`. Exact when `self` is a single term.
    pub fn inverse_trunc(&self, precision: &BigRational) -> Result<ValuedScalar> {
        let (lead_exp, lead_coef) = match self.terms.iter().next() {
            None => return Err(Error::ZeroInverse),
            Some((e, q)) => (e.clone(), q.clone()),
        };
        // a = c t^v (1 + u) with val(u) = delta > 0; then
        // a^{-1} = c^{-1} t^{-v} sum (-u)^m, and truncating the sum after
        // m = K leaves a*b - 1 = -(-u)^{K+1} with valuation (K+1) delta.
        let lead_inv = ValuedScalar::monomial(-&lead_exp, lead_coef.recip());
        let unit_tail = &(self * &lead_inv) - &ValuedScalar::one();
        if unit_tail.is_zero() {
            return Ok(lead_inv);
        }
        let delta = unit_tail.valuation().expect("nonzero tail").clone();
        debug_assert!(delta.is_positive());
        let mut geometric = ValuedScalar::one();
        let mut power = ValuedScalar::one();
        let minus_tail = -&unit_tail;
        loop {
            power = &power * &minus_tail;
            // valuation(power) = (m+1) delta after m+1 multiplications
            if power.valuation().map(|v| v >= precision).unwrap_or(true) {
                break;
            }
            geometric = &geometric + &power;
        }
        Ok(&lead_inv * &geometric)
    }
}

impl Add for &ValuedScalar {
    type Output = ValuedScalar;

    fn add(self, rhs: &ValuedScalar) -> ValuedScalar {
        let mut terms = self.terms.clone();
        for (e, q) in &rhs.terms {
            ValuedScalar::insert_add(&mut terms, e.clone(), q.clone());
        }
        ValuedScalar { terms }
    }
}

impl Sub for &ValuedScalar {
    type Output = ValuedScalar;

    fn sub(self, rhs: &ValuedScalar) -> ValuedScalar {
        self + &(-rhs)
    }
}

impl Neg for &ValuedScalar {
    type Output = ValuedScalar;

    fn neg(self) -> ValuedScalar {
        ValuedScalar {
            terms: self.terms.iter().map(|(e, q)| (e.clone(), -q)).collect(),
        }
    }
}

impl Mul for &ValuedScalar {
    type Output = ValuedScalar;

    fn mul(self, rhs: &ValuedScalar) -> ValuedScalar {
        let mut terms = BTreeMap::new();
        for (ea, qa) in &self.terms {
            for (eb, qb) in &rhs.terms {
                ValuedScalar::insert_add(&mut terms, ea + eb, qa * qb);
            }
        }
        ValuedScalar { terms }
    }
}

impl fmt::Display for ValuedScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, q) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{}", q)?;
            } else if q.is_one() {
                write!(f, "t^({})", e)?;
            } else {
                write!(f, "{}*t^({})", q, e)?;
            }
        }
        Ok(())
    }
}

// Serialized as a list of (exponent, numerator, denominator) string triples.
impl Serialize for ValuedScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, q) in &self.terms {
            seq.serialize_element(&(e.to_string(), q.numer().to_string(), q.denom().to_string()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ValuedScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let triples: Vec<(String, String, String)> = Vec::deserialize(deserializer)?;
        let mut out = ValuedScalar::zero();
        for (e, n, d) in triples {
            let e = parse_rational(&e).map_err(D::Error::custom)?;
            let n = parse_rational(&n).map_err(D::Error::custom)?;
            let d = parse_rational(&d).map_err(D::Error::custom)?;
            if d.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            out = &out + &ValuedScalar::monomial(e, n / d);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lognorm::rational;

    fn t() -> ValuedScalar {
        ValuedScalar::var_power(rational_int(1))
    }

    #[test]
    fn cancellation_to_zero() {
        let sum = &t() + &(-&t());
        assert!(sum.is_zero());
        assert_eq!(sum.log_norm(), LogNorm::Bottom);
    }

    #[test]
    fn min_valuation_wins() {
        let t2 = ValuedScalar::var_power(rational_int(2));
        let sum = &t() + &t2;
        assert_eq!(sum.num_terms(), 2);
        assert_eq!(sum.log_norm(), LogNorm::finite(-1, 1));
    }

    #[test]
    fn constant_term_cancellation() {
        let three_plus_t = &ValuedScalar::from_int(3) + &t();
        let diff = &three_plus_t + &ValuedScalar::from_int(-3);
        assert_eq!(diff, t());
        assert_eq!(diff.log_norm(), LogNorm::finite(-1, 1));
    }

    #[test]
    fn products() {
        assert_eq!(
            (&t() * &t()).log_norm(),
            LogNorm::finite(-2, 1),
            "t * t = t^2"
        );
        let one = ValuedScalar::one();
        let prod = &(&one + &t()) * &(&one - &t());
        let expected = &one - &(&t() * &t());
        assert_eq!(prod, expected, "(1+t)(1-t) = 1 - t^2");
        // rational exponents: t^(1/3) * t^(2/3) = t
        let a = ValuedScalar::var_power(rational(1, 3));
        let b = ValuedScalar::var_power(rational(2, 3));
        assert_eq!(&a * &b, t());
    }

    #[test]
    fn inverse_of_monomial_is_exact() {
        let inv = t().inverse_trunc(&rational_int(100)).unwrap();
        assert_eq!(inv, ValuedScalar::var_power(rational_int(-1)));
        let two_inv = ValuedScalar::from_int(2)
            .inverse_trunc(&rational_int(1))
            .unwrap();
        assert_eq!(two_inv, ValuedScalar::from_rational(rational(1, 2)));
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_t = &ValuedScalar::one() - &t();
        let inv = one_minus_t.inverse_trunc(&rational_int(3)).unwrap();
        // 1 + t + t^2, since (1-t)(1+t+t^2) = 1 - t^3
        let expected = &(&ValuedScalar::one() + &t()) + &t().pow(2);
        assert_eq!(inv, expected);
        let residual = &(&one_minus_t * &inv) - &ValuedScalar::one();
        assert!(residual.valuation().unwrap() >= &rational_int(3));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(matches!(
            ValuedScalar::zero().inverse_trunc(&rational_int(1)),
            Err(Error::ZeroInverse)
        ));
    }

    #[test]
    fn density_witness() {
        // for p < q there is a scalar with log-norm strictly between
        let p = rational(1, 3);
        let q = rational(1, 2);
        let mid = (&p + &q) / rational_int(2);
        let witness = ValuedScalar::var_power(-mid.clone());
        let ln = witness.log_norm();
        assert!(LogNorm::Finite(p) < ln && ln < LogNorm::Finite(q));
    }

    #[test]
    fn serde_triples() {
        let x = &(&ValuedScalar::from_rational(rational(5, 7))
            * &ValuedScalar::var_power(rational(1, 3)))
            + &ValuedScalar::one();
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"[["0","1","1"],["1/3","5","7"]]"#);
        let back: ValuedScalar = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
