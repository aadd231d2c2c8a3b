//! Exact base-2 logarithms of ultrametric norm values.
//!
//! Every norm computed by this crate is a value of the form `2^(p/q)` or `0`.
//! `LogNorm` stores the exponent `p/q` exactly, with a distinguished bottom
//! element for the norm of zero. Comparisons, joins (ultrametric sums) and
//! additions (products of norms) are all exact rational operations.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `log2` of a norm value. `Bottom` is the norm of zero (conceptually `-inf`).
///
/// The derived order puts `Bottom` below every finite value, matching the
/// order of the norms themselves.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LogNorm {
    Bottom,
    Finite(BigRational),
}

impl LogNorm {
    pub fn zero() -> Self {
        LogNorm::Finite(BigRational::zero())
    }

    pub fn finite(numer: i64, denom: i64) -> Self {
        LogNorm::Finite(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_rational(value: BigRational) -> Self {
        LogNorm::Finite(value)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, LogNorm::Bottom)
    }

    pub fn as_finite(&self) -> Option<&BigRational> {
        match self {
            LogNorm::Bottom => None,
            LogNorm::Finite(v) => Some(v),
        }
    }

    /// Join of two norms: `max(|a|, |b|)`, the ultrametric bound for a sum.
    /// `Bottom` is the identity.
    pub fn join(&self, other: &LogNorm) -> LogNorm {
        std::cmp::max(self, other).clone()
    }

    /// Multiply the underlying norm by an integer power: `|a|^n` is `n * log|a|`.
    /// `Bottom` stays `Bottom` for n > 0; `0^0 = 1` gives log 0.
    pub fn scale_int(&self, n: i64) -> LogNorm {
        match self {
            LogNorm::Bottom => {
                if n == 0 {
                    LogNorm::zero()
                } else {
                    LogNorm::Bottom
                }
            }
            LogNorm::Finite(v) => LogNorm::Finite(v * BigRational::from(BigInt::from(n))),
        }
    }

    /// Scale by an exact rational factor.
    pub fn scale(&self, factor: &BigRational) -> LogNorm {
        match self {
            LogNorm::Bottom => {
                if factor.is_zero() {
                    LogNorm::zero()
                } else {
                    LogNorm::Bottom
                }
            }
            LogNorm::Finite(v) => LogNorm::Finite(v * factor),
        }
    }

    /// Exact comparison of the underlying norm `2^self` against a positive
    /// rational `value`: returns true iff `2^self > value`.
    ///
    /// For `self = p/q` this is the integer comparison `2^p * d^q > n^q`
    /// (with `value = n/d`), so no floating point is involved.
    pub fn exceeds_linear(&self, value: &BigRational) -> bool {
        if !value.is_positive() {
            return !self.is_bottom() || value.is_negative();
        }
        let exp = match self {
            LogNorm::Bottom => return false,
            LogNorm::Finite(v) => v,
        };
        let p = exp.numer().clone();
        let q = u32::try_from(exp.denom()).expect("log-norm denominator fits u32");
        let n = value.numer();
        let d = value.denom();
        let two = BigInt::from(2);
        if p.is_negative() {
            let pow2 = two.pow(u32::try_from(-p.clone()).expect("log-norm numerator fits u32"));
            // 2^(p/q) > n/d  <=>  d^q > 2^|p| n^q
            d.pow(q) > pow2 * n.pow(q)
        } else {
            let pow2 = two.pow(u32::try_from(p).expect("log-norm numerator fits u32"));
            pow2 * d.pow(q) > n.pow(q)
        }
    }

    /// Render the underlying norm `2^self` as a short string: exact decimal
    /// where the exponent is an integer, `2^(p/q)` otherwise.
    pub fn linear_string(&self) -> String {
        match self {
            LogNorm::Bottom => "0".to_string(),
            LogNorm::Finite(v) => {
                if v.is_integer() {
                    let p = v.numer();
                    if let Ok(exp) = u32::try_from(p) {
                        if exp <= 64 {
                            return BigInt::from(2).pow(exp).to_string();
                        }
                    } else if let Ok(exp) = u32::try_from(-p.clone()) {
                        if exp <= 64 {
                            return format!("1/{}", BigInt::from(2).pow(exp));
                        }
                    }
                }
                format!("2^({})", v)
            }
        }
    }
}

impl Add<&LogNorm> for &LogNorm {
    type Output = LogNorm;

    /// Product of the underlying norms: `log(|a||b|) = log|a| + log|b|`.
    /// `Bottom` is absorbing.
    fn add(self, rhs: &LogNorm) -> LogNorm {
        match (self, rhs) {
            (LogNorm::Finite(a), LogNorm::Finite(b)) => LogNorm::Finite(a + b),
            _ => LogNorm::Bottom,
        }
    }
}

impl Add for LogNorm {
    type Output = LogNorm;

    fn add(self, rhs: LogNorm) -> LogNorm {
        &self + &rhs
    }
}

impl fmt::Display for LogNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogNorm::Bottom => write!(f, "bottom"),
            LogNorm::Finite(v) => write!(f, "{}", v),
        }
    }
}

impl FromStr for LogNorm {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("bottom") {
            return Ok(LogNorm::Bottom);
        }
        parse_rational(s).map(LogNorm::Finite)
    }
}

/// Parse `"p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> crate::error::Result<BigRational> {
    let s = s.trim();
    let (numer, denom) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n = BigInt::from_str(numer)
        .map_err(|e| crate::error::Error::Config(format!("bad rational `{s}`: {e}")))?;
    let d = BigInt::from_str(denom)
        .map_err(|e| crate::error::Error::Config(format!("bad rational `{s}`: {e}")))?;
    if d.is_zero() {
        return Err(crate::error::Error::Config(format!(
            "bad rational `{s}`: zero denominator"
        )));
    }
    Ok(BigRational::new(n, d))
}

/// Canonical string form of a rational: `"p"` for integers, `"p/q"` otherwise.
pub fn rational_string(v: &BigRational) -> String {
    v.to_string()
}

pub fn rational_int(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

impl Serialize for LogNorm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LogNorm {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bottom_below_everything() {
        assert!(LogNorm::Bottom < LogNorm::finite(-1_000_000, 1));
        assert!(LogNorm::finite(-1, 2) < LogNorm::finite(1, 3));
    }

    #[test]
    fn add_is_absorbing_on_bottom() {
        let x = LogNorm::finite(3, 4);
        assert_eq!(&x + &LogNorm::Bottom, LogNorm::Bottom);
        assert_eq!(&LogNorm::Bottom + &LogNorm::Bottom, LogNorm::Bottom);
        assert_eq!(&x + &LogNorm::finite(1, 4), LogNorm::finite(1, 1));
    }

    #[test]
    fn join_identity_is_bottom() {
        let x = LogNorm::finite(-5, 3);
        assert_eq!(x.join(&LogNorm::Bottom), x);
        assert_eq!(LogNorm::Bottom.join(&x), x);
        assert_eq!(x.join(&LogNorm::zero()), LogNorm::zero());
    }

    #[test]
    fn exact_linear_comparison() {
        // 2^3 = 8 > 5, 2^2 = 4 < 5
        assert!(LogNorm::finite(3, 1).exceeds_linear(&rational_int(5)));
        assert!(!LogNorm::finite(2, 1).exceeds_linear(&rational_int(5)));
        // 2^(5/3) vs 3: 2^5 = 32 > 27 = 3^3
        assert!(LogNorm::finite(5, 3).exceeds_linear(&rational_int(3)));
        // 2^(3/2) vs 3: 8 < 9
        assert!(!LogNorm::finite(3, 2).exceeds_linear(&rational_int(3)));
        assert!(!LogNorm::Bottom.exceeds_linear(&rational_int(1)));
    }

    #[test]
    fn string_round_trip() {
        for s in ["bottom", "5/3", "-7", "0"] {
            let v: LogNorm = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
    }

    #[test]
    fn linear_strings() {
        assert_eq!(LogNorm::finite(1, 1).linear_string(), "2");
        assert_eq!(LogNorm::finite(-2, 1).linear_string(), "1/4");
        assert_eq!(LogNorm::finite(5, 3).linear_string(), "2^(5/3)");
        assert_eq!(LogNorm::Bottom.linear_string(), "0");
    }
}
