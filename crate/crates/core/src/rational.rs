//! Exact rational arithmetic used for every probability and threshold.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_count(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn half() -> Rational {
    ratio(1, 2)
}

pub fn to_f64(value: &Rational) -> f64 {
    // numerator/denominator may exceed f64 range individually
    match (value.numer().to_f64(), value.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = value.denom().bits().max(value.numer().bits()) as i64 - 60;
            let scale = BigInt::one() << shift.max(0) as usize;
            let n = (value.numer() / &scale).to_f64().unwrap_or(0.0);
            let d = (value.denom() / &scale).to_f64().unwrap_or(1.0);
            n / d
        }
    }
}

/// `min(p, 1 - p)`.
pub fn split_of(p_one: &Rational) -> Rational {
    let other = Rational::one() - p_one;
    if &other < p_one {
        other
    } else {
        p_one.clone()
    }
}

/// Always renders as `num/den`, including integers (`1/1`).
pub struct Display<'a>(pub &'a Rational);

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub fn format(value: &Rational) -> String {
    Display(value).to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRationalError(pub String);

/// Accepts `num/den`, a plain integer, or a finite decimal such as `0.25`.
pub fn parse(text: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(text.to_string());
    let text = text.trim();
    if let Some((n, d)) = text.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = if whole.is_empty() || whole == "-" {
            BigInt::zero()
        } else {
            whole.parse().map_err(|_| err())?
        };
        let frac_num: BigInt = frac.parse().map_err(|_| err())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac = Rational::new(frac_num, den);
        let whole = Rational::from_integer(whole.abs());
        let value = whole + frac;
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = text.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

/// Serde adapter storing a rational as a `"num/den"` string.
pub mod serde_str {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_with_denominator() {
        assert_eq!(format(&int(1)), "1/1");
        assert_eq!(format(&ratio(33, 20)), "33/20");
        assert_eq!(format(&ratio(2, 4)), "1/2");
    }

    #[test]
    fn parses_all_literal_forms() {
        assert_eq!(parse("1/5").unwrap(), ratio(1, 5));
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("0.25").unwrap(), ratio(1, 4));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn split_is_symmetric() {
        assert_eq!(split_of(&ratio(2, 3)), ratio(1, 3));
        assert_eq!(split_of(&ratio(1, 3)), ratio(1, 3));
        assert_eq!(split_of(&int(1)), int(0));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rational::new(
            num_traits::pow(BigInt::from(10), 400) + BigInt::one(),
            num_traits::pow(BigInt::from(10), 400) * BigInt::from(4),
        );
        assert!((to_f64(&big) - 0.25).abs() < 1e-12);
    }
}
