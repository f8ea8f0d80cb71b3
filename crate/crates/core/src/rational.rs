//! Exact rationals with 64-bit numerator and denominator.
//!
//! Every operation is checked; overflow surfaces as [`Error::Overflow`]
//! instead of silently degrading to floating point.

use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        if num == i64::MIN || den == i64::MIN {
            return Err(Error::Overflow);
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    pub fn int(n: i64) -> Self {
        Rational(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.0
            .checked_add(&other.0)
            .map(Rational)
            .ok_or(Error::Overflow)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.0
            .checked_sub(&other.0)
            .map(Rational)
            .ok_or(Error::Overflow)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.0
            .checked_mul(&other.0)
            .map(Rational)
            .ok_or(Error::Overflow)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.0
            .checked_div(&other.0)
            .map(Rational)
            .ok_or(Error::Overflow)
    }

    pub fn neg(&self) -> Result<Self> {
        if self.numer() == i64::MIN {
            return Err(Error::Overflow);
        }
        Ok(Rational(-self.0))
    }

    pub fn pow(&self, exp: i32) -> Result<Self> {
        let base = if exp < 0 {
            Rational::ONE.div(self)?
        } else {
            *self
        };
        let mut acc = Rational::ONE;
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base)?;
        }
        Ok(acc)
    }

    /// Parses an integer or decimal literal exactly (`"2.5"` is 5/2).
    pub fn parse_decimal(text: &str) -> Result<Self> {
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        let digits = format!("{int_part}{frac_part}");
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Invalid(format!("bad numeric literal `{text}`")));
        }
        let num: i64 = digits.parse().map_err(|_| Error::Overflow)?;
        let den = 10i64
            .checked_pow(frac_part.len() as u32)
            .ok_or(Error::Overflow)?;
        Rational::new(num, den)
    }

    /// Parses `p`, `-p`, `p/q` or a decimal literal.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, text),
        };
        let value = match body.split_once('/') {
            Some((n, d)) => {
                Rational::parse_decimal(n.trim())?.div(&Rational::parse_decimal(d.trim())?)?
            }
            None => Rational::parse_decimal(body)?,
        };
        if neg {
            value.neg()
        } else {
            Ok(value)
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_literals_are_exact() {
        assert_eq!(
            Rational::parse("2.5").unwrap(),
            Rational::new(5, 2).unwrap()
        );
        assert_eq!(
            Rational::parse("-3/6").unwrap(),
            Rational::new(-1, 2).unwrap()
        );
        assert_eq!(
            Rational::parse("0.10").unwrap(),
            Rational::new(1, 10).unwrap()
        );
    }

    #[test]
    fn overflow_is_an_error() {
        let big = Rational::int(i64::MAX / 2 + 1);
        assert_eq!(big.add(&big), Err(Error::Overflow));
        assert_eq!(big.mul(&Rational::int(4)), Err(Error::Overflow));
    }

    #[test]
    fn negative_powers() {
        let two = Rational::int(2);
        assert_eq!(two.pow(-3).unwrap(), Rational::new(1, 8).unwrap());
        assert_eq!(Rational::ZERO.pow(-1), Err(Error::DivisionByZero));
    }
}
