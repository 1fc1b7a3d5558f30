//! Exponents and mode indices living in `(1/T)Z`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::rational::Rational;
use crate::error::ParseError;

/// A rational number `numerator / scale`, always reduced. Two exponents with
/// different scales compare and combine through their common multiple.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ScaledExponent(Ratio<i64>);

impl ScaledExponent {
    pub fn new(numerator: i64, scale: i64) -> Self {
        assert!(scale > 0, "exponent scale must be positive");
        ScaledExponent(Ratio::new(numerator, scale))
    }

    pub const fn int(n: i64) -> Self {
        ScaledExponent(Ratio::new_raw(n, 1))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    /// Reduced denominator.
    pub fn scale(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.numerator())
    }

    pub fn floor(&self) -> i64 {
        Integer::div_floor(&self.numerator(), &self.scale())
    }

    pub fn ceil(&self) -> i64 {
        -Integer::div_floor(&-self.numerator(), &self.scale())
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Self {
        *self - Self::int(self.floor())
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.numerator().into(), self.scale().into())
    }

    pub fn from_rational(r: &Rational) -> Option<Self> {
        let n = r.numer().to_i64()?;
        let d = r.denom().to_i64()?;
        Some(Self::new(n, d))
    }

    /// True when `self - other` is an integer.
    pub fn same_coset(&self, other: &Self) -> bool {
        (*self - *other).is_integer()
    }

    /// Smallest element of `self + Z` that is strictly greater than `bound`.
    pub fn least_in_coset_above(&self, bound: Self) -> Self {
        let offset = self.fract();
        let mut k = (bound - offset).floor();
        let mut candidate = offset + Self::int(k);
        while candidate <= bound {
            k += 1;
            candidate = offset + Self::int(k);
        }
        candidate
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl From<i64> for ScaledExponent {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl Add for ScaledExponent {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ScaledExponent(self.0 + rhs.0)
    }
}

impl Add<i64> for ScaledExponent {
    type Output = Self;
    fn add(self, rhs: i64) -> Self {
        ScaledExponent(self.0 + rhs)
    }
}

impl Sub for ScaledExponent {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ScaledExponent(self.0 - rhs.0)
    }
}

impl Sub<i64> for ScaledExponent {
    type Output = Self;
    fn sub(self, rhs: i64) -> Self {
        ScaledExponent(self.0 - rhs)
    }
}

impl Mul<i64> for ScaledExponent {
    type Output = Self;
    fn mul(self, rhs: i64) -> Self {
        ScaledExponent(self.0 * rhs)
    }
}

impl Neg for ScaledExponent {
    type Output = Self;
    fn neg(self) -> Self {
        ScaledExponent(-self.0)
    }
}

impl PartialOrd for ScaledExponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ScaledExponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl fmt::Display for ScaledExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.scale())
        }
    }
}

impl fmt::Debug for ScaledExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ScaledExponent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let bad = || ParseError::BadNumber(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: i64 = d.trim().parse().map_err(|_| bad())?;
                if d <= 0 {
                    return Err(bad());
                }
                Ok(Self::new(n, d))
            }
            None => Ok(Self::int(s.parse().map_err(|_| bad())?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_comparison() {
        assert_eq!(ScaledExponent::new(2, 4), ScaledExponent::new(1, 2));
        assert!(ScaledExponent::new(1, 3) < ScaledExponent::new(1, 2));
        assert_eq!(ScaledExponent::new(1, 2) + ScaledExponent::new(1, 2), ScaledExponent::int(1));
        assert_eq!(ScaledExponent::new(-1, 2).floor(), -1);
        assert_eq!(ScaledExponent::new(-1, 2).ceil(), 0);
        assert_eq!(ScaledExponent::new(-1, 2).fract(), ScaledExponent::new(1, 2));
    }

    #[test]
    fn coset_bounds() {
        let half = ScaledExponent::new(1, 2);
        assert_eq!(half.least_in_coset_above(ScaledExponent::int(0)), half);
        assert_eq!(half.least_in_coset_above(half), ScaledExponent::new(3, 2));
        assert_eq!(
            ScaledExponent::int(0).least_in_coset_above(ScaledExponent::new(-1, 2)),
            ScaledExponent::int(0)
        );
    }

    #[test]
    fn text_form() {
        assert_eq!("3/6".parse::<ScaledExponent>().unwrap(), ScaledExponent::new(1, 2));
        assert_eq!(ScaledExponent::new(-3, 2).to_string(), "-3/2");
        assert_eq!(ScaledExponent::int(4).to_string(), "4");
    }
}
