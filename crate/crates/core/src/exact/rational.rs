//! Exact rational scalars.
//!
//! Every coefficient in this crate is an arbitrary precision rational kept in
//! lowest terms. `num_rational::BigRational` already normalizes on every
//! operation and prints as `p/q` (or `p` when the denominator is one), which
//! is exactly the textual form used by the definition files and reports.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseError;

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn q2(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p`, `-p`, or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseError> {
    let s = s.trim();
    let bad = || ParseError::BadNumber(s.to_string());
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Generalized binomial coefficient `top (top-1) ... (top-i+1) / i!`.
pub fn binomial(top: &Rational, i: u64) -> Rational {
    let mut acc = Rational::one();
    let mut factor = top.clone();
    for k in 1..=i {
        if factor.is_zero() {
            return Rational::zero();
        }
        acc *= &factor;
        acc /= Rational::from_integer(BigInt::from(k));
        factor -= Rational::one();
    }
    acc
}

pub fn binomial_i(top: i64, i: u64) -> Rational {
    binomial(&q(top), i)
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_edge_cases() {
        assert_eq!(binomial(&q2(7, 3), 0), q(1));
        assert_eq!(binomial_i(5, 2), q(10));
        assert_eq!(binomial(&q2(-1, 2), 2), q2(3, 8));
        assert_eq!(binomial_i(3, 5), q(0));
        assert_eq!(binomial_i(-1, 3), q(-1));
    }

    #[test]
    fn binomial_matches_falling_factorial_oracle() {
        // independent evaluation: numerator and denominator products kept apart
        for (n, d) in [(-1, 2), (5, 3), (-7, 4), (4, 1)] {
            for i in 0..7u64 {
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for k in 0..i as i64 {
                    num *= BigInt::from(n - k * d);
                    den *= BigInt::from(d * (k + 1));
                }
                assert_eq!(binomial(&q2(n, d), i), Rational::new(num, den));
            }
        }
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), q2(1, 2));
        assert_eq!(parse_rational("-4").unwrap(), q(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&q2(-2, 4)), "-1/2");
        assert_eq!(format_rational(&q(5)), "5");
    }
}
