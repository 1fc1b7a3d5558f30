//! Exact scalars, exponents and truncated formal series.

pub mod exponent;
pub mod rational;
pub mod series;

pub use exponent::ScaledExponent;
pub use rational::{binomial, binomial_i, format_rational, is_nonneg_integer, parse_rational, q, q2, sign, Rational};
pub use series::{binomial_expand, f_poly, Bounds, Coefficient, FormalSeries, Var};
