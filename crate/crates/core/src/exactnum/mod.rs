//! Exact rationals, univariate rational polynomials and high-precision
//! complex root extraction.
//!
//! Everything else in the crate is built on three number types:
//! [`Rational`] for exact constants, [`rug::Float`] for real values at a
//! chosen working precision, and [`Complex`] for values that may leave the
//! real line (the coordinates and weights of complex rules).

mod complex;
mod linalg;
mod poly;
mod roots;

use std::ops::{Add, Div, Mul, Neg, Sub};

pub use complex::Complex;
pub use linalg::{solve_complex, solve_real, SolveFailure};
pub use poly::UniPoly;
pub use roots::{poly_roots, roots_from_elem, roots_of_complex_poly};
pub use rug::{Float, Integer, Rational};

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 256;

/// Environment variable that overrides [`DEFAULT_PRECISION`].
pub const PRECISION_ENV: &str = "TRISYM_PRECISION";

/// A value is numerically real when `|im| <= EPS_REAL`.
pub const EPS_REAL: f64 = 1e-20;

/// Working precision: `TRISYM_PRECISION` if set to an integer >= 64,
/// otherwise [`DEFAULT_PRECISION`].
pub fn default_precision() -> u32 {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u32>().ok())
        .filter(|&p| p >= 64)
        .unwrap_or(DEFAULT_PRECISION)
}

/// Field operations shared by the exact and floating scalar types.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Converts `r` into the same kind (and precision) of scalar as `like`.
    fn from_rational_like(r: &Rational, like: &Self) -> Self;

    fn one_like(like: &Self) -> Self {
        Self::from_rational_like(&Rational::from(1), like)
    }

    fn zero_like(like: &Self) -> Self {
        Self::from_rational_like(&Rational::new(), like)
    }
}

impl Scalar for Rational {
    fn from_rational_like(r: &Rational, _like: &Self) -> Self {
        r.clone()
    }
}

impl Scalar for Float {
    fn from_rational_like(r: &Rational, like: &Self) -> Self {
        Float::with_val(like.prec(), r)
    }
}

impl Scalar for Complex {
    fn from_rational_like(r: &Rational, like: &Self) -> Self {
        Complex::from_rational(r, like.prec())
    }
}

/// Signed elementary symmetric polynomials of `values`.
///
/// Returns `[x0, x1, .., xn]` with `x0 = 1` and `xk = (-1)^k e_k`, i.e. the
/// coefficients of `prod (X - v)` in descending powers of `X`.
pub fn elem_sym<T: Scalar>(values: &[T]) -> Vec<T> {
    assert!(!values.is_empty(), "elem_sym needs at least one value");
    let one = T::one_like(&values[0]);
    let mut coeffs = vec![one];
    for v in values {
        let mut next = coeffs.clone();
        next.push(T::zero_like(v));
        for k in 1..next.len() {
            next[k] = next[k].clone() - v.clone() * coeffs[k - 1].clone();
        }
        coeffs = next;
    }
    coeffs
}

/// Parses a decimal or fraction literal (`"3/7"`, `"-0.125"`, `"1e-3"`)
/// into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Some(r);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match digits.find('.') {
        Some(i) => (&digits[..i], &digits[i + 1..]),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: Integer = all.parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let mut r = Rational::from(num);
    let pow10 = Integer::from(Integer::u_pow_u(10, scale.unsigned_abs()));
    if scale >= 0 {
        r *= pow10;
    } else {
        r /= pow10;
    }
    if neg {
        r = -r;
    }
    Some(r)
}

/// Shorthand for `Rational::from((n, d))`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elem_sym_examples() {
        let c = rat(1, 3);
        assert_eq!(
            elem_sym(&[c.clone(), c.clone(), c]),
            vec![rat(1, 1), rat(-1, 1), rat(1, 3), rat(-1, 27)]
        );
        assert_eq!(
            elem_sym(&[rat(1, 1), rat(0, 1), rat(0, 1)]),
            vec![rat(1, 1), rat(-1, 1), rat(0, 1), rat(0, 1)]
        );
        // direct expansion: e2 = 1/8 + 1/16 + 1/8 = 5/16, e3 = 1/32
        assert_eq!(
            elem_sym(&[rat(1, 2), rat(1, 4), rat(1, 4)]),
            vec![rat(1, 1), rat(-1, 1), rat(5, 16), rat(-1, 32)]
        );
    }

    #[test]
    fn parse_decimal_literals() {
        assert_eq!(parse_rational("3/7"), Some(rat(3, 7)));
        assert_eq!(parse_rational("-0.125"), Some(rat(-1, 8)));
        assert_eq!(parse_rational("1.5e-2"), Some(rat(3, 200)));
        assert_eq!(parse_rational("~1e3"), None);
        assert_eq!(parse_rational("2.5E+1"), Some(rat(25, 1)));
        assert_eq!(parse_rational("abc"), None);
    }
}
