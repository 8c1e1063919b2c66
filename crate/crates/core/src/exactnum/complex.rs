use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::{Float, Rational};

/// A complex number with MPFR real and imaginary parts.
///
/// Both parts always share the same precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Complex {
    pub re: Float,
    pub im: Float,
}

impl Complex {
    pub fn zero(prec: u32) -> Self {
        Complex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(1.0, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        Complex {
            re: Float::with_val(prec, x),
            im: Float::new(prec),
        }
    }

    pub fn from_parts_f64(re: f64, im: f64, prec: u32) -> Self {
        Complex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Complex {
            re: Float::with_val(prec, r),
            im: Float::new(prec),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let im = Float::new(re.prec());
        Complex { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `|im| <= eps`.
    pub fn is_real(&self, eps: f64) -> bool {
        self.im.clone().abs() <= eps
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn re_f64(&self) -> f64 {
        self.re.to_f64()
    }

    pub fn im_f64(&self) -> f64 {
        self.im.to_f64()
    }

    pub fn conj(&self) -> Self {
        Complex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec()) / self.clone()
    }

    pub fn powu(&self, n: u32) -> Self {
        let mut acc = Self::one(self.prec());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    pub fn scale(&self, s: &Float) -> Self {
        Complex {
            re: Float::with_val(self.prec(), &self.re * s),
            im: Float::with_val(self.prec(), &self.im * s),
        }
    }

    /// Distance `|self - other|` as an `f64`.
    pub fn dist_f64(&self, other: &Complex) -> f64 {
        (self.clone() - other.clone()).abs_f64()
    }

    /// Total order by real part, then imaginary part.
    pub fn lex_cmp(&self, other: &Complex) -> Ordering {
        self.re
            .partial_cmp(&other.re)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal))
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{:.20e}", self.re.to_f64())
        } else {
            write!(f, "{:.20e}{:+.20e}i", self.re.to_f64(), self.im.to_f64())
        }
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        Complex {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        Complex {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        let prec = self.prec();
        let re = Float::with_val(prec, &self.re * &rhs.re) - Float::with_val(prec, &self.im * &rhs.im);
        let im = Float::with_val(prec, &self.re * &rhs.im) + Float::with_val(prec, &self.im * &rhs.re);
        Complex { re, im }
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        let prec = self.prec();
        let den = Float::with_val(prec, &rhs.re * &rhs.re) + Float::with_val(prec, &rhs.im * &rhs.im);
        let re = Float::with_val(prec, &self.re * &rhs.re) + Float::with_val(prec, &self.im * &rhs.im);
        let im = Float::with_val(prec, &self.im * &rhs.re) - Float::with_val(prec, &self.re * &rhs.im);
        Complex {
            re: re / &den,
            im: im / &den,
        }
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        self.clone() + rhs.clone()
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        self.clone() - rhs.clone()
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        self.clone() * rhs.clone()
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &Complex) -> Complex {
        self.clone() / rhs.clone()
    }
}
