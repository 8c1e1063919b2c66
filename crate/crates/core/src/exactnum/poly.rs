use std::fmt;

use rug::{Float, Rational};

use super::Complex;

/// Univariate polynomial with exact rational coefficients, lowest power first.
///
/// The coefficient list never ends in a zero; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    /// Builds from `(numerator, denominator)` pairs, lowest power first.
    pub fn from_fracs(fracs: &[(i64, i64)]) -> Self {
        Self::new(fracs.iter().map(|&nd| Rational::from(nd)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let mut acc = Float::new(x.prec());
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, x: &Complex) -> Complex {
        let prec = x.prec();
        let mut acc = Complex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + Complex::from_rational(c, prec);
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from(k as u64) )
                .collect(),
        )
    }

    /// Same roots, leading coefficient 1.
    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => self.clone(),
            Some(lead) => {
                let lead = lead.clone();
                UniPoly::new(self.coeffs.iter().map(|c| Rational::from(c / &lead)).collect())
            }
        }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let sign = if c.cmp0().is_lt() { "-" } else { "+" };
            let mag = Rational::from(c.abs_ref());
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                1 if mag == 1 => write!(f, "x")?,
                1 => write!(f, "{mag}*x")?,
                _ if mag == 1 => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}*x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_and_evaluates() {
        let p = UniPoly::from_fracs(&[(-2, 1), (-4, 1), (3, 1), (0, 1)]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&Rational::from(2)), Rational::from(2));
        assert_eq!(p.derivative(), UniPoly::from_fracs(&[(-4, 1), (6, 1)]));
        assert_eq!(p.to_string(), "3*x^2 - 4*x - 2");
        assert_eq!(p.monic().leading(), Some(&Rational::from(1)));
        assert!(UniPoly::new(vec![Rational::new()]).is_zero());
    }

    #[test]
    fn float_and_complex_eval_agree() {
        let p = UniPoly::from_fracs(&[(1, 3), (-1, 2), (5, 7)]);
        let x = Float::with_val(200, 0.75);
        let z = Complex::from_real(x.clone());
        let exact = p.eval(&Rational::from((3, 4)));
        let fx = p.eval_float(&x);
        let fz = p.eval_complex(&z);
        assert!((fx.clone() - Float::with_val(200, &exact)).abs() < 1e-55);
        assert!(fz.dist_f64(&Complex::from_real(fx)) < 1e-55);
    }
}
