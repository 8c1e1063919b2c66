use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;

use crate::exactnum::Scalar;

/// A monomial as sorted `(variable, exponent)` pairs with positive
/// exponents; empty for the constant monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: usize, exp: u32) -> Self {
        if exp == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(v, exp)])
        }
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    pub fn exponent(&self, v: usize) -> u32 {
        self.0.iter().find(|(x, _)| *x == v).map_or(0, |(_, e)| *e)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out: BTreeMap<usize, u32> = self.0.iter().copied().collect();
        for &(v, e) in &other.0 {
            *out.entry(v).or_default() += e;
        }
        Monomial(out.into_iter().collect())
    }

    /// Drops variable `v`, returning its exponent.
    fn without(&self, v: usize) -> (Monomial, u32) {
        let e = self.exponent(v);
        (Monomial(self.0.iter().copied().filter(|(x, _)| *x != v).collect()), e)
    }

    fn map_vars(&self, f: &impl Fn(usize) -> usize) -> Monomial {
        let mut out: BTreeMap<usize, u32> = BTreeMap::new();
        for &(v, e) in &self.0 {
            *out.entry(f(v)).or_default() += e;
        }
        Monomial(out.into_iter().collect())
    }
}

/// Sparse multivariate polynomial with exact rational coefficients over
/// variables numbered from 0.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(v: usize) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: usize, exp: u32) -> Self {
        let mut p = MPoly::zero();
        p.add_term(Monomial::var(v, exp), Rational::from(1));
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn scale(&self, c: &Rational) -> MPoly {
        let mut out = MPoly::zero();
        for (m, k) in &self.terms {
            out.add_term(m.clone(), Rational::from(k * c));
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::constant(Rational::from(1));
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Variables that occur with nonzero coefficient.
    pub fn variables(&self) -> Vec<usize> {
        let mut vs: Vec<usize> = self.terms.keys().flat_map(|m| m.0.iter().map(|(v, _)| *v)).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.exponent(v) > 0)
    }

    /// Coefficient of `x_v^k`, as a polynomial in the other variables.
    pub fn coeff_of(&self, v: usize, k: u32) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e == k {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            if e > 0 {
                let m2 = rest.mul(&Monomial::var(v, e - 1));
                out.add_term(m2, Rational::from(c * e));
            }
        }
        out
    }

    /// Replaces `x_v` by `value`.
    pub fn substitute(&self, v: usize, value: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        let mut powers: Vec<MPoly> = vec![MPoly::constant(Rational::from(1))];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(v);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut term = MPoly::zero();
            term.add_term(rest, c.clone());
            out = &out + &(&term * &powers[e as usize]);
        }
        out
    }

    /// Renumbers variables.
    pub fn map_vars(&self, f: impl Fn(usize) -> usize) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.map_vars(&f), c.clone());
        }
        out
    }

    /// Evaluates at `values`, converting coefficients to the scalar kind of
    /// `like`.
    pub fn eval<T: Scalar>(&self, values: &[T], like: &T) -> T {
        let mut acc = T::zero_like(like);
        for (m, c) in &self.terms {
            let mut term = T::from_rational_like(c, like);
            for &(v, e) in &m.0 {
                for _ in 0..e {
                    term = term * values[v].clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Evaluates in double precision.
    pub fn eval_f64(&self, values: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64() * m.0.iter().map(|&(v, e)| values[v].powi(e as i32)).product::<f64>())
            .sum()
    }

    /// Multiplies by the least common denominator and divides by the
    /// content, so equal polynomials up to a rational factor compare equal
    /// (up to sign: the leading coefficient is made positive).
    pub fn primitive(&self) -> MPoly {
        use rug::Integer;
        let mut lcm = Integer::from(1);
        for c in self.terms.values() {
            lcm.lcm_mut(c.denom());
        }
        let mut gcd = Integer::new();
        for c in self.terms.values() {
            let n = Integer::from(c.numer() * &lcm) / c.denom();
            gcd.gcd_mut(&n);
        }
        if gcd == 0 {
            return self.clone();
        }
        let mut factor = Rational::from((lcm, gcd));
        if self.terms.values().next_back().is_some_and(|c| c.cmp0().is_lt()) {
            factor = -factor;
        }
        self.scale(&factor)
    }

    /// Display with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayMPoly { poly: self, names }
    }
}

struct DisplayMPoly<'a> {
    poly: &'a MPoly,
    names: &'a [String],
}

impl fmt::Display for DisplayMPoly<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.poly.terms.iter().enumerate().rev().enumerate().map(|(k, (_, t))| (k, t)) {
            let neg = c.cmp0().is_lt();
            let mag = Rational::from(c.abs_ref());
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .0
                .iter()
                .map(|&(v, e)| {
                    let name = self.names.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
                    if e == 1 {
                        name
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), Rational::from(-c));
        }
        out
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), Rational::from(ca * cb));
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        self.scale(&Rational::from(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    #[test]
    fn arithmetic_and_eval() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let p = &(&x * &y) + &MPoly::constant(rat(1, 2)); // xy + 1/2
        let q = &p * &p;
        assert_eq!(q.eval(&[rat(2, 1), rat(3, 1)], &rat(0, 1)), rat(169, 4));
        assert_eq!(q.derivative(0).eval(&[rat(2, 1), rat(3, 1)], &rat(0, 1)), rat(39, 1));
        assert_eq!((&q - &q), MPoly::zero());
        assert_eq!(q.degree_in(1), 2);
        assert_eq!(q.total_degree(), 4);
        assert_eq!(q.coeff_of(0, 2), MPoly::var_pow(1, 2));
        assert!((q.eval_f64(&[2.0, 3.0]) - 42.25).abs() < 1e-12);
    }

    #[test]
    fn substitution() {
        // x^2 + y with y := 1 - x
        let x = MPoly::var(0);
        let p = &x.pow(2) + &MPoly::var(1);
        let s = p.substitute(1, &(&MPoly::constant(rat(1, 1)) - &x));
        assert_eq!(s.eval(&[rat(3, 1), rat(0, 1)], &rat(0, 1)), rat(7, 1));
        assert!(!s.contains_var(1));
    }

    #[test]
    fn primitive_normalizes_scale() {
        let p = &MPoly::var(0).scale(&rat(3, 4)) - &MPoly::constant(rat(1, 2));
        let q = p.scale(&rat(-10, 3));
        assert_eq!(p.primitive(), q.primitive());
        let names = vec!["a".to_string()];
        assert_eq!(p.primitive().display(&names).to_string(), "3*a - 2");
    }
}
