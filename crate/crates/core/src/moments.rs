//! Exact moments `I_{i,j}` of `p^i q^j` over the triangle, residuals of
//! candidate rules, and degree certification.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exactnum::Complex;
use crate::triangle::{CubatureRule, Orbit, Provenance};

/// Sparse polynomial in the areal coordinates: exponents `[a, b, c]` of
/// `L1^a L2^b L3^c` mapped to coefficients.
pub type ArealPoly = BTreeMap<[u32; 3], Rational>;

/// Highest degree [`certify_degree`] probes before giving up.
pub const MAX_CERTIFY_DEGREE: u32 = 60;

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `(1/A) ∫ L1^a L2^b L3^c dA = 2 a! b! c! / (a+b+c+2)!`.
pub fn monomial_integral(a: u32, b: u32, c: u32) -> Rational {
    let num = factorial(a) * factorial(b) * factorial(c) * 2u32;
    Rational::from((num, factorial(a + b + c + 2)))
}

fn poly_mul(x: &ArealPoly, y: &ArealPoly) -> ArealPoly {
    let mut out = ArealPoly::new();
    for (ex, cx) in x {
        for (ey, cy) in y {
            let e = [ex[0] + ey[0], ex[1] + ey[1], ex[2] + ey[2]];
            let term = Rational::from(cx * cy);
            let slot = out.entry(e).or_default();
            *slot += term;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn p_poly() -> ArealPoly {
    // 1 - 3 (L1 L2 + L2 L3 + L3 L1)
    let mut p = ArealPoly::new();
    p.insert([0, 0, 0], Rational::from(1));
    for e in [[1, 1, 0], [0, 1, 1], [1, 0, 1]] {
        p.insert(e, Rational::from(-3));
    }
    p
}

fn q_poly() -> ArealPoly {
    // 1 - (9/2)(L1 L2 + L2 L3 + L3 L1) + (27/2) L1 L2 L3
    let mut q = ArealPoly::new();
    q.insert([0, 0, 0], Rational::from(1));
    for e in [[1, 1, 0], [0, 1, 1], [1, 0, 1]] {
        q.insert(e, Rational::from((-9, 2)));
    }
    q.insert([1, 1, 1], Rational::from((27, 2)));
    q
}

type ExpansionCache = Mutex<HashMap<(u32, u32), Arc<ArealPoly>>>;

fn cache() -> &'static ExpansionCache {
    static CACHE: OnceLock<ExpansionCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `p^i q^j` expanded into areal monomials, memoized per `(i, j)`.
pub fn pq_expansion(i: u32, j: u32) -> Arc<ArealPoly> {
    if let Some(hit) = cache().lock().expect("expansion cache poisoned").get(&(i, j)) {
        return hit.clone();
    }
    let value = if i == 0 && j == 0 {
        let mut one = ArealPoly::new();
        one.insert([0, 0, 0], Rational::from(1));
        one
    } else if j > 0 {
        poly_mul(&pq_expansion(i, j - 1), &q_poly())
    } else {
        poly_mul(&pq_expansion(i - 1, j), &p_poly())
    };
    let value = Arc::new(value);
    cache()
        .lock()
        .expect("expansion cache poisoned")
        .insert((i, j), value.clone());
    value
}

/// Integral of an areal polynomial over the normalized triangle.
pub fn integrate(poly: &ArealPoly) -> Rational {
    poly.iter()
        .map(|(e, c)| c * monomial_integral(e[0], e[1], e[2]))
        .sum()
}

/// Exact `I_{i,j} = (1/A) ∫ p^i q^j dA`.
pub fn moment(i: u32, j: u32) -> Rational {
    static MOMENTS: OnceLock<Mutex<HashMap<(u32, u32), Rational>>> = OnceLock::new();
    let memo = MOMENTS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = memo.lock().expect("moment cache poisoned").get(&(i, j)) {
        return hit.clone();
    }
    let value = integrate(&pq_expansion(i, j));
    memo.lock().expect("moment cache poisoned").insert((i, j), value.clone());
    value
}

/// All `(i, j)` with `2i + 3j <= d`, by weighted degree then `j`.
pub fn pq_indices(d: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    for k in 0..=d {
        for j in 0..=k / 3 {
            if (k - 3 * j) % 2 == 0 {
                out.push(((k - 3 * j) / 2, j));
            }
        }
    }
    out
}

/// Every `I_{i,j}` with `2i + 3j <= d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTable {
    pub degree: u32,
    pub entries: BTreeMap<(u32, u32), Rational>,
}

impl MomentTable {
    pub fn new(degree: u32) -> Self {
        let entries = pq_indices(degree).into_iter().map(|(i, j)| ((i, j), moment(i, j))).collect();
        MomentTable { degree, entries }
    }

    pub fn get(&self, i: u32, j: u32) -> Option<&Rational> {
        self.entries.get(&(i, j))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Largest moment-equation error and where it occurs.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualDetail {
    pub max: f64,
    /// `(i, j)` for the `p,q` basis.
    pub worst: (u32, u32),
}

/// `|sum_o W_o p_o^i q_o^j - I_{i,j}|` for every `(i, j)` with
/// `2i + 3j <= d`; works on complex orbits.
pub fn pq_errors(orbits: &[Orbit], d: u32) -> Vec<((u32, u32), f64)> {
    let prec = orbits.first().map_or(crate::exactnum::DEFAULT_PRECISION, Orbit::prec);
    let pqs: Vec<(Complex, Complex, Complex)> = orbits
        .iter()
        .map(|o| {
            let (p, q) = o.pq();
            (p, q, o.weight().clone())
        })
        .collect();
    pq_indices(d)
        .into_iter()
        .map(|(i, j)| {
            let mut acc = Complex::zero(prec);
            for (p, q, w) in &pqs {
                acc = acc + w.clone() * p.powu(i) * q.powu(j);
            }
            let err = acc - Complex::from_rational(&moment(i, j), prec);
            ((i, j), err.abs_f64())
        })
        .collect()
}

fn require_real(rule: &CubatureRule) -> Result<()> {
    for o in &rule.orbits {
        if !o.is_real()? {
            return Err(Error::ComplexOrbit);
        }
    }
    Ok(())
}

/// Largest error of the moment equations on the `p^i q^j` basis,
/// `2i + 3j <= d`.
pub fn residual(rule: &CubatureRule, d: u32) -> Result<f64> {
    Ok(residual_detail(rule, d)?.max)
}

pub fn residual_detail(rule: &CubatureRule, d: u32) -> Result<ResidualDetail> {
    require_real(rule)?;
    Ok(worst(pq_errors(&rule.orbits, d)))
}

fn worst(errors: Vec<((u32, u32), f64)>) -> ResidualDetail {
    errors
        .into_iter()
        .fold(ResidualDetail { max: 0.0, worst: (0, 0) }, |acc, (ij, e)| {
            if e > acc.max || e.is_nan() {
                ResidualDetail { max: e, worst: ij }
            } else {
                acc
            }
        })
}

/// Largest error over the full monomial basis `L1^a L2^b L3^c`,
/// `a + b + c <= d`, and the worst exponent triple.
pub fn monomial_residual(rule: &CubatureRule, d: u32) -> Result<(f64, [u32; 3])> {
    let points = rule.expand()?;
    let prec = rule.prec();
    let mut best = (0.0f64, [0, 0, 0]);
    // powers[k][m] = L_k^m for every point
    let powers: Vec<[Vec<Float>; 3]> = points
        .iter()
        .map(|wp| {
            wp.point.l.clone().map(|x| {
                let mut v = Vec::with_capacity(d as usize + 1);
                let mut acc = Float::with_val(prec, 1);
                for _ in 0..=d {
                    v.push(acc.clone());
                    acc *= &x;
                }
                v
            })
        })
        .collect();
    for total in 0..=d {
        for a in 0..=total {
            for b in 0..=total - a {
                let c = total - a - b;
                let mut acc = Float::new(prec);
                for (wp, pw) in points.iter().zip(&powers) {
                    let term = Float::with_val(prec, &pw[0][a as usize] * &pw[1][b as usize]) * &pw[2][c as usize];
                    acc += term * &wp.weight;
                }
                acc -= monomial_integral(a, b, c);
                let e = acc.abs().to_f64();
                if e > best.0 {
                    best = (e, [a, b, c]);
                }
            }
        }
    }
    Ok(best)
}

/// Thresholds separating "exact" from "not exact" residuals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CertifyTolerances {
    /// Residuals at or below this count as exact.
    pub exact: f64,
    /// The first inexact degree must exceed this.
    pub fail: f64,
}

impl CertifyTolerances {
    /// 16-digit tabulated data evaluated at double-like accuracy.
    pub const CATALOG: CertifyTolerances = CertifyTolerances { exact: 1e-12, fail: 1e-6 };
    /// Rules computed at 256-bit working precision.
    pub const HIGH_PRECISION: CertifyTolerances = CertifyTolerances { exact: 1e-30, fail: 1e-20 };

    pub fn for_rule(rule: &CubatureRule) -> Self {
        match rule.provenance {
            Provenance::Catalog => Self::CATALOG,
            Provenance::Analytic | Provenance::Numeric => Self::HIGH_PRECISION,
        }
    }
}

/// Outcome of [`certify_degree`].
#[derive(Clone, Debug, PartialEq)]
pub enum Certification {
    Certified {
        degree: u32,
        /// `p,q`-basis residual at `degree`.
        residual: f64,
        /// `p,q`-basis residual at `degree + 1` and its worst `(i, j)`.
        next_residual: f64,
        next_worst: (u32, u32),
        /// Monomial-basis residual at `degree` and at `degree + 1`.
        monomial_residual: f64,
        monomial_next_residual: f64,
    },
    Uncertified {
        reason: String,
    },
}

impl Certification {
    pub fn degree(&self) -> Option<u32> {
        match self {
            Certification::Certified { degree, .. } => Some(*degree),
            Certification::Uncertified { .. } => None,
        }
    }
}

/// Largest degree `d` for which the rule is exact.
///
/// The `p,q` residual must be at most `tol.exact` at `d` and above
/// `tol.fail` at `d + 1`; a value in between is reported as uncertified.
/// The monomial basis must agree: exact (within `10 tol.exact`) at `d` and
/// not exact at `d + 1`.
pub fn certify_degree(rule: &CubatureRule, tol: &CertifyTolerances) -> Result<Certification> {
    require_real(rule)?;
    let errors = pq_errors(&rule.orbits, MAX_CERTIFY_DEGREE.min(certify_probe_limit(rule)));
    let residual_at = |k: u32| {
        worst(
            errors
                .iter()
                .filter(|((i, j), _)| 2 * i + 3 * j <= k)
                .cloned()
                .collect(),
        )
    };
    let limit = MAX_CERTIFY_DEGREE.min(certify_probe_limit(rule));
    let Some(first_bad) = (1..=limit).find(|&k| residual_at(k).max > tol.exact) else {
        return Ok(Certification::Uncertified {
            reason: format!("exact up to the probe limit {limit}; positive-dimensional or degenerate rule"),
        });
    };
    if first_bad == 1 {
        return Ok(Certification::Uncertified {
            reason: format!("weights do not sum to 1 (residual {:e})", residual_at(1).max),
        });
    }
    let degree = first_bad - 1;
    let at = residual_at(degree);
    let next = residual_at(first_bad);
    if next.max <= tol.fail {
        return Ok(Certification::Uncertified {
            reason: format!(
                "residual {:e} at degree {first_bad} lies between the exact ({:e}) and failing ({:e}) thresholds",
                next.max, tol.exact, tol.fail
            ),
        });
    }
    let (mono_at, _) = monomial_residual(rule, degree)?;
    let (mono_next, _) = monomial_residual(rule, first_bad)?;
    if mono_at > 10.0 * tol.exact || mono_next <= 10.0 * tol.exact {
        return Ok(Certification::Uncertified {
            reason: format!(
                "monomial basis disagrees: residual {mono_at:e} at degree {degree}, {mono_next:e} at {first_bad}"
            ),
        });
    }
    Ok(Certification::Certified {
        degree,
        residual: at.max,
        next_residual: next.max,
        next_worst: next.worst,
        monomial_residual: mono_at,
        monomial_next_residual: mono_next,
    })
}

/// A rule with `n` free parameters cannot be exact beyond roughly twice
/// that many moment equations; probing further only costs time.
fn certify_probe_limit(rule: &CubatureRule) -> u32 {
    (2 * rule.rtype.nvars() + 4).max(rule.degree + 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::triangle::{CubatureRule, Orbit};

    #[test]
    fn monomial_integral_examples() {
        assert_eq!(monomial_integral(0, 0, 0), rat(1, 1));
        assert_eq!(monomial_integral(1, 0, 0), rat(1, 3));
        assert_eq!(monomial_integral(1, 1, 0), rat(1, 12));
        assert_eq!(monomial_integral(1, 1, 1), rat(1, 60));
    }

    #[test]
    fn printed_moments() {
        let expected = [
            ((0, 0), rat(1, 1)),
            ((1, 0), rat(1, 4)),
            ((0, 1), rat(1, 10)),
            ((2, 0), rat(1, 10)),
            ((1, 1), rat(2, 35)),
            ((3, 0), rat(29, 560)),
            ((0, 2), rat(7, 160)),
            ((2, 1), rat(1, 28)),
        ];
        for ((i, j), v) in expected {
            assert_eq!(moment(i, j), v, "I_{i},{j}");
        }
    }

    #[test]
    fn table_size_matches_equation_count() {
        for d in 1..=30u32 {
            let n = 1 + (d * d + 6 * d) / 12;
            assert_eq!(MomentTable::new(d).len() as u32, n, "d = {d}");
        }
        let t = MomentTable::new(6);
        assert_eq!(t.get(0, 0), Some(&rat(1, 1)));
        assert_eq!(t.get(0, 2), Some(&rat(7, 160)));
        assert_eq!(t.get(2, 1), None);
    }

    fn centroid() -> CubatureRule {
        CubatureRule::new(1, vec![Orbit::Type0 { w0: Complex::from_f64(1.0, 256) }], Provenance::Analytic).unwrap()
    }

    #[test]
    fn centroid_residuals() {
        let rule = centroid();
        assert_eq!(residual(&rule, 1).unwrap(), 0.0);
        assert!((residual(&rule, 2).unwrap() - 0.25).abs() < 1e-15);
        let cert = certify_degree(&rule, &CertifyTolerances::HIGH_PRECISION).unwrap();
        assert_eq!(cert.degree(), Some(1));
    }

    #[test]
    fn complex_rule_rejected() {
        let u = Complex::from_parts_f64(0.2, 0.3, 256);
        let rule = CubatureRule::new(2, vec![Orbit::type1(u, Complex::from_f64(1.0, 256)).unwrap()], Provenance::Analytic).unwrap();
        assert!(matches!(residual(&rule, 2), Err(Error::ComplexOrbit)));
    }

    #[test]
    fn pq_indices_cover_lattice() {
        assert_eq!(pq_indices(6), vec![(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (0, 2)]);
    }
}
