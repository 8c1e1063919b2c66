//! Finding rules: a multistart Newton search over the moment system and
//! closed-form evaluation for the low-degree types with published
//! eliminants.
//!
//! Both paths report their results as a [`SolutionSet`] of canonical
//! rules, so two runs can be compared orbit by orbit.

mod analytic;
mod numeric;

use std::cmp::Ordering;
use std::fmt;

pub use analytic::{analytic_types, solve_analytic};
pub use numeric::solve_numeric;

use crate::exactnum::Complex;
use crate::triangle::{CubatureRule, Orbit, QualityLabel, RuleType};

/// Settings for [`solve_numeric`].
#[derive(Clone, Debug, PartialEq)]
pub struct SolverConfig {
    /// Random starting points.
    pub starts: usize,
    /// Newton iterations per start.
    pub max_iterations: usize,
    /// Required residual after high-precision refinement.
    pub tol: f64,
    /// Rules closer than this in every parameter are the same rule.
    pub dedup_tol: f64,
    pub seed: u64,
    /// Working precision in bits for refinement.
    pub precision: u32,
    /// Search types that fail the consistency conditions.
    pub force: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            starts: 2000,
            max_iterations: 200,
            tol: 1e-28,
            dedup_tol: 1e-20,
            seed: 0,
            precision: crate::exactnum::default_precision(),
            force: false,
        }
    }
}

/// How much a solution set claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    /// Every root of a closed-form eliminant: all solutions, complex ones
    /// included.
    ExhaustiveAnalytic,
    /// Whatever the random starts converged to.
    HeuristicNumeric,
}

impl fmt::Display for Completeness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Completeness::ExhaustiveAnalytic => "exhaustive-analytic",
            Completeness::HeuristicNumeric => "heuristic-numeric",
        })
    }
}

/// A found rule with the largest error of its moment equations.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub rule: CubatureRule,
    pub residual: f64,
}

/// Search statistics for the numeric path.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub starts: usize,
    pub converged: usize,
    /// Converged points whose Jacobian is rank deficient.
    pub positive_dimensional: usize,
    /// Converged points that failed refinement or produced a degenerate orbit.
    pub rejected: usize,
    /// Smallest residual norm reached by any start.
    pub best_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSet {
    pub degree: u32,
    pub rtype: RuleType,
    pub solutions: Vec<Solution>,
    pub completeness: Completeness,
    pub diagnostics: Option<Diagnostics>,
}

impl SolutionSet {
    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    pub fn rules(&self) -> impl Iterator<Item = &CubatureRule> {
        self.solutions.iter().map(|s| &s.rule)
    }

    pub fn count(&self, q: QualityLabel) -> usize {
        self.rules().filter(|r| r.quality == q).count()
    }

    /// Number of solutions per quality, in the order of [`QualityLabel::ALL`].
    pub fn counts(&self) -> Vec<(QualityLabel, usize)> {
        QualityLabel::ALL
            .iter()
            .map(|&q| (q, self.count(q)))
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    pub fn of_quality(&self, q: QualityLabel) -> impl Iterator<Item = &CubatureRule> {
        self.rules().filter(move |r| r.quality == q)
    }
}

/// `"6 solutions: 2 PI, 2 PO, 2 CC"`.
impl fmt::Display for SolutionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.len();
        write!(f, "{n} solution{}", if n == 1 { "" } else { "s" })?;
        let parts: Vec<String> = self.counts().iter().map(|(q, k)| format!("{k} {q}")).collect();
        if !parts.is_empty() {
            write!(f, ": {}", parts.join(", "))?;
        }
        Ok(())
    }
}

fn cmp_params(a: &[&Complex], b: &[&Complex]) -> Ordering {
    let re = a.iter().zip(b).map(|(x, y)| x.re.partial_cmp(&y.re).unwrap_or(Ordering::Equal));
    let im = a.iter().zip(b).map(|(x, y)| x.im.partial_cmp(&y.im).unwrap_or(Ordering::Equal));
    re.chain(im).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Orders the orbits: the centroid, median orbits by `u`, general orbits
/// by `(p, q)`, comparing real parts before imaginary parts.
pub fn canonicalize(rule: &CubatureRule) -> CubatureRule {
    let mut out = rule.clone();
    out.orbits.sort_by(|a, b| {
        a.kind().cmp(&b.kind()).then_with(|| match (a, b) {
            (Orbit::Type1 { u: ua, .. }, Orbit::Type1 { u: ub, .. }) => ua.lex_cmp(ub),
            (Orbit::Type2 { p: pa, q: qa, .. }, Orbit::Type2 { p: pb, q: qb, .. }) => {
                cmp_params(&[pa, qa], &[pb, qb])
            }
            _ => Ordering::Equal,
        })
    });
    out
}

/// Largest parameter difference between two rules of the same type, after
/// canonicalization; infinite for different types.
pub fn rule_distance(a: &CubatureRule, b: &CubatureRule) -> f64 {
    if a.rtype != b.rtype {
        return f64::INFINITY;
    }
    let (a, b) = (canonicalize(a), canonicalize(b));
    a.orbits
        .iter()
        .zip(&b.orbits)
        .flat_map(|(x, y)| x.params().into_iter().zip(y.params()).map(|(s, t)| s.dist_f64(t)))
        .fold(0.0, f64::max)
}

/// Merges solutions that agree to `tol` in every parameter, keeping the
/// one with the smaller residual. Output order is canonical.
pub fn dedupe(solutions: Vec<Solution>, tol: f64) -> Vec<Solution> {
    let mut kept: Vec<Solution> = Vec::new();
    for s in solutions {
        let s = Solution {
            rule: canonicalize(&s.rule),
            residual: s.residual,
        };
        match kept.iter_mut().find(|k| rule_distance(&k.rule, &s.rule) <= tol) {
            Some(k) if s.residual < k.residual => *k = s,
            Some(_) => {}
            None => kept.push(s),
        }
    }
    kept.sort_by(|a, b| solution_order(&a.rule, &b.rule));
    kept
}

/// Quality order of [`QualityLabel::ALL`], then the parameters.
fn solution_order(a: &CubatureRule, b: &CubatureRule) -> Ordering {
    let rank = |q: QualityLabel| QualityLabel::ALL.iter().position(|&x| x == q);
    rank(a.quality).cmp(&rank(b.quality)).then_with(|| {
        let pa: Vec<&Complex> = a.orbits.iter().flat_map(Orbit::params).collect();
        let pb: Vec<&Complex> = b.orbits.iter().flat_map(Orbit::params).collect();
        cmp_params(&pa, &pb)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::triangle::Provenance;

    fn c(n: i64, d: i64) -> Complex {
        Complex::from_rational(&rat(n, d), 128)
    }

    fn two_median_rule(swap: bool) -> CubatureRule {
        let mut orbits = vec![
            Orbit::type1(c(1, 2), c(1, 3)).unwrap(),
            Orbit::type1(c(-1, 5), c(2, 3)).unwrap(),
        ];
        if swap {
            orbits.swap(0, 1);
        }
        CubatureRule::new(2, orbits, Provenance::Numeric).unwrap()
    }

    #[test]
    fn canonical_form_ignores_orbit_order() {
        let a = canonicalize(&two_median_rule(false));
        let b = canonicalize(&two_median_rule(true));
        assert_eq!(a, b);
        assert_eq!(canonicalize(&a), a);
        let Orbit::Type1 { u, .. } = &a.orbits[0] else { panic!() };
        assert_eq!(u.re_f64(), -0.2);
    }

    #[test]
    fn duplicates_collapse() {
        let s = |r: f64| Solution {
            rule: two_median_rule(r > 0.5),
            residual: r,
        };
        let out = dedupe(vec![s(1.0), s(0.25)], 1e-20);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].residual, 0.25);
    }
}
