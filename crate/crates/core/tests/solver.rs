//! Numeric and closed-form solving on the small rule types.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trisym::exactnum::{rat, Complex};
use trisym::moments::{certify_degree, residual, CertifyTolerances};
use trisym::solver::{analytic_types, canonicalize, dedupe, solve_analytic, solve_numeric, Completeness, Solution, SolverConfig};
use trisym::triangle::{CubatureRule, Orbit, Provenance, QualityLabel};
use trisym::Error;

#[test]
fn degree_five_numeric() {
    let set = solve_numeric(5, "1,2,0".parse().unwrap(), &SolverConfig::default()).unwrap();
    assert_eq!(set.len(), 1);
    assert_eq!(set.completeness, Completeness::HeuristicNumeric);
    let rule = &set.solutions[0].rule;
    assert_eq!(rule.quality, QualityLabel::PI);
    let w0 = rule.orbits[0].weight();
    assert!(w0.dist_f64(&Complex::from_rational(&rat(9, 40), 256)) < 1e-28);
}

#[test]
fn degree_seven_real_search() {
    let set = solve_numeric(7, "1,2,1".parse().unwrap(), &SolverConfig::default()).unwrap();
    assert_eq!(set.to_string(), "2 solutions: 1 NI, 1 PO");
}

#[test]
fn same_seed_same_answer() {
    let cfg = SolverConfig {
        starts: 300,
        seed: 42,
        ..SolverConfig::default()
    };
    let t = "0,2,1".parse().unwrap();
    assert_eq!(solve_numeric(6, t, &cfg).unwrap(), solve_numeric(6, t, &cfg).unwrap());
}

#[test]
fn inconsistent_types_refused() {
    let err = solve_numeric(7, "1,1,0".parse().unwrap(), &SolverConfig::default()).unwrap_err();
    assert!(matches!(err, Error::InconsistentType { .. }));
}

#[test]
fn every_closed_form_rule_certifies() {
    for (d, t) in analytic_types() {
        let set = solve_analytic(d, t, 256).unwrap();
        assert_eq!(set.completeness, Completeness::ExhaustiveAnalytic);
        for rule in set.rules().filter(|r| r.is_real()) {
            assert!(residual(rule, d).unwrap() <= 1e-28);
            assert_eq!(certify_degree(rule, &CertifyTolerances::HIGH_PRECISION).unwrap().degree(), Some(d));
        }
    }
}

#[test]
fn unsupported_closed_form() {
    let err = solve_analytic(10, "1,2,3".parse().unwrap(), 256).unwrap_err();
    assert!(err.to_string().contains("numeric"), "{err}");
}

/// A rule with seven median and four general orbits; its 7! 4! orbit
/// orderings share one canonical form.
fn big_rule(rng: &mut ChaCha8Rng) -> CubatureRule {
    let c = |x: f64| Complex::from_f64(x, 128);
    let mut orbits = vec![Orbit::Type0 { w0: c(0.1) }];
    for _ in 0..7 {
        orbits.push(Orbit::type1(c(rng.random_range(-0.5..1.0)), c(0.05)).unwrap());
    }
    for _ in 0..4 {
        let p: f64 = rng.random_range(0.1..0.9);
        let q = rng.random_range(-0.9..0.9) * p.powf(1.5);
        orbits.push(Orbit::type2(c(p), c(q), c(0.1)).unwrap());
    }
    CubatureRule::new(15, orbits, Provenance::Numeric).unwrap()
}

#[test]
fn canonical_form_of_many_orderings() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let rule = big_rule(&mut rng);
    let canon = canonicalize(&rule);
    let mut seen = Vec::new();
    for _ in 0..200 {
        let mut r = rule.clone();
        r.orbits.shuffle(&mut rng);
        let c = canonicalize(&r);
        assert_eq!(c, canon);
        seen.push(Solution { rule: r, residual: 0.0 });
    }
    assert_eq!(dedupe(seen, 1e-20).len(), 1);
}
