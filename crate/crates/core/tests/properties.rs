//! Property tests for the invariants of each module.

use proptest::prelude::*;

use trisym::exactnum::{elem_sym, rat, roots_from_elem, Complex};
use trisym::rulefile::RuleFile;
use trisym::rulesdb::catalog;
use trisym::solver::canonicalize;
use trisym::system::{check_consistency, consistent_types, minimal_type, num_equations};
use trisym::triangle::{areal_from_pq, areal_from_u, pq_from_areal, ArealPoint, RuleType};

proptest! {
    #![proptest_config(ProptestConfig { cases: 300, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn pq_is_symmetric(a in 1i64..500, b in 1i64..500, c in 1i64..500) {
        let s = a + b + c;
        let pt = ArealPoint::new(rat(a, s), rat(b, s), rat(c, s));
        let base = pq_from_areal(&pt);
        for perm in pt.permutations() {
            prop_assert_eq!(pq_from_areal(&perm), base.clone());
        }
    }

    #[test]
    fn pq_round_trip(a in 0.01f64..0.98, t in 0.01f64..0.99) {
        let b = (1.0 - a) * t;
        let prec = 256;
        let (a, b) = (Complex::from_f64(a, prec), Complex::from_f64(b, prec));
        let one = Complex::from_f64(1.0, prec);
        let l = [a.clone(), b.clone(), one - a - b];
        let (p, q) = pq_from_areal(&ArealPoint { l: l.clone() });
        let back = areal_from_pq(&p, &q, prec).unwrap();
        for x in &l {
            let err = back.l.iter().map(|y| y.dist_f64(x)).fold(f64::INFINITY, f64::min);
            prop_assert!(err < 1e-60, "{}", err);
        }
    }

    #[test]
    fn median_points_have_p_u2_q_u3(n in -49i64..100) {
        let u = rat(n, 100);
        let (p, q) = pq_from_areal(&areal_from_u(&u));
        prop_assert_eq!(p, u.clone() * u.clone());
        prop_assert_eq!(q, u.clone() * u.clone() * u);
    }

    #[test]
    fn roots_round_trip(xs in prop::collection::vec(-2.0f64..2.0, 1..7)) {
        let prec = 256;
        let zs: Vec<Complex> = xs.iter().map(|&x| Complex::from_f64(x, prec)).collect();
        let sep = zs.iter().enumerate()
            .flat_map(|(k, a)| zs[k + 1..].iter().map(move |b| a.dist_f64(b)))
            .fold(f64::INFINITY, f64::min);
        prop_assume!(sep > 1e-3);
        let back = roots_from_elem(&elem_sym(&zs), prec).unwrap();
        for z in &zs {
            let err = back.iter().map(|b| b.dist_f64(z)).fold(f64::INFINITY, f64::min);
            prop_assert!(err < 1e-30, "{}", err);
        }
    }

    #[test]
    fn consistent_types_pass_the_check(d in 1u32..25) {
        let min = minimal_type(d).unwrap();
        prop_assert!(check_consistency(d, min).is_ok());
        let n_e = num_equations(d).unwrap();
        for t in consistent_types(d, min.npoints() + 6).unwrap() {
            prop_assert!(check_consistency(d, t).is_ok());
            prop_assert!(t.nvars() >= n_e);
            prop_assert!(t.npoints() >= min.npoints());
        }
    }

    #[test]
    fn canonical_form_ignores_orbit_order(k in 0usize..34, seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let entries = catalog();
        let rule = &entries[k % entries.len()].rule;
        let mut shuffled = rule.clone();
        shuffled.orbits.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let c = canonicalize(&shuffled);
        prop_assert_eq!(&c, &canonicalize(rule));
        prop_assert_eq!(canonicalize(&c), c);
    }
}

#[test]
fn rule_files_round_trip() {
    for e in catalog() {
        let file = RuleFile::from_rule(&e.rule, true).unwrap();
        let back = RuleFile::parse(&file.to_json()).unwrap();
        assert_eq!(back, file);
        let rule = back.to_rule().unwrap();
        assert_eq!(RuleFile::from_rule(&rule, true).unwrap(), file);
    }
}

#[test]
fn type_strings() {
    let t: RuleType = "1,7,4".parse().unwrap();
    assert_eq!(t.npoints(), 46);
    assert!("1,7".parse::<RuleType>().is_err());
}
