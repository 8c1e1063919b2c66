//! The bundled catalog against the published values and its own
//! invariants.

use trisym::exactnum::Complex;
use trisym::moments::{certify_degree, CertifyTolerances};
use trisym::rulefile::RuleCollection;
use trisym::rulesdb::{catalog, lookup, parse_catalog, verify_all, CatalogEntry, Source, CATALOG_JSON};
use trisym::solver::{rule_distance, solve_analytic};
use trisym::triangle::{OrbitKind, QualityLabel, RuleType};

fn tables() -> Vec<&'static CatalogEntry> {
    catalog().iter().filter(|e| e.source == Source::AppendixB).collect()
}

#[test]
fn table_inventory() {
    let count = |d: u32, t: &str, q: QualityLabel| {
        let t: RuleType = t.parse().unwrap();
        tables().iter().filter(|e| e.rule.degree == d && e.rule.rtype == t && e.paper_quality == q).count()
    };
    assert_eq!(count(7, "0,1,2", QualityLabel::PI), 1);
    assert_eq!(count(10, "1,2,3", QualityLabel::PI), 1);
    assert_eq!(count(11, "1,3,3", QualityLabel::NI), 2);
    assert_eq!(count(11, "0,2,4", QualityLabel::PI), 4);
    assert_eq!(count(12, "0,5,3", QualityLabel::PI), 1);
    assert_eq!(count(12, "0,5,3", QualityLabel::NI), 1);
    assert_eq!(count(13, "1,4,4", QualityLabel::PI), 2);
    assert_eq!(count(13, "1,4,4", QualityLabel::NI), 3);
    assert_eq!(tables().len(), 15);
}

#[test]
fn values_are_verbatim() {
    let text = CATALOG_JSON;
    assert!(text.contains("\"1.253936074493031e-01\""));
    assert!(text.contains("\"5.134817203287849e-01\""));
    assert!(text.contains("\"2.432591398356075e-01\""));
    assert!(text.contains("\"-1.062024194350891e-01\""));
    let d12_ni = tables()
        .into_iter()
        .find(|e| e.rule.degree == 12 && e.paper_quality == QualityLabel::NI)
        .unwrap();
    let negative: Vec<f64> = d12_ni.rule.orbits.iter().map(|o| o.point_weight().re_f64()).filter(|w| *w < 0.0).collect();
    assert_eq!(negative.len(), 1);
    assert!((negative[0] + 1.062024194350891e-01).abs() < 1e-16);
}

#[test]
fn weights_sum_to_one() {
    for e in tables() {
        let s = e.rule.weight_sum().re_f64();
        assert!((s - 1.0).abs() <= 1e-13, "d={} {}: {s}", e.rule.degree, e.rule.rtype);
    }
    let d10 = tables().into_iter().find(|e| e.rule.degree == 10).unwrap();
    assert!((d10.rule.weight_sum().re_f64() - 1.0).abs() <= 1e-14);
}

#[test]
fn pi_entries_are_interior_and_positive() {
    for e in tables().into_iter().filter(|e| e.paper_quality == QualityLabel::PI) {
        for wp in e.rule.expand().unwrap() {
            assert!(wp.weight > 0.0);
            assert!(wp.point.l.iter().all(|c| *c > 0.0 && *c < 1.0));
        }
    }
}

#[test]
fn closed_form_and_table_agree_at_degree_seven() {
    let table = tables().into_iter().find(|e| e.rule.degree == 7).unwrap();
    let set = solve_analytic(7, "0,1,2".parse().unwrap(), 256).unwrap();
    let best = set.of_quality(QualityLabel::PI).map(|r| rule_distance(r, &table.rule)).fold(f64::INFINITY, f64::min);
    assert!(best <= 1e-10, "{best:e}");
}

#[test]
fn full_catalog_verifies() {
    let report = verify_all(1e-12).unwrap();
    assert!(report.passed(), "{:?}", report.failures().map(|e| &e.verification.problems).collect::<Vec<_>>());
    assert!(report.entries.iter().any(|e| e.source == Source::AppendixA));
}

#[test]
fn perturbed_weight_fails_at_its_degree() {
    let mut collection = RuleCollection::parse(CATALOG_JSON).unwrap();
    let rule = &mut collection.rules[1];
    let w: f64 = rule.orbits[0].point_weight.as_ref().unwrap().parse().unwrap();
    rule.orbits[0].point_weight = Some(format!("{:.15e}", w + 1e-6));
    let text = serde_json::to_string(&collection).unwrap();
    let entries = parse_catalog(&text, &CertifyTolerances::CATALOG).unwrap();
    assert!(!entries[1].verification.passed);
    assert!(entries.iter().enumerate().all(|(k, e)| k == 1 || e.verification.passed));
    let mut bumped = tables()[0].rule.clone();
    let w = bumped.orbits[0].weight_mut();
    *w = w.clone() + Complex::from_f64(1e-6, w.prec());
    assert_ne!(certify_degree(&bumped, &CertifyTolerances::CATALOG).unwrap().degree(), Some(7));
}

#[test]
fn lookup_preferences() {
    let e = lookup(7, &[QualityLabel::PI]).unwrap();
    assert_eq!(e.rule.npoints(), 15);
    assert_eq!(e.rule.rtype, "0,1,2".parse().unwrap());
    let e = lookup(7, &[QualityLabel::NI]).unwrap();
    assert_eq!(e.rule.npoints(), 13);

    let e = lookup(11, &[QualityLabel::PI]).unwrap();
    assert_eq!(e.rule.npoints(), 30);

    let e = lookup(11, &[QualityLabel::NI]).unwrap();
    assert_eq!(e.rule.npoints(), 28);
    let negative: Vec<_> = e.rule.orbits.iter().filter(|o| o.weight().re_f64() < 0.0).collect();
    assert_eq!(negative.len(), 1);
    assert_eq!(negative[0].kind(), OrbitKind::Type0);

    let e = lookup(13, &[QualityLabel::NI, QualityLabel::PI]).unwrap();
    assert_eq!(e.rule.quality, QualityLabel::NI);

    let err = lookup(14, &[QualityLabel::PI]).unwrap_err().to_string();
    assert!(err.contains("nearest"), "{err}");
}
