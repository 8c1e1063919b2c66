//! The bundled catalog: the published numeric tables of degrees 7 to 13,
//! plus every real rule of the closed-form types, each certified on load.

use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exactnum::default_precision;
use crate::moments::{certify_degree, Certification, CertifyTolerances};
use crate::rulefile::RuleCollection;
use crate::solver::{analytic_types, solve_analytic};
use crate::triangle::{classify, CubatureRule, OrbitKind, QualityLabel, QualityTolerances};

/// The bundled numeric tables.
pub const CATALOG_JSON: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    /// Evaluated from a closed form.
    AppendixA,
    /// Transcribed from a printed table.
    AppendixB,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::AppendixA => "appendix-A",
            Source::AppendixB => "appendix-B",
        })
    }
}

/// Result of checking one rule against its stated degree and quality.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub certification: Certification,
    /// `p,q`-basis residual at the stated degree.
    pub residual: f64,
    /// Residual at the stated degree plus one, with the worst `(i, j)`.
    pub next_residual: f64,
    pub next_worst: (u32, u32),
    pub quality: QualityLabel,
    pub passed: bool,
    /// Why the entry failed; empty when it passed.
    pub problems: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub rule: CubatureRule,
    pub source: Source,
    /// Quality as published.
    pub paper_quality: QualityLabel,
    pub verification: Verification,
}

impl CatalogEntry {
    pub fn new(rule: CubatureRule, source: Source, paper_quality: QualityLabel, tol: &CertifyTolerances) -> Result<Self> {
        let verification = verify_rule(&rule, rule.degree, paper_quality, tol)?;
        Ok(CatalogEntry {
            rule,
            source,
            paper_quality,
            verification,
        })
    }

    /// Sum of the magnitudes of the negative point weights.
    fn negative_mass(&self) -> f64 {
        self.rule
            .orbits
            .iter()
            .map(|o| o.weight().re_f64())
            .filter(|w| *w < 0.0)
            .map(f64::abs)
            .sum()
    }

    fn smallest_point_weight(&self) -> f64 {
        self.rule
            .orbits
            .iter()
            .map(|o| o.point_weight().re_f64())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Certifies `rule` against `degree` and recomputes its quality.
pub fn verify_rule(rule: &CubatureRule, degree: u32, quality: QualityLabel, tol: &CertifyTolerances) -> Result<Verification> {
    let certification = certify_degree(rule, tol)?;
    let recomputed = classify(rule, &QualityTolerances::default())?;
    let at = crate::moments::residual_detail(rule, degree)?;
    let next = crate::moments::residual_detail(rule, degree + 1)?;
    let mut problems = Vec::new();
    match certification.degree() {
        Some(d) if d == degree => {}
        Some(d) if d > degree => problems.push(format!("exact to degree {d}, more than the stated {degree}")),
        Some(d) => {
            let fail = crate::moments::residual_detail(rule, d + 1)?;
            problems.push(format!(
                "exact only to degree {d}, not {degree}: moment ({}, {}) is off by {:e} at degree {}",
                fail.worst.0,
                fail.worst.1,
                fail.max,
                d + 1
            ));
        }
        None => {
            if let Certification::Uncertified { reason } = &certification {
                problems.push(reason.clone());
            }
        }
    }
    if recomputed != quality {
        problems.push(format!("quality is {recomputed}, not {quality}"));
    }
    Ok(Verification {
        certification,
        residual: at.max,
        next_residual: next.max,
        next_worst: next.worst,
        quality: recomputed,
        passed: problems.is_empty(),
        problems,
    })
}

/// Reads a catalog document; every rule is recorded as a table entry.
pub fn parse_catalog(text: &str, tol: &CertifyTolerances) -> Result<Vec<CatalogEntry>> {
    RuleCollection::parse(text)?
        .rules
        .iter()
        .map(|f| CatalogEntry::new(f.to_rule()?, Source::AppendixB, f.quality, tol))
        .collect()
}

pub fn load_catalog(path: &Path) -> Result<Vec<CatalogEntry>> {
    parse_catalog(&std::fs::read_to_string(path)?, &CertifyTolerances::CATALOG)
}

/// The real rules of every closed-form type.
pub fn analytic_entries(prec: u32) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (d, t) in analytic_types() {
        for rule in solve_analytic(d, t, prec)?.rules().filter(|r| r.is_real()) {
            out.push(CatalogEntry::new(
                rule.clone(),
                Source::AppendixA,
                rule.quality,
                &CertifyTolerances::HIGH_PRECISION,
            )?);
        }
    }
    Ok(out)
}

/// The full catalog, built on first use: closed-form rules first, then the
/// tables, each group by degree.
pub fn catalog() -> &'static [CatalogEntry] {
    static CATALOG: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let mut all = analytic_entries(default_precision()).expect("closed forms evaluate");
        all.extend(parse_catalog(CATALOG_JSON, &CertifyTolerances::CATALOG).expect("bundled catalog parses"));
        all.sort_by_key(|e| (e.source != Source::AppendixA, e.rule.degree));
        all
    })
}

/// Best entry of degree `d`.
///
/// Ranked by position of its quality in `prefs`, then fewest points, then
/// fewest points on the medians, then least total negative weight, then
/// largest smallest point weight; remaining ties keep catalog order.
pub fn lookup_in(entries: &[CatalogEntry], d: u32, prefs: &[QualityLabel]) -> Result<CatalogEntry> {
    let rank = |e: &CatalogEntry| prefs.iter().position(|&q| q == e.rule.quality);
    let best = entries
        .iter()
        .filter(|e| e.rule.degree == d)
        .filter_map(|e| rank(e).map(|r| (r, e)))
        .min_by(|(ra, a), (rb, b)| {
            ra.cmp(rb)
                .then(a.rule.npoints().cmp(&b.rule.npoints()))
                .then(median_points(a).cmp(&median_points(b)))
                .then(a.negative_mass().total_cmp(&b.negative_mass()))
                .then(b.smallest_point_weight().total_cmp(&a.smallest_point_weight()))
        });
    if let Some((_, e)) = best {
        return Ok(e.clone());
    }
    let wanted: Vec<String> = prefs.iter().map(ToString::to_string).collect();
    let mut msg = format!("no catalog rule of degree {d} with quality {}", wanted.join(" or "));
    if let Some(alt) = nearest_alternative(entries, d, prefs) {
        msg += &format!("; nearest: degree {} type {} ({})", alt.rule.degree, alt.rule.rtype, alt.rule.quality);
    }
    Err(Error::NotFound(msg))
}

pub fn lookup(d: u32, prefs: &[QualityLabel]) -> Result<CatalogEntry> {
    lookup_in(catalog(), d, prefs)
}

fn median_points(e: &CatalogEntry) -> usize {
    3 * e.rule.orbits_of(OrbitKind::Type1).count()
}

/// A rule of a preferred quality at the closest degree above `d`, else
/// any rule of degree `d`, else one of the highest degree below `d`.
fn nearest_alternative<'a>(entries: &'a [CatalogEntry], d: u32, prefs: &[QualityLabel]) -> Option<&'a CatalogEntry> {
    let preferred = |e: &&CatalogEntry| prefs.contains(&e.rule.quality);
    entries
        .iter()
        .filter(preferred)
        .filter(|e| e.rule.degree > d)
        .min_by_key(|e| (e.rule.degree, e.rule.npoints()))
        .or_else(|| entries.iter().find(|e| e.rule.degree == d))
        .or_else(|| entries.iter().filter(preferred).max_by_key(|e| (e.rule.degree, std::cmp::Reverse(e.rule.npoints()))))
}

/// Outcome of [`verify_all`].
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogReport {
    pub entries: Vec<CatalogEntry>,
}

impl CatalogReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.verification.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CatalogEntry> {
        self.entries.iter().filter(|e| !e.verification.passed)
    }
}

/// Re-verifies every catalog entry, table entries with `tol` as the exact
/// threshold.
pub fn verify_all(tol: f64) -> Result<CatalogReport> {
    verify_entries(catalog(), tol)
}

pub fn verify_entries(entries: &[CatalogEntry], tol: f64) -> Result<CatalogReport> {
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        let mut t = CertifyTolerances::for_rule(&e.rule);
        if e.source == Source::AppendixB {
            t.exact = tol;
        }
        out.push(CatalogEntry::new(e.rule.clone(), e.source, e.paper_quality, &t)?);
    }
    Ok(CatalogReport { entries: out })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangle::RuleType;

    fn tables() -> Vec<CatalogEntry> {
        parse_catalog(CATALOG_JSON, &CertifyTolerances::CATALOG).unwrap()
    }

    #[test]
    fn tables_parse_and_certify() {
        let t = tables();
        assert_eq!(t.len(), 15);
        for e in &t {
            assert!(e.verification.passed, "{} {}: {:?}", e.rule.degree, e.rule.rtype, e.verification.problems);
        }
    }

    #[test]
    fn lookup_rules() {
        let t = tables();
        let e = lookup_in(&t, 11, &[QualityLabel::NI]).unwrap();
        assert_eq!(e.rule.rtype, RuleType::new(1, 3, 3).unwrap());
        let centroid = e.rule.orbits_of(OrbitKind::Type0).next().unwrap();
        assert!(centroid.weight().re_f64() < 0.0 && centroid.weight().re_f64() > -0.1);
        let err = lookup_in(&t, 9, &[QualityLabel::PI]).unwrap_err().to_string();
        assert!(err.contains("nearest: degree 10"), "{err}");
    }
}
