//! The JSON rule file: one real rule per document, versioned by `schema`.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "degree": 3,
//!   "type": [1, 1, 0],
//!   "quality": "NI",
//!   "provenance": "analytic",
//!   "precision": 256,
//!   "orbits": [
//!     { "kind": "type0", "points": 1, "weight": "-5.625e-1" },
//!     { "kind": "type1", "points": 3, "u": "4.0e-1", "weight": "1.5625e0" }
//!   ]
//! }
//! ```
//!
//! An orbit is given either by its parameters (`u`, or `p` and `q`) and
//! orbit weight, or in table layout by the weight of each point and the
//! coordinates of one point. Parameters are written with enough digits to
//! reproduce the stored precision exactly; the optional `points` list is
//! informational and printed with 17 significant digits.

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{default_precision, parse_rational, Complex};
use crate::triangle::{pq_from_areal, ArealPoint, CubatureRule, Orbit, OrbitKind, Provenance, QualityLabel, RuleType};

pub const SCHEMA: u32 = 1;

/// One rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRuleFile")]
pub struct RuleFile {
    pub schema: u32,
    pub degree: u32,
    #[serde(rename = "type")]
    pub rtype: [u32; 3],
    /// Quality as recorded in the file; [`RuleFile::to_rule`] recomputes it.
    pub quality: QualityLabel,
    pub provenance: Provenance,
    /// Bits used to read the numbers; the default precision when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    pub orbits: Vec<OrbitRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<PointRecord>,
}

/// One orbit; see the module documentation for the two layouts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOrbit")]
pub struct OrbitRecord {
    pub kind: String,
    pub points: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    /// Orbit weight: the sum over the orbit's points.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point_weight: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub weight: String,
    pub coords: [String; 3],
}

/// Several rules in one document, as in the bundled catalog.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleCollection {
    pub schema: u32,
    pub rules: Vec<RuleFile>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRuleFile {
    schema: u32,
    degree: u32,
    #[serde(rename = "type")]
    rtype: [u32; 3],
    quality: QualityLabel,
    provenance: Provenance,
    #[serde(default)]
    precision: Option<u32>,
    orbits: Vec<OrbitRecord>,
    #[serde(default)]
    points: Vec<PointRecord>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOrbit {
    kind: String,
    points: u32,
    #[serde(default)]
    u: Option<String>,
    #[serde(default)]
    p: Option<String>,
    #[serde(default)]
    q: Option<String>,
    #[serde(default)]
    weight: Option<String>,
    #[serde(default)]
    point_weight: Option<String>,
    #[serde(default)]
    coords: Option<[String; 3]>,
}

fn number(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("not a number: {s:?}"))
}

fn kind_of(s: &str) -> Option<OrbitKind> {
    match s {
        "type0" => Some(OrbitKind::Type0),
        "type1" => Some(OrbitKind::Type1),
        "type2" => Some(OrbitKind::Type2),
        _ => None,
    }
}

fn kind_name(k: OrbitKind) -> &'static str {
    match k {
        OrbitKind::Type0 => "type0",
        OrbitKind::Type1 => "type1",
        OrbitKind::Type2 => "type2",
    }
}

impl TryFrom<RawOrbit> for OrbitRecord {
    type Error = String;

    fn try_from(r: RawOrbit) -> std::result::Result<Self, String> {
        let kind = kind_of(&r.kind).ok_or_else(|| format!("unknown orbit kind {:?}", r.kind))?;
        if r.points != kind.npoints() {
            return Err(format!("a {} orbit has {} points, not {}", r.kind, kind.npoints(), r.points));
        }
        let numbers = [&r.u, &r.p, &r.q, &r.weight, &r.point_weight];
        for s in numbers.into_iter().flatten().chain(r.coords.iter().flatten()) {
            number(s)?;
        }
        let by_params = match kind {
            OrbitKind::Type0 => r.weight.is_some(),
            OrbitKind::Type1 => r.u.is_some() && r.weight.is_some(),
            OrbitKind::Type2 => r.p.is_some() && r.q.is_some() && r.weight.is_some(),
        };
        let by_table = r.point_weight.is_some() && (kind == OrbitKind::Type0 || r.coords.is_some());
        if !by_params && !by_table {
            return Err(format!(
                "{} orbit needs either its parameters and \"weight\" or \"point_weight\" and \"coords\"",
                r.kind
            ));
        }
        Ok(OrbitRecord {
            kind: r.kind,
            points: r.points,
            u: r.u,
            p: r.p,
            q: r.q,
            weight: r.weight,
            point_weight: r.point_weight,
            coords: r.coords,
        })
    }
}

impl TryFrom<RawRuleFile> for RuleFile {
    type Error = String;

    fn try_from(r: RawRuleFile) -> std::result::Result<Self, String> {
        if r.schema != SCHEMA {
            return Err(format!("unsupported schema {} (expected {SCHEMA})", r.schema));
        }
        let file = RuleFile {
            schema: r.schema,
            degree: r.degree,
            rtype: r.rtype,
            quality: r.quality,
            provenance: r.provenance,
            precision: r.precision,
            orbits: r.orbits,
            points: r.points,
        };
        file.to_rule().map_err(|e| e.to_string())?;
        if !file.points.is_empty() {
            let mut sum = Rational::new();
            for pt in &file.points {
                sum += number(&pt.weight)?;
            }
            let err = (sum - 1u32).to_f64().abs();
            if err > 1e-13 {
                return Err(format!("expanded point weights sum to 1 + {err:e}"));
            }
        }
        Ok(file)
    }
}

impl OrbitRecord {
    fn to_orbit(&self, prec: u32) -> Result<Orbit> {
        let bad = |msg: String| Error::Parse { line: 0, msg };
        let kind = kind_of(&self.kind).ok_or_else(|| bad(format!("unknown orbit kind {:?}", self.kind)))?;
        let num = |s: &Option<String>| -> Result<Option<Complex>> {
            s.as_deref()
                .map(|s| number(s).map(|r| Complex::from_rational(&r, prec)).map_err(bad))
                .transpose()
        };
        let (u, p, q, weight) = (num(&self.u)?, num(&self.p)?, num(&self.q)?, num(&self.weight)?);
        let weight = match (weight, &self.point_weight) {
            (Some(w), _) => w,
            (None, Some(pw)) => {
                let pw = number(pw).map_err(bad)?;
                Complex::from_rational(&(pw * self.points), prec)
            }
            (None, None) => return Err(bad(format!("{} orbit has no weight", self.kind))),
        };
        let coords = match &self.coords {
            Some(c) => {
                let l = [number(&c[0]), number(&c[1]), number(&c[2])];
                let [a, b, c] = l.map(|x| x.map_err(bad));
                Some(normalized([a?, b?, c?]))
            }
            None => None,
        };
        match kind {
            OrbitKind::Type0 => Ok(Orbit::Type0 { w0: weight }),
            OrbitKind::Type1 => {
                let u = match (u, coords) {
                    (Some(u), _) => u,
                    (None, Some(l)) => Complex::from_rational(&u_from_coords(&l), prec),
                    (None, None) => return Err(bad("type1 orbit has neither u nor coords".into())),
                };
                Orbit::type1(u, weight)
            }
            OrbitKind::Type2 => {
                let (p, q) = match (p, q, coords) {
                    (Some(p), Some(q), _) => (p, q),
                    (_, _, Some(l)) => {
                        let (p, q) = pq_from_areal(&ArealPoint { l });
                        (Complex::from_rational(&p, prec), Complex::from_rational(&q, prec))
                    }
                    _ => return Err(bad("type2 orbit has neither p, q nor coords".into())),
                };
                Orbit::type2(p, q, weight)
            }
        }
    }
}

/// Rescales rounded coordinates to sum to exactly 1.
fn normalized(l: [Rational; 3]) -> [Rational; 3] {
    let sum = Rational::from(&l[0] + &l[1]) + &l[2];
    l.map(|x| x / &sum)
}

/// `u = 1 - 3L` for the repeated coordinate `L`, taken as the mean of the
/// closest pair.
fn u_from_coords(l: &[Rational; 3]) -> Rational {
    let gap = |i: usize, j: usize| Rational::from(&l[i] - &l[j]).abs();
    let (i, j) = [(0, 1), (0, 2), (1, 2)]
        .into_iter()
        .min_by(|&(a, b), &(c, d)| gap(a, b).cmp(&gap(c, d)))
        .unwrap();
    let mean = Rational::from(&l[i] + &l[j]) / 2u32;
    1u32 - mean * 3u32
}

/// Decimal digits that reproduce a `prec`-bit float exactly.
fn digits_for(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2
}

fn exact_string(x: &Float) -> String {
    x.to_string_radix(10, Some(digits_for(x.prec())))
}

/// `x` with 17 significant digits.
pub fn format17(x: f64) -> String {
    format!("{x:.16e}")
}

fn real(c: &Complex) -> Result<&Float> {
    if c.is_real(crate::exactnum::EPS_REAL) {
        Ok(&c.re)
    } else {
        Err(Error::ComplexOrbit)
    }
}

impl RuleFile {
    /// The file for a real rule, with the expanded points if `with_points`.
    pub fn from_rule(rule: &CubatureRule, with_points: bool) -> Result<Self> {
        let mut orbits = Vec::with_capacity(rule.orbits.len());
        for o in &rule.orbits {
            let mut rec = OrbitRecord {
                kind: kind_name(o.kind()).into(),
                points: o.npoints(),
                u: None,
                p: None,
                q: None,
                weight: Some(exact_string(real(o.weight())?)),
                point_weight: None,
                coords: None,
            };
            match o {
                Orbit::Type0 { .. } => {}
                Orbit::Type1 { u, .. } => rec.u = Some(exact_string(real(u)?)),
                Orbit::Type2 { p, q, .. } => {
                    rec.p = Some(exact_string(real(p)?));
                    rec.q = Some(exact_string(real(q)?));
                }
            }
            orbits.push(rec);
        }
        let points = if with_points {
            rule.expand()?
                .iter()
                .map(|wp| PointRecord {
                    weight: format17(wp.weight.to_f64()),
                    coords: wp.point.l.clone().map(|c| format17(c.to_f64())),
                })
                .collect()
        } else {
            Vec::new()
        };
        let t = rule.rtype;
        Ok(RuleFile {
            schema: SCHEMA,
            degree: rule.degree,
            rtype: [t.n0, t.n1, t.n2],
            quality: rule.quality,
            provenance: rule.provenance,
            precision: Some(rule.prec()),
            orbits,
            points,
        })
    }

    /// The rule, with its quality recomputed from the numbers.
    pub fn to_rule(&self) -> Result<CubatureRule> {
        let prec = self.precision.unwrap_or_else(default_precision);
        let orbits = self.orbits.iter().map(|o| o.to_orbit(prec)).collect::<Result<Vec<_>>>()?;
        let rule = CubatureRule::new(self.degree, orbits, self.provenance)?;
        let declared = RuleType::try_from(self.rtype)?;
        if rule.rtype != declared {
            return Err(Error::Parse {
                line: 0,
                msg: format!("declared type {declared} but the orbits form {}", rule.rtype),
            });
        }
        Ok(rule)
    }

    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rule files serialize") + "\n"
    }
}

impl RuleCollection {
    pub fn parse(text: &str) -> Result<Self> {
        let c: RuleCollection = serde_json::from_str(text).map_err(json_error)?;
        if c.schema != SCHEMA {
            return Err(Error::Parse {
                line: 1,
                msg: format!("unsupported schema {} (expected {SCHEMA})", c.schema),
            });
        }
        Ok(c)
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{canonicalize, solve_analytic};

    #[test]
    fn round_trip_is_lossless() {
        let set = solve_analytic(7, RuleType::new(0, 1, 2).unwrap(), 256).unwrap();
        for rule in set.rules().filter(|r| r.is_real()) {
            let file = RuleFile::from_rule(rule, true).unwrap();
            let back = RuleFile::parse(&file.to_json()).unwrap();
            assert_eq!(back, file);
            let (a, b) = (canonicalize(&back.to_rule().unwrap()), canonicalize(rule));
            for (x, y) in a.orbits.iter().zip(&b.orbits) {
                for (s, t) in x.params().into_iter().zip(y.params()) {
                    assert_eq!(s.re, t.re);
                }
            }
        }
    }

    #[test]
    fn table_layout() {
        let text = r#"{"schema": 1, "degree": 3, "type": [0, 0, 1], "quality": "PI",
            "provenance": "catalog",
            "orbits": [{"kind": "type2", "points": 6, "point_weight": "1.666666666666667e-01",
                        "coords": ["0.1", "0.3", "0.6"]}]}"#;
        let rule = RuleFile::parse(text).unwrap().to_rule().unwrap();
        let Orbit::Type2 { p, q, w } = &rule.orbits[0] else { panic!() };
        // e2 = 0.27, e3 = 0.018, and L~3 = -e3
        assert!((p.re_f64() - 0.19).abs() < 1e-15);
        assert!((q.re_f64() - 0.028).abs() < 1e-15);
        assert!((w.re_f64() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let text = "{\n \"schema\": 1,\n \"degree\": 1,\n \"type\": [1, 0, 0],\n \"quality\": \"PI\",\n \"provenance\": \"numeric\",\n \"orbits\": [\n  {\"kind\": \"type1\", \"points\": 1}\n ]\n}";
        match RuleFile::parse(text) {
            Err(Error::Parse { line, msg }) => {
                // reported where the record ends
                assert!((8..=9).contains(&line), "{msg}");
                assert!(msg.contains("3 points"), "{msg}");
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(RuleFile::parse("{\n\"schema\": 2"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn mismatched_type_rejected() {
        let text = r#"{"schema": 1, "degree": 1, "type": [0, 1, 0], "quality": "PI",
            "provenance": "numeric", "orbits": [{"kind": "type0", "points": 1, "weight": "1"}]}"#;
        let err = RuleFile::parse(text).unwrap_err().to_string();
        assert!(err.contains("declared type"), "{err}");
    }
}
