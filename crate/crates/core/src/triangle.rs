//! Areal-coordinate geometry of fully symmetric rules: the `(p, q)` and `u`
//! invariants, orbits and their expansion into points, and rule quality.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{elem_sym, roots_from_elem, Complex, Scalar, EPS_REAL};

/// Default tolerance for the boundary and negativity tests.
pub const EPS_ZERO: f64 = 1e-12;

/// Areal (barycentric) coordinates `(L1, L2, L3)` with `L1 + L2 + L3 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArealPoint<T> {
    pub l: [T; 3],
}

impl<T> ArealPoint<T> {
    pub fn new(l1: T, l2: T, l3: T) -> Self {
        ArealPoint { l: [l1, l2, l3] }
    }
}

impl<T: Clone> ArealPoint<T> {
    /// The six coordinate permutations, in lexicographic order of the
    /// index permutation.
    pub fn permutations(&self) -> [ArealPoint<T>; 6] {
        const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        PERMS.map(|[a, b, c]| ArealPoint::new(self.l[a].clone(), self.l[b].clone(), self.l[c].clone()))
    }
}

/// The symmetric invariants `p = 1 - 3 L~2` and
/// `q = 1 - (27/2) L~3 - (9/2) L~2` of an areal point.
///
/// Exact for rational input and invariant under every coordinate
/// permutation.
pub fn pq_from_areal<T: Scalar>(pt: &ArealPoint<T>) -> (T, T) {
    let tilde = elem_sym(&pt.l);
    let one = T::one_like(&pt.l[0]);
    let c = |n: i64, d: i64| T::from_rational_like(&Rational::from((n, d)), &pt.l[0]);
    let p = one.clone() - c(3, 1) * tilde[2].clone();
    let q = one - c(27, 2) * tilde[3].clone() - c(9, 2) * tilde[2].clone();
    (p, q)
}

/// The type-1 point `((1+2u)/3, (1-u)/3, (1-u)/3)`, for which `p = u^2`
/// and `q = u^3`.
pub fn areal_from_u<T: Scalar>(u: &T) -> ArealPoint<T> {
    let c = |n: i64, d: i64| T::from_rational_like(&Rational::from((n, d)), u);
    let third = c(1, 3);
    let a = third.clone() + c(2, 3) * u.clone();
    let b = third - c(1, 3) * u.clone();
    ArealPoint::new(a, b.clone(), b)
}

/// One representative point with invariants `(p, q)`: the three roots of
/// `x^3 - x^2 + L~2 x + L~3`, by descending real part.
pub fn areal_from_pq(p: &Complex, q: &Complex, prec: u32) -> Result<ArealPoint<Complex>> {
    let r = |n: i64, d: i64| Complex::from_rational(&Rational::from((n, d)), prec);
    let l2 = (r(1, 1) - p.clone()) * r(1, 3);
    let l3 = r(2, 27) * (r(1, 1) - q.clone()) - r(1, 3) * l2.clone();
    let mut roots = roots_from_elem(&[r(1, 1), r(-1, 1), l2, l3], prec)?;
    roots.reverse();
    let [a, b, c]: [Complex; 3] = roots.try_into().expect("cubic has three roots");
    Ok(ArealPoint::new(a, b, c))
}

/// Number of orbits of each kind, `[n0, n1, n2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[u32; 3]", try_from = "[u32; 3]")]
pub struct RuleType {
    pub n0: u32,
    pub n1: u32,
    pub n2: u32,
}

impl RuleType {
    pub fn new(n0: u32, n1: u32, n2: u32) -> Result<Self> {
        if n0 > 1 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("a rule has at most one centroid orbit, got n0 = {n0}"),
            });
        }
        Ok(RuleType { n0, n1, n2 })
    }

    /// `n0 + 3 n1 + 6 n2`.
    pub fn npoints(&self) -> u32 {
        npoints(*self)
    }

    /// `n0 + 2 n1 + 3 n2`.
    pub fn nvars(&self) -> u32 {
        self.n0 + 2 * self.n1 + 3 * self.n2
    }

    pub fn norbits(&self) -> u32 {
        self.n0 + self.n1 + self.n2
    }
}

/// `n0 + 3 n1 + 6 n2`.
pub fn npoints(t: RuleType) -> u32 {
    t.n0 + 3 * t.n1 + 6 * t.n2
}

impl From<RuleType> for [u32; 3] {
    fn from(t: RuleType) -> Self {
        [t.n0, t.n1, t.n2]
    }
}

impl TryFrom<[u32; 3]> for RuleType {
    type Error = Error;
    fn try_from([n0, n1, n2]: [u32; 3]) -> Result<Self> {
        RuleType::new(n0, n1, n2)
    }
}

impl fmt::Display for RuleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{}]", self.n0, self.n1, self.n2)
    }
}

impl FromStr for RuleType {
    type Err = Error;

    /// Accepts `1,2,1` or `[1,2,1]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse {
            line: 0,
            msg: format!("expected a rule type like 1,2,1, got {s:?}"),
        };
        let inner = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<u32> = inner
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match parts[..] {
            [n0, n1, n2] => RuleType::new(n0, n1, n2),
            _ => Err(bad()),
        }
    }
}

/// One orbit of a fully symmetric rule, with its collapsed weight: the
/// orbit weight is the per-point weight times the number of points.
#[derive(Clone, Debug, PartialEq)]
pub enum Orbit {
    /// The centroid.
    Type0 { w0: Complex },
    /// Three points on the medians, `p = u^2`, `q = u^3`.
    Type1 { u: Complex, v: Complex },
    /// Six points with distinct coordinates.
    Type2 { p: Complex, q: Complex, w: Complex },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OrbitKind {
    Type0,
    Type1,
    Type2,
}

impl OrbitKind {
    pub fn npoints(self) -> u32 {
        match self {
            OrbitKind::Type0 => 1,
            OrbitKind::Type1 => 3,
            OrbitKind::Type2 => 6,
        }
    }
}

impl Orbit {
    pub fn type1(u: Complex, v: Complex) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::DegenerateOrbit("type-1 orbit with u = 0 is the centroid".into()));
        }
        Ok(Orbit::Type1 { u, v })
    }

    pub fn type2(p: Complex, q: Complex, w: Complex) -> Result<Self> {
        let disc = p.powu(3) - q.powu(2);
        if disc.is_zero() {
            return Err(Error::DegenerateOrbit(
                "type-2 orbit with p^3 = q^2 has a repeated coordinate".into(),
            ));
        }
        Ok(Orbit::Type2 { p, q, w })
    }

    pub fn kind(&self) -> OrbitKind {
        match self {
            Orbit::Type0 { .. } => OrbitKind::Type0,
            Orbit::Type1 { .. } => OrbitKind::Type1,
            Orbit::Type2 { .. } => OrbitKind::Type2,
        }
    }

    /// Sum of the weights of the orbit's points.
    pub fn weight(&self) -> &Complex {
        match self {
            Orbit::Type0 { w0 } => w0,
            Orbit::Type1 { v, .. } => v,
            Orbit::Type2 { w, .. } => w,
        }
    }

    pub fn weight_mut(&mut self) -> &mut Complex {
        match self {
            Orbit::Type0 { w0 } => w0,
            Orbit::Type1 { v, .. } => v,
            Orbit::Type2 { w, .. } => w,
        }
    }

    pub fn npoints(&self) -> u32 {
        self.kind().npoints()
    }

    /// Weight of each individual point.
    pub fn point_weight(&self) -> Complex {
        let n = Complex::from_f64(self.npoints() as f64, self.prec());
        self.weight().clone() / n
    }

    pub fn prec(&self) -> u32 {
        self.weight().prec()
    }

    /// The orbit parameters, weight last.
    pub fn params(&self) -> Vec<&Complex> {
        match self {
            Orbit::Type0 { w0 } => vec![w0],
            Orbit::Type1 { u, v } => vec![u, v],
            Orbit::Type2 { p, q, w } => vec![p, q, w],
        }
    }

    pub fn params_mut(&mut self) -> Vec<&mut Complex> {
        match self {
            Orbit::Type0 { w0 } => vec![w0],
            Orbit::Type1 { u, v } => vec![u, v],
            Orbit::Type2 { p, q, w } => vec![p, q, w],
        }
    }

    /// The `(p, q)` invariants of the orbit's points.
    pub fn pq(&self) -> (Complex, Complex) {
        let prec = self.prec();
        match self {
            Orbit::Type0 { .. } => (Complex::zero(prec), Complex::zero(prec)),
            Orbit::Type1 { u, .. } => (u.powu(2), u.powu(3)),
            Orbit::Type2 { p, q, .. } => (p.clone(), q.clone()),
        }
    }

    /// Coordinates of a representative point (possibly complex).
    pub fn representative(&self) -> Result<ArealPoint<Complex>> {
        let prec = self.prec();
        match self {
            Orbit::Type0 { .. } => {
                let t = Complex::from_rational(&Rational::from((1, 3)), prec);
                Ok(ArealPoint::new(t.clone(), t.clone(), t))
            }
            Orbit::Type1 { u, .. } => Ok(areal_from_u(u)),
            Orbit::Type2 { p, q, .. } => areal_from_pq(p, q, prec),
        }
    }

    /// Parameters and coordinates are all numerically real.
    pub fn is_real(&self) -> Result<bool> {
        if !self.params().iter().all(|x| x.is_real(EPS_REAL)) {
            return Ok(false);
        }
        Ok(self.representative()?.l.iter().all(|x| x.is_real(EPS_REAL)))
    }

    pub fn with_precision(&self, prec: u32) -> Orbit {
        let mut o = self.clone();
        for x in o.params_mut() {
            x.re.set_prec(prec);
            x.im.set_prec(prec);
        }
        o
    }
}

/// A real point of an expanded rule.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedPoint {
    pub weight: Float,
    pub point: ArealPoint<Float>,
}

/// Expands an orbit into its weighted points.
///
/// Type 0 gives the centroid, type 1 the three placements of the distinct
/// coordinate, type 2 all six permutations. Orbits with complex parameters
/// or coordinates are refused.
pub fn expand_orbit(o: &Orbit) -> Result<Vec<WeightedPoint>> {
    if !o.is_real()? {
        return Err(Error::ComplexOrbit);
    }
    let rep = o.representative()?;
    let real = |z: &Complex| z.re.clone();
    let rep = ArealPoint::new(real(&rep.l[0]), real(&rep.l[1]), real(&rep.l[2]));
    let weight = o.point_weight().re;
    let points: Vec<ArealPoint<Float>> = match o.kind() {
        OrbitKind::Type0 => vec![rep],
        OrbitKind::Type1 => {
            let [a, b, _] = rep.l;
            vec![
                ArealPoint::new(a.clone(), b.clone(), b.clone()),
                ArealPoint::new(b.clone(), a.clone(), b.clone()),
                ArealPoint::new(b.clone(), b, a),
            ]
        }
        OrbitKind::Type2 => rep.permutations().to_vec(),
    };
    Ok(points
        .into_iter()
        .map(|point| WeightedPoint {
            weight: weight.clone(),
            point,
        })
        .collect())
}

/// Where a rule's numbers came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Analytic,
    Numeric,
    Catalog,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Analytic => "analytic",
            Provenance::Numeric => "numeric",
            Provenance::Catalog => "catalog",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Provenance::Analytic),
            "numeric" => Ok(Provenance::Numeric),
            "catalog" => Ok(Provenance::Catalog),
            _ => Err(Error::Parse {
                line: 0,
                msg: format!("unknown provenance {s:?}"),
            }),
        }
    }
}

/// Two-letter rule quality.
///
/// First letter: P (all weights positive), N (some weight negative) or C
/// (some weight complex). Second letter: I (all points inside), B (on the
/// boundary, none outside), O (some point outside) or C (some point
/// complex).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QualityLabel {
    PI,
    NI,
    PB,
    NB,
    PO,
    NO,
    PC,
    NC,
    CC,
}

impl QualityLabel {
    pub const ALL: [QualityLabel; 9] = [
        QualityLabel::PI,
        QualityLabel::NI,
        QualityLabel::PB,
        QualityLabel::NB,
        QualityLabel::PO,
        QualityLabel::NO,
        QualityLabel::PC,
        QualityLabel::NC,
        QualityLabel::CC,
    ];

    pub fn from_letters(weights: char, points: char) -> Option<Self> {
        use QualityLabel::*;
        Some(match (weights, points) {
            ('P', 'I') => PI,
            ('N', 'I') => NI,
            ('P', 'B') => PB,
            ('N', 'B') => NB,
            ('P', 'O') => PO,
            ('N', 'O') => NO,
            ('P', 'C') => PC,
            ('N', 'C') => NC,
            ('C', 'C') => CC,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        use QualityLabel::*;
        match self {
            PI => "PI",
            NI => "NI",
            PB => "PB",
            NB => "NB",
            PO => "PO",
            NO => "NO",
            PC => "PC",
            NC => "NC",
            CC => "CC",
        }
    }

    /// All coordinates and weights are real.
    pub fn is_real(self) -> bool {
        !matches!(self, QualityLabel::PC | QualityLabel::NC | QualityLabel::CC)
    }
}

impl fmt::Display for QualityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QualityLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), Some(b), None) => QualityLabel::from_letters(a.to_ascii_uppercase(), b.to_ascii_uppercase()),
            _ => None,
        }
        .ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("unknown quality label {s:?}"),
        })
    }
}

/// Thresholds for [`classify`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityTolerances {
    /// Negative-weight and boundary threshold.
    pub eps_zero: f64,
    /// Imaginary parts at most this large count as real.
    pub eps_real: f64,
}

impl Default for QualityTolerances {
    fn default() -> Self {
        QualityTolerances {
            eps_zero: EPS_ZERO,
            eps_real: EPS_REAL,
        }
    }
}

/// Weights and coordinates of every orbit, as plain data for
/// classification.
fn orbit_samples(orbits: &[Orbit]) -> Result<Vec<(Complex, ArealPoint<Complex>)>> {
    orbits
        .iter()
        .map(|o| Ok((o.point_weight(), o.representative()?)))
        .collect()
}

/// Quality label of a set of orbits.
pub fn classify_orbits(orbits: &[Orbit], tol: &QualityTolerances) -> Result<QualityLabel> {
    let samples = orbit_samples(orbits)?;
    let weight_letter = if samples.iter().any(|(w, _)| !w.is_real(tol.eps_real)) {
        'C'
    } else if samples.iter().any(|(w, _)| w.re_f64() < -tol.eps_zero) {
        'N'
    } else {
        'P'
    };
    let coords = || samples.iter().flat_map(|(_, pt)| pt.l.iter());
    let point_letter = if coords().any(|c| !c.is_real(tol.eps_real)) {
        'C'
    } else if coords().any(|c| c.re_f64() < -tol.eps_zero || c.re_f64() > 1.0 + tol.eps_zero) {
        'O'
    } else if coords().any(|c| c.re_f64().abs() <= tol.eps_zero) {
        'B'
    } else {
        'I'
    };
    // a complex weight forces complex coordinates
    let point_letter = if weight_letter == 'C' { 'C' } else { point_letter };
    Ok(QualityLabel::from_letters(weight_letter, point_letter).expect("valid letter pair"))
}

/// Recomputes the quality of `rule` with the given tolerances.
pub fn classify(rule: &CubatureRule, tol: &QualityTolerances) -> Result<QualityLabel> {
    classify_orbits(&rule.orbits, tol)
}

/// Some coordinate or weight lies within ten times `eps_zero` of a
/// classification threshold without crossing it, so the label depends on
/// the choice of tolerance.
pub fn near_threshold(rule: &CubatureRule, tol: &QualityTolerances) -> Result<bool> {
    let samples = orbit_samples(&rule.orbits)?;
    let close = |x: f64| {
        let d = x.abs();
        d > tol.eps_zero && d <= 10.0 * tol.eps_zero
    };
    Ok(samples.iter().any(|(w, pt)| {
        close(w.re_f64()) || pt.l.iter().any(|c| close(c.re_f64()) || close(c.re_f64() - 1.0))
    }))
}

/// A fully symmetric cubature rule.
#[derive(Clone, Debug, PartialEq)]
pub struct CubatureRule {
    pub degree: u32,
    pub rtype: RuleType,
    pub orbits: Vec<Orbit>,
    pub quality: QualityLabel,
    pub provenance: Provenance,
}

impl CubatureRule {
    /// Builds a rule, deriving its type from the orbits and its quality
    /// with the default tolerances.
    pub fn new(degree: u32, orbits: Vec<Orbit>, provenance: Provenance) -> Result<Self> {
        let rtype = type_of(&orbits)?;
        let quality = classify_orbits(&orbits, &QualityTolerances::default())?;
        Ok(CubatureRule {
            degree,
            rtype,
            orbits,
            quality,
            provenance,
        })
    }

    pub fn npoints(&self) -> u32 {
        self.rtype.npoints()
    }

    pub fn prec(&self) -> u32 {
        self.orbits.first().map_or(crate::exactnum::DEFAULT_PRECISION, Orbit::prec)
    }

    /// All points with their weights; fails for complex rules.
    pub fn expand(&self) -> Result<Vec<WeightedPoint>> {
        let mut out = Vec::with_capacity(self.npoints() as usize);
        for o in &self.orbits {
            out.extend(expand_orbit(o)?);
        }
        Ok(out)
    }

    /// Sum of all orbit weights.
    pub fn weight_sum(&self) -> Complex {
        self.orbits
            .iter()
            .fold(Complex::zero(self.prec()), |acc, o| acc + o.weight().clone())
    }

    pub fn is_real(&self) -> bool {
        self.quality.is_real()
    }

    pub fn orbits_of(&self, kind: OrbitKind) -> impl Iterator<Item = &Orbit> {
        self.orbits.iter().filter(move |o| o.kind() == kind)
    }
}

/// Orbit counts of a list of orbits.
pub fn type_of(orbits: &[Orbit]) -> Result<RuleType> {
    let count = |k| orbits.iter().filter(|o| o.kind() == k).count() as u32;
    RuleType::new(count(OrbitKind::Type0), count(OrbitKind::Type1), count(OrbitKind::Type2))
}
