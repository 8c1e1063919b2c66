//! Multistart damped Newton search for real rules.
//!
//! Each start is iterated in double precision; converged points are
//! deduplicated, refined by Newton's method at the working precision and
//! kept only if the Jacobian there has full rank.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rug::Float;

use super::{dedupe, Completeness, Diagnostics, Solution, SolutionSet, SolverConfig};
use crate::exactnum::{solve_real, Complex};
use crate::system::{
    backsubstitute, backsubstitute_from_ut, build_moment_system, check_consistency, reduce_system, MPoly, MomentSystem, ReducedSystem,
    VarLayout,
};
use crate::triangle::{CubatureRule, Orbit, Provenance, RuleType};
use crate::Result;

/// Double-precision residual below which a start counts as converged.
const F64_CONVERGED: f64 = 1e-12;
/// Candidates above this residual are not worth refining.
const F64_CANDIDATE: f64 = 1e-8;
/// Two double-precision candidates closer than this are the same point.
const F64_SAME: f64 = 1e-6;
/// Largest change of any unknown in one double-precision Newton step.
const MAX_STEP: f64 = 0.1;
/// Iterates leaving this box are abandoned.
const DIVERGED: f64 = 1e3;
const RANK_RATIO: f64 = 1e-10;
/// A start that has not halved its residual in this many iterations is
/// abandoned.
const STALL_WINDOW: usize = 25;

/// A polynomial compiled for fast double-precision evaluation.
#[derive(Clone, Debug)]
struct F64Poly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl F64Poly {
    fn new(p: &MPoly) -> Self {
        F64Poly {
            terms: p
                .terms()
                .map(|(m, c)| (c.to_f64(), m.factors().iter().map(|&(v, e)| (v, e as i32)).collect()))
                .collect(),
        }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, fs)| fs.iter().fold(*c, |acc, &(v, e)| acc * x[v].powi(e)))
            .sum()
    }
}

/// A square or rectangular polynomial system with its Jacobian.
struct System {
    nvars: usize,
    eqs: Vec<MPoly>,
    jac: Vec<(usize, usize, MPoly)>,
    eqs64: Vec<F64Poly>,
    jac64: Vec<(usize, usize, F64Poly)>,
}

impl System {
    fn new(eqs: Vec<MPoly>, nvars: usize) -> Self {
        let mut jac = Vec::new();
        for (r, e) in eqs.iter().enumerate() {
            for v in e.variables() {
                jac.push((r, v, e.derivative(v)));
            }
        }
        let eqs64 = eqs.iter().map(F64Poly::new).collect();
        let jac64 = jac.iter().map(|(r, c, p)| (*r, *c, F64Poly::new(p))).collect();
        System {
            nvars,
            eqs,
            jac,
            eqs64,
            jac64,
        }
    }

    fn residual64(&self, x: &[f64]) -> DVector<f64> {
        DVector::from_iterator(self.eqs64.len(), self.eqs64.iter().map(|p| p.eval(x)))
    }

    fn jacobian64(&self, x: &[f64]) -> DMatrix<f64> {
        let mut j = DMatrix::zeros(self.eqs64.len(), self.nvars);
        for (r, c, p) in &self.jac64 {
            j[(*r, *c)] = p.eval(x);
        }
        j
    }

    fn residual_hp(&self, x: &[Float], like: &Float) -> Vec<Float> {
        self.eqs.iter().map(|p| p.eval(x, like)).collect()
    }

    fn jacobian_hp(&self, x: &[Float], like: &Float) -> Vec<Vec<Float>> {
        let zero = Float::with_val(like.prec(), 0);
        let mut j = vec![vec![zero; self.nvars]; self.eqs.len()];
        for (r, c, p) in &self.jac {
            j[*r][*c] = p.eval(x, like);
        }
        j
    }

    /// Smallest over largest singular value of the Jacobian.
    fn rank_ratio(&self, x: &[f64]) -> f64 {
        if self.nvars == 0 {
            return 1.0;
        }
        let j = self.jacobian64(x);
        if j.nrows() < j.ncols() {
            return 0.0;
        }
        let sv = j.singular_values();
        let max = sv.max();
        if max == 0.0 {
            0.0
        } else {
            sv.min() / max
        }
    }
}

fn solve64(j: DMatrix<f64>, rhs: DVector<f64>) -> Option<DVector<f64>> {
    if j.is_square() {
        if let Some(s) = j.clone().lu().solve(&rhs) {
            if s.iter().all(|v| v.is_finite()) {
                return Some(s);
            }
        }
    }
    j.svd(true, true).solve(&rhs, 1e-14).ok().filter(|s| s.iter().all(|v| v.is_finite()))
}

/// Newton's method with every step scaled down to at most `MAX_STEP` in
/// each component. Steps are taken even when they raise the residual:
/// insisting on descent traps most starts in local minima of the norm.
fn newton64(sys: &System, mut x: DVector<f64>, max_iterations: usize) -> (DVector<f64>, f64) {
    let mut f = sys.residual64(x.as_slice());
    let mut norm = f.norm();
    let mut checkpoint = norm;
    for it in 0..max_iterations {
        if norm < F64_CONVERGED || !norm.is_finite() {
            break;
        }
        if it % STALL_WINDOW == STALL_WINDOW - 1 {
            if norm > 0.5 * checkpoint {
                break;
            }
            checkpoint = norm;
        }
        let Some(mut step) = solve64(sys.jacobian64(x.as_slice()), -&f) else {
            break;
        };
        let size = step.amax();
        if size > MAX_STEP {
            step *= MAX_STEP / size;
        }
        x += step;
        if x.amax() > DIVERGED {
            break;
        }
        f = sys.residual64(x.as_slice());
        norm = f.norm();
    }
    (x, norm)
}

/// Newton's method at precision `prec`, Gauss-Newton when overdetermined.
fn refine(sys: &System, x0: &[f64], prec: u32, tol: f64) -> Option<(Vec<Float>, f64)> {
    let like = Float::with_val(prec, 0);
    let mut x: Vec<Float> = x0.iter().map(|&v| Float::with_val(prec, v)).collect();
    let tiny = 2f64.powi(-(prec as i32) + 16);
    let max_abs = |v: &[Float]| v.iter().map(|f| f.to_f64().abs()).fold(0.0, f64::max);
    let mut norm = max_abs(&sys.residual_hp(&x, &like));
    for _ in 0..60 {
        let f = sys.residual_hp(&x, &like);
        norm = max_abs(&f);
        if !norm.is_finite() {
            return None;
        }
        let j = sys.jacobian_hp(&x, &like);
        let neg: Vec<Float> = f.iter().map(|v| Float::with_val(prec, -v)).collect();
        let step = if j.len() == sys.nvars {
            solve_real(&j, &neg, tiny).ok()?
        } else {
            let (jtj, jtf) = normal_equations(&j, &neg, prec);
            solve_real(&jtj, &jtf, tiny).ok()?
        };
        let size = max_abs(&step);
        for (xi, si) in x.iter_mut().zip(&step) {
            *xi += si;
        }
        if size <= tiny * (1.0 + max_abs(&x)) {
            break;
        }
    }
    norm = norm.min(max_abs(&sys.residual_hp(&x, &like)));
    (norm <= tol).then_some((x, norm))
}

fn normal_equations(j: &[Vec<Float>], rhs: &[Float], prec: u32) -> (Vec<Vec<Float>>, Vec<Float>) {
    let n = j[0].len();
    let mut a = vec![vec![Float::with_val(prec, 0); n]; n];
    let mut b = vec![Float::with_val(prec, 0); n];
    for (row, r) in j.iter().zip(rhs) {
        for c1 in 0..n {
            b[c1] += Float::with_val(prec, &row[c1] * r);
            for c2 in 0..n {
                a[c1][c2] += Float::with_val(prec, &row[c1] * &row[c2]);
            }
        }
    }
    (a, b)
}

/// Orbit weights from a flat Dirichlet draw.
fn dirichlet(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

/// Odd starts draw the orbit point uniformly in the triangle, which favours
/// points near the edges; even starts draw `(p, q)` uniformly.
fn general_orbit_start(rng: &mut ChaCha8Rng, areal: bool) -> (f64, f64) {
    if areal {
        let l = dirichlet(rng, 3);
        let e2 = l[0] * l[1] + l[1] * l[2] + l[0] * l[2];
        let e3 = l[0] * l[1] * l[2];
        return (1.0 - 3.0 * e2, 1.0 - 13.5 * e3 - 4.5 * e2);
    }
    let p: f64 = rng.random_range(1e-6..1.0);
    let bound = p.powf(1.5);
    (p, rng.random_range(-bound..bound))
}

fn full_start(layout: &VarLayout, rng: &mut ChaCha8Rng, areal: bool) -> Vec<f64> {
    let t = layout.rtype;
    let mut x = vec![0.0; layout.len()];
    let w = dirichlet(rng, t.norbits() as usize);
    let mut wi = w.into_iter();
    if let Some(i) = layout.w0() {
        x[i] = wi.next().unwrap();
    }
    for k in 0..t.n1 as usize {
        x[layout.u(k)] = rng.random_range(-0.5..1.0);
        x[layout.v(k)] = wi.next().unwrap();
    }
    for k in 0..t.n2 as usize {
        let (p, q) = general_orbit_start(rng, areal);
        x[layout.p(k)] = p;
        x[layout.q(k)] = q;
        x[layout.w(k)] = wi.next().unwrap();
    }
    x
}

fn general_block_start(t: RuleType, rng: &mut ChaCha8Rng, areal: bool) -> Vec<f64> {
    let w = dirichlet(rng, t.norbits() as usize);
    let mut x = Vec::with_capacity(3 * t.n2 as usize);
    for k in 0..t.n2 as usize {
        let (p, q) = general_orbit_start(rng, areal);
        x.extend([p, q, w[w.len() - t.n2 as usize + k]]);
    }
    x
}

/// Sort key invariant under permutation of same-kind orbits.
fn canonical_key(x: &[f64], n_head: usize, groups: &[(usize, usize, usize)]) -> Vec<f64> {
    let mut out = x[..n_head].to_vec();
    for &(start, count, width) in groups {
        let mut chunks: Vec<&[f64]> = (0..count).map(|k| &x[start + k * width..start + (k + 1) * width]).collect();
        chunks.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
        for c in chunks {
            out.extend_from_slice(c);
        }
    }
    out
}

fn seen(keys: &[Vec<f64>], key: &[f64]) -> bool {
    keys.iter()
        .any(|k| k.iter().zip(key).all(|(a, b)| (a - b).abs() <= F64_SAME * (1.0 + a.abs())))
}

enum Search<'a> {
    /// All unknowns of the moment system.
    Full { layout: VarLayout },
    /// General orbits from the interior equations alone; the median orbits
    /// follow by back-substitution.
    Interior { rs: &'a ReducedSystem },
    /// Recurrence coefficients `ut` together with the general orbits.
    Recurrence { rs: &'a ReducedSystem },
}

/// The type-1 data of a type with a centroid follows linearly from the
/// general orbits when there are at least `(d-1)/2` median orbits and the
/// interior equations alone fix the general orbits.
fn interior_suffices(ms: &MomentSystem) -> bool {
    let t = ms.rtype;
    let interior = (ms.n_e - ms.degree) as usize;
    t.n0 == 1 && t.n1 >= 1 && 2 * t.n1 + 1 >= ms.degree && interior == 3 * t.n2 as usize
}

fn signed_elem_sym(values: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for v in values {
        c.push(0.0);
        for k in (1..c.len()).rev() {
            c[k] -= v * c[k - 1];
        }
    }
    c
}

/// Real rules of type `t` found from `cfg.starts` random starting points.
pub fn solve_numeric(d: u32, t: RuleType, cfg: &SolverConfig) -> Result<SolutionSet> {
    if !cfg.force {
        check_consistency(d, t)?;
    }
    let ms = build_moment_system(d, t)?;
    let full = System::new(ms.polys().cloned().collect(), ms.vars.len());
    let rs = reduce_system(&ms)?;
    let n1 = t.n1 as usize;
    let n2 = t.n2 as usize;
    let search = if interior_suffices(&ms) {
        Search::Interior { rs: &rs }
    } else if n1 > 0 {
        Search::Recurrence { rs: &rs }
    } else {
        Search::Full { layout: ms.vars }
    };
    let off = rs.type2_offset;
    let (sys, n_head, groups) = match &search {
        Search::Full { layout } => (
            System::new(ms.polys().cloned().collect(), layout.len()),
            layout.w0().map_or(0, |_| 1),
            vec![(layout.u(0), n1, 2), (layout.p(0), n2, 3)],
        ),
        Search::Interior { rs } => (
            System::new(rs.interior.iter().map(|e| e.map_vars(|v| v - off)).collect(), 3 * n2),
            0,
            vec![(0, n2, 3)],
        ),
        Search::Recurrence { rs } => {
            let eqs = rs
                .equations()
                .map(|e| e.map_vars(|v| if v < n1 { v } else { v - off + n1 }))
                .collect();
            (System::new(eqs, n1 + 3 * n2), n1, vec![(n1, n2, 3)])
        }
    };

    let mut diag = Diagnostics {
        starts: cfg.starts,
        best_residual: f64::INFINITY,
        ..Default::default()
    };
    let mut keys: Vec<Vec<f64>> = Vec::new();
    let mut found = Vec::new();
    let starts = if sys.nvars == 0 { 1 } else { cfg.starts };
    for start in 0..starts {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(start as u64);
        let areal = start % 2 == 1;
        let x0 = match &search {
            Search::Full { layout } => full_start(layout, &mut rng, areal),
            Search::Interior { .. } => general_block_start(t, &mut rng, areal),
            Search::Recurrence { .. } => {
                let us: Vec<f64> = (0..n1).map(|_| rng.random_range(-0.5..1.0)).collect();
                let mut x = signed_elem_sym(&us)[1..].to_vec();
                x.extend(general_block_start(t, &mut rng, areal));
                x
            }
        };
        let (x, norm) = newton64(&sys, DVector::from_vec(x0), cfg.max_iterations);
        if norm.is_finite() {
            diag.best_residual = diag.best_residual.min(norm);
        }
        if !(norm < F64_CANDIDATE) {
            continue;
        }
        diag.converged += 1;
        let key = canonical_key(x.as_slice(), n_head, &groups);
        if seen(&keys, &key) {
            continue;
        }
        keys.push(key);
        match finish(&search, &sys, &full, &ms, x.as_slice(), cfg) {
            Outcome::Rule(s) => found.push(s),
            Outcome::PositiveDimensional => diag.positive_dimensional += 1,
            Outcome::Rejected => diag.rejected += 1,
        }
    }
    Ok(SolutionSet {
        degree: d,
        rtype: t,
        solutions: dedupe(found, cfg.dedup_tol),
        completeness: Completeness::HeuristicNumeric,
        diagnostics: Some(diag),
    })
}

enum Outcome {
    Rule(Solution),
    PositiveDimensional,
    Rejected,
}

fn triples(it: &mut impl Iterator<Item = Complex>, n: u32) -> Vec<[Complex; 3]> {
    (0..n)
        .map(|_| [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
        .collect()
}

fn finish(search: &Search, sys: &System, full: &System, ms: &MomentSystem, x: &[f64], cfg: &SolverConfig) -> Outcome {
    let prec = cfg.precision;
    if sys.rank_ratio(x) < RANK_RATIO {
        return Outcome::PositiveDimensional;
    }
    let Some((xr, _)) = refine(sys, x, prec, cfg.tol) else {
        return Outcome::Rejected;
    };
    let mut it = xr.into_iter().map(Complex::from_real);
    let orbits = match search {
        Search::Full { layout } => layout.orbits_from_values(&it.collect::<Vec<_>>()),
        Search::Interior { rs } => {
            let type2 = triples(&mut it, rs.rtype.n2);
            backsubstitute(rs, &type2, prec, Provenance::Numeric).map(|r| r.orbits)
        }
        Search::Recurrence { rs } => {
            let ut: Vec<Complex> = it.by_ref().take(rs.n_ut).collect();
            let type2 = triples(&mut it, rs.rtype.n2);
            backsubstitute_from_ut(rs, &type2, &ut, prec, Provenance::Numeric).map(|r| r.orbits)
        }
    };
    let Ok(orbits) = orbits else {
        return Outcome::Rejected;
    };
    if !orbits.iter().all(|o| o.params().iter().all(|p| p.is_real(crate::exactnum::EPS_REAL))) {
        return Outcome::Rejected;
    }
    let Ok(vals) = ms.vars.values_from_orbits(&orbits) else {
        return Outcome::Rejected;
    };
    let x64: Vec<f64> = vals.iter().map(Complex::re_f64).collect();
    if full.rank_ratio(&x64) < RANK_RATIO {
        return Outcome::PositiveDimensional;
    }
    let residual = ms.max_residual(&vals);
    if residual > cfg.tol {
        return Outcome::Rejected;
    }
    match CubatureRule::new(ms.degree, orbits.into_iter().map(real_part).collect(), Provenance::Numeric) {
        Ok(rule) => Outcome::Rule(Solution { rule, residual }),
        Err(_) => Outcome::Rejected,
    }
}

/// Drops the numerically negligible imaginary parts.
fn real_part(mut o: Orbit) -> Orbit {
    for p in o.params_mut() {
        p.im = Float::with_val(p.im.prec(), 0);
    }
    o
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;
    use crate::triangle::QualityLabel;

    #[test]
    fn degree_five_has_one_rule() {
        let cfg = SolverConfig {
            starts: 50,
            ..Default::default()
        };
        let set = solve_numeric(5, RuleType::new(1, 2, 0).unwrap(), &cfg).unwrap();
        assert_eq!(set.len(), 1);
        let rule = &set.solutions[0].rule;
        assert_eq!(rule.quality, QualityLabel::PI);
        let w0 = Complex::from_rational(&rat(9, 40), 256);
        assert!(rule.orbits[0].weight().dist_f64(&w0) < 1e-30);
    }

    #[test]
    fn deterministic_given_seed() {
        let cfg = SolverConfig {
            starts: 40,
            seed: 7,
            ..Default::default()
        };
        let t = RuleType::new(0, 2, 0).unwrap();
        assert_eq!(solve_numeric(4, t, &cfg).unwrap(), solve_numeric(4, t, &cfg).unwrap());
    }

    #[test]
    fn inconsistent_type_refused() {
        let t = RuleType::new(0, 1, 0).unwrap();
        assert!(solve_numeric(4, t, &SolverConfig::default()).is_err());
    }
}
