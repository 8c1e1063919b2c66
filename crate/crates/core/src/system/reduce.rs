//! Elimination of the median orbits.
//!
//! The median-orbit moments `m_s = sum_k v_k u_k^s` obey the linear
//! recurrence `sum_k J_{i-k} ut_k = 0` whose coefficients `ut_k` are the
//! signed elementary symmetric polynomials of the `u_k`. Each `J_s` is an
//! exact moment minus the general-orbit contribution, so once the general
//! orbits are known the median orbits follow from linear algebra and one
//! univariate root extraction.

use std::collections::BTreeMap;

use rug::Rational;

use super::{MPoly, MomentSystem};
use crate::exactnum::{roots_from_elem, solve_complex, Complex, SolveFailure};
use crate::moments::moment;
use crate::triangle::{CubatureRule, Orbit, Provenance, RuleType};
use crate::{Error, Result};

/// One recurrence row `sum_{k=0}^{n1} J_{i-k} ut_k = 0` with `ut_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearRow {
    pub i: u32,
    pub poly: MPoly,
}

/// The moment system rewritten in the variables
/// `ut_1..ut_n1`, an unknown `J1` when there is no centroid, and the
/// general-orbit triples `(p_k, q_k, w_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedSystem {
    pub degree: u32,
    pub rtype: RuleType,
    pub n_ut: usize,
    pub j1: Option<usize>,
    pub type2_offset: usize,
    pub nvars: usize,
    /// `J_i` for every `i` in `0..=d` except 1, over the general-orbit
    /// variables.
    pub j_exprs: BTreeMap<u32, MPoly>,
    pub linear_rows: Vec<LinearRow>,
    /// The recurrence rows with `J1` eliminated.
    pub eliminated: Vec<MPoly>,
    /// Equations that involve the general orbits only.
    pub interior: Vec<MPoly>,
}

impl ReducedSystem {
    /// Index of `ut_k`, `k >= 1`.
    pub fn ut(&self, k: usize) -> usize {
        assert!(k >= 1 && k <= self.n_ut, "ut index out of range");
        k - 1
    }

    pub fn p(&self, k: usize) -> usize {
        self.type2_offset + 3 * k
    }

    pub fn q(&self, k: usize) -> usize {
        self.p(k) + 1
    }

    pub fn w(&self, k: usize) -> usize {
        self.p(k) + 2
    }

    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = (1..=self.n_ut).map(|k| format!("ut{k}")).collect();
        if self.j1.is_some() {
            out.push("J1".into());
        }
        for k in 1..=self.rtype.n2 {
            out.extend([format!("p{k}"), format!("q{k}"), format!("w{k}")]);
        }
        out
    }

    /// The system left after elimination: recurrence rows free of `J1`
    /// followed by the interior equations.
    pub fn equations(&self) -> impl Iterator<Item = &MPoly> {
        self.eliminated.iter().chain(self.interior.iter())
    }

    /// Numeric `J_i` for given general-orbit values.
    pub fn j_values(&self, type2: &[[Complex; 3]], prec: u32) -> BTreeMap<u32, Complex> {
        let mut x = vec![Complex::zero(prec); self.nvars];
        for (k, t) in type2.iter().enumerate() {
            x[self.p(k)] = t[0].clone();
            x[self.q(k)] = t[1].clone();
            x[self.w(k)] = t[2].clone();
        }
        let like = Complex::zero(prec);
        self.j_exprs.iter().map(|(&i, e)| (i, e.eval(&x, &like))).collect()
    }
}

/// `J_i` as a polynomial, or `None` for the unknown `J_1`.
fn j_expr(i: u32, n2: usize, p: impl Fn(usize) -> usize) -> Option<MPoly> {
    let (j, with_q) = match i {
        1 => return None,
        _ if i.is_multiple_of(2) => (i / 2, false),
        _ => ((i - 3) / 2, true),
    };
    let exact = moment(j, with_q as u32);
    let mut e = MPoly::constant(exact);
    for k in 0..n2 {
        let mut term = &MPoly::var(p(k) + 2) * &MPoly::var_pow(p(k), j);
        if with_q {
            term = &term * &MPoly::var(p(k) + 1);
        }
        e = &e - &term;
    }
    Some(e)
}

/// Rewrites a moment system in terms of the recurrence coefficients of
/// its median orbits and eliminates the unknown `J_1`.
pub fn reduce_system(ms: &MomentSystem) -> Result<ReducedSystem> {
    let d = ms.degree;
    let t = ms.rtype;
    let n1 = t.n1 as usize;
    let n2 = t.n2 as usize;
    let j1 = (t.n0 == 0).then_some(n1);
    let type2_offset = n1 + j1.is_some() as usize;
    let nvars = type2_offset + 3 * n2;
    let p = |k: usize| type2_offset + 3 * k;

    let mut j_exprs = BTreeMap::new();
    for i in (0..=d).filter(|&i| i != 1) {
        j_exprs.insert(i, j_expr(i, n2, p).expect("index is not 1"));
    }
    let j_poly = |i: u32| -> MPoly {
        match i {
            1 => MPoly::var(j1.expect("J1 only occurs in rows of rules without a centroid")),
            _ => j_exprs[&i].clone(),
        }
    };

    let first = if t.n0 == 1 { n1 as u32 + 2 } else { n1 as u32 };
    let mut linear_rows = Vec::new();
    for i in first..=d {
        let mut row = j_poly(i);
        for k in 1..=n1 {
            row = &row + &(&j_poly(i - k as u32) * &MPoly::var(k - 1));
        }
        linear_rows.push(LinearRow { i, poly: row });
    }

    let mut eliminated = Vec::new();
    let mut pending: Option<(MPoly, MPoly)> = None;
    for row in &linear_rows {
        match j1.filter(|&v| row.poly.contains_var(v)) {
            None => eliminated.push(row.poly.clone()),
            Some(v) => {
                let a = row.poly.coeff_of(v, 0);
                let b = row.poly.coeff_of(v, 1);
                assert!(row.poly.degree_in(v) == 1, "J1 enters each row linearly");
                match pending.take() {
                    None => pending = Some((a, b)),
                    Some((a0, b0)) => eliminated.push(&(&a0 * &b) - &(&a * &b0)),
                }
            }
        }
    }

    let offset_full = (t.n0 + 2 * t.n1) as usize;
    let interior = ms
        .equations
        .iter()
        .filter(|e| matches!(e.kind, super::EquationKind::Interior { .. }))
        .map(|e| e.poly.map_vars(|v| v - offset_full + type2_offset))
        .collect();

    Ok(ReducedSystem {
        degree: d,
        rtype: t,
        n_ut: n1,
        j1,
        type2_offset,
        nvars,
        j_exprs,
        linear_rows,
        eliminated,
        interior,
    })
}

fn linear_tol(prec: u32) -> f64 {
    2f64.powi(-(prec as i32 * 3 / 8).min(1000))
}

/// Solves the recurrence rows free of `J1` for `ut`, then recovers the
/// median orbits and the centroid weight.
pub fn backsubstitute(
    rs: &ReducedSystem,
    type2: &[[Complex; 3]],
    prec: u32,
    provenance: Provenance,
) -> Result<CubatureRule> {
    let n1 = rs.n_ut;
    if n1 == 0 {
        return backsubstitute_from_ut(rs, type2, &[], prec, provenance);
    }
    let jv = rs.j_values(type2, prec);
    let rows: Vec<u32> = rs.linear_rows.iter().map(|r| r.i).filter(|&i| i >= n1 as u32 + 2).collect();
    if rows.len() < n1 {
        return Err(Error::Underdetermined(format!(
            "{} recurrence rows free of J1 for {n1} unknowns",
            rows.len()
        )));
    }
    let a = rows
        .iter()
        .map(|&i| (1..=n1).map(|k| jv[&(i - k as u32)].clone()).collect())
        .collect();
    let b = rows.iter().map(|&i| -jv[&i].clone()).collect();
    let ut = solve_complex(a, b, linear_tol(prec)).map_err(|f| match f {
        SolveFailure::RankDeficient { rank } => {
            Error::Underdetermined(format!("recurrence block has rank {rank} < {n1}"))
        }
        SolveFailure::Inconsistent(m) => {
            Error::NoSolution(format!("recurrence rows are inconsistent (relative misfit {m:e})"))
        }
    })?;
    backsubstitute_from_ut(rs, type2, &ut, prec, provenance)
}

/// Back-substitution when `ut_1..ut_n1` are already known.
pub fn backsubstitute_from_ut(
    rs: &ReducedSystem,
    type2: &[[Complex; 3]],
    ut: &[Complex],
    prec: u32,
    provenance: Provenance,
) -> Result<CubatureRule> {
    let n1 = rs.n_ut;
    assert_eq!(ut.len(), n1, "one recurrence coefficient per median orbit");
    assert_eq!(type2.len(), rs.rtype.n2 as usize, "one triple per general orbit");
    let jv = rs.j_values(type2, prec);
    let mut orbits = Vec::with_capacity(rs.rtype.norbits() as usize);
    let mut total = Complex::zero(prec);
    for t in type2 {
        total = total + t[2].clone();
    }

    if n1 > 0 {
        let mut tilde = vec![Complex::one(prec)];
        tilde.extend(ut.iter().cloned());
        let u = roots_from_elem(&tilde, prec)?;
        let sep = 2f64.powi(-(prec as i32 / 3));
        for (a, ua) in u.iter().enumerate() {
            if ua.abs_f64() <= sep {
                return Err(Error::DegenerateSolution("a median orbit collapses onto the centroid".into()));
            }
            if u[a + 1..].iter().any(|ub| ua.dist_f64(ub) <= sep * (1.0 + ua.abs_f64())) {
                return Err(Error::DegenerateSolution("two median orbits coincide".into()));
            }
        }
        let powers: Vec<u32> = if rs.rtype.n0 == 0 { vec![0] } else { vec![] }
            .into_iter()
            .chain(2..)
            .take(n1)
            .collect();
        let a = powers
            .iter()
            .map(|&s| u.iter().map(|x| x.powu(s)).collect())
            .collect();
        let b = powers.iter().map(|s| jv[s].clone()).collect();
        let v = solve_complex(a, b, linear_tol(prec))
            .map_err(|_| Error::DegenerateSolution("singular Vandermonde system for the median weights".into()))?;
        for (ui, vi) in u.into_iter().zip(v) {
            total = total + vi.clone();
            orbits.push(Orbit::type1(ui, vi)?);
        }
    }
    for t in type2 {
        orbits.push(Orbit::type2(t[0].clone(), t[1].clone(), t[2].clone())?);
    }
    if rs.rtype.n0 == 1 {
        let w0 = Complex::from_rational(&Rational::from(1), prec) - total;
        orbits.insert(0, Orbit::Type0 { w0 });
    }
    CubatureRule::new(rs.degree, orbits, provenance)
}
