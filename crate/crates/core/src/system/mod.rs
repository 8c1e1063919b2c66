//! Rule-type combinatorics and the polynomial moment system.
//!
//! A rule of type `[n0, n1, n2]` has `n_v = n0 + 2 n1 + 3 n2` unknowns:
//! the centroid weight `w0`, a `(u, v)` pair per median orbit and a
//! `(p, q, w)` triple per general orbit. Exactness up to degree `d` is
//! `n_e` polynomial equations in those unknowns.

mod mpoly;
mod reduce;

use rug::Rational;

pub use mpoly::{MPoly, Monomial};
pub use reduce::{backsubstitute, backsubstitute_from_ut, reduce_system, LinearRow, ReducedSystem};

use crate::exactnum::{Complex, Scalar};
use crate::moments::moment;
use crate::triangle::{Orbit, OrbitKind, RuleType};
use crate::{Error, Result};

fn check_degree(d: u32) -> Result<()> {
    if d == 0 {
        Err(Error::InvalidDegree(0))
    } else {
        Ok(())
    }
}

/// Number of moment equations for degree `d`: `1 + floor((d^2 + 6d)/12)`.
pub fn num_equations(d: u32) -> Result<u32> {
    check_degree(d)?;
    Ok(1 + (d * d + 6 * d) / 12)
}

/// Checks the counting conditions a zero-dimensional rule type must meet.
pub fn check_consistency(d: u32, t: RuleType) -> Result<()> {
    let ne = num_equations(d)? as i64;
    let fail = |condition: &str| {
        Err(Error::InconsistentType {
            degree: d,
            rtype: t,
            condition: condition.to_string(),
        })
    };
    if 3 * (t.n2 as i64) < ne - d as i64 {
        return fail(&format!("3*n2 >= n_e - d = {}", ne - d as i64));
    }
    if (t.nvars() as i64) < ne {
        return fail(&format!("n0 + 2*n1 + 3*n2 >= n_e = {ne}"));
    }
    Ok(())
}

/// Every type meeting the consistency conditions with at most
/// `max_points` points, by point count and then by number of general
/// orbits.
pub fn consistent_types(d: u32, max_points: u32) -> Result<Vec<RuleType>> {
    check_degree(d)?;
    let mut out = Vec::new();
    for n2 in 0..=max_points / 6 {
        for n1 in 0..=(max_points - 6 * n2) / 3 {
            for n0 in 0..=1u32 {
                let t = RuleType::new(n0, n1, n2)?;
                if t.npoints() <= max_points && check_consistency(d, t).is_ok() {
                    out.push(t);
                }
            }
        }
    }
    out.sort_by_key(|t| (t.npoints(), t.n2, t.n0));
    Ok(out)
}

/// The type with the fewest points among those meeting the consistency
/// conditions with equality where possible.
pub fn minimal_type(d: u32) -> Result<RuleType> {
    let ne = num_equations(d)?;
    let n2 = (ne + 2 - d) / 3;
    let n1 = (ne - 3 * n2) / 2;
    let n0 = ne - 3 * n2 - 2 * n1;
    RuleType::new(n0, n1, n2)
}

/// Positions of the unknowns of a rule type in a flat vector: `w0` first,
/// then `(u_k, v_k)` pairs, then `(p_k, q_k, w_k)` triples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarLayout {
    pub rtype: RuleType,
}

impl VarLayout {
    pub fn new(rtype: RuleType) -> Self {
        VarLayout { rtype }
    }

    pub fn len(&self) -> usize {
        self.rtype.nvars() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn w0(&self) -> Option<usize> {
        (self.rtype.n0 == 1).then_some(0)
    }

    /// `k` counts from zero here and in the accessors below.
    pub fn u(&self, k: usize) -> usize {
        self.rtype.n0 as usize + 2 * k
    }

    pub fn v(&self, k: usize) -> usize {
        self.u(k) + 1
    }

    pub fn p(&self, k: usize) -> usize {
        (self.rtype.n0 + 2 * self.rtype.n1) as usize + 3 * k
    }

    pub fn q(&self, k: usize) -> usize {
        self.p(k) + 1
    }

    pub fn w(&self, k: usize) -> usize {
        self.p(k) + 2
    }

    /// Printable names, numbered from 1.
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::with_capacity(self.len());
        if self.rtype.n0 == 1 {
            out.push("w0".to_string());
        }
        for k in 1..=self.rtype.n1 {
            out.push(format!("u{k}"));
            out.push(format!("v{k}"));
        }
        for k in 1..=self.rtype.n2 {
            out.push(format!("p{k}"));
            out.push(format!("q{k}"));
            out.push(format!("w{k}"));
        }
        out
    }

    /// Flattens orbits (in any order) into this layout; the kinds must
    /// match the rule type.
    pub fn values_from_orbits(&self, orbits: &[Orbit]) -> Result<Vec<Complex>> {
        let t = crate::triangle::type_of(orbits)?;
        if t != self.rtype {
            return Err(Error::NotFound(format!("orbits have type {t}, expected {}", self.rtype)));
        }
        let mut out = Vec::with_capacity(self.len());
        for kind in [OrbitKind::Type0, OrbitKind::Type1, OrbitKind::Type2] {
            for o in orbits.iter().filter(|o| o.kind() == kind) {
                out.extend(o.params().into_iter().cloned());
            }
        }
        Ok(out)
    }

    pub fn orbits_from_values(&self, x: &[Complex]) -> Result<Vec<Orbit>> {
        assert_eq!(x.len(), self.len(), "value vector does not match the layout");
        let mut out = Vec::with_capacity(self.rtype.norbits() as usize);
        if let Some(i) = self.w0() {
            out.push(Orbit::Type0 { w0: x[i].clone() });
        }
        for k in 0..self.rtype.n1 as usize {
            out.push(Orbit::type1(x[self.u(k)].clone(), x[self.v(k)].clone())?);
        }
        for k in 0..self.rtype.n2 as usize {
            out.push(Orbit::type2(x[self.p(k)].clone(), x[self.q(k)].clone(), x[self.w(k)].clone())?);
        }
        Ok(out)
    }
}

/// Which moment condition an equation expresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquationKind {
    /// The weights sum to one.
    WeightSum,
    /// `sum v u^(2i+3j) + sum w p^i q^j = I_{i,j}` with `j <= 1`.
    Moment { i: u32, j: u32 },
    /// `sum w (p^3 - q^2) p^i q^j = I_{i+3,j} - I_{i,j+2}`.
    Interior { i: u32, j: u32 },
}

/// One equation, stored as a polynomial that vanishes at a solution.
#[derive(Clone, Debug, PartialEq)]
pub struct Equation {
    pub kind: EquationKind,
    pub poly: MPoly,
}

/// The full moment system of a rule type at a degree.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSystem {
    pub degree: u32,
    pub rtype: RuleType,
    pub vars: VarLayout,
    pub equations: Vec<Equation>,
    pub n_e: u32,
    pub n_v: u32,
}

impl MomentSystem {
    pub fn names(&self) -> Vec<String> {
        self.vars.names()
    }

    pub fn polys(&self) -> impl Iterator<Item = &MPoly> {
        self.equations.iter().map(|e| &e.poly)
    }

    /// Equation values at `x`.
    pub fn evaluate<T: Scalar>(&self, x: &[T], like: &T) -> Vec<T> {
        self.polys().map(|p| p.eval(x, like)).collect()
    }

    /// Largest equation error at `x`.
    pub fn max_residual(&self, x: &[Complex]) -> f64 {
        let Some(like) = x.first() else {
            return self.polys().map(|p| p.constant_term().to_f64().abs()).fold(0.0, f64::max);
        };
        self.evaluate(x, like).iter().map(Complex::abs_f64).fold(0.0, f64::max)
    }

    /// Largest equation error of a rule of this type.
    pub fn orbit_residual(&self, orbits: &[Orbit]) -> Result<f64> {
        Ok(self.max_residual(&self.vars.values_from_orbits(orbits)?))
    }
}

/// Assembles the moment equations of type `t` at degree `d`.
pub fn build_moment_system(d: u32, t: RuleType) -> Result<MomentSystem> {
    let n_e = num_equations(d)?;
    let vars = VarLayout::new(t);
    let n1 = t.n1 as usize;
    let n2 = t.n2 as usize;
    let one = Rational::from(1);
    let mut equations = Vec::with_capacity(n_e as usize);

    let mut sum = MPoly::constant(-one.clone());
    if let Some(i) = vars.w0() {
        sum = &sum + &MPoly::var(i);
    }
    for k in 0..n1 {
        sum = &sum + &MPoly::var(vars.v(k));
    }
    for k in 0..n2 {
        sum = &sum + &MPoly::var(vars.w(k));
    }
    equations.push(Equation {
        kind: EquationKind::WeightSum,
        poly: sum,
    });

    for (i, j) in crate::moments::pq_indices(d) {
        if j > 1 || (i, j) == (0, 0) {
            continue;
        }
        let mut eq = MPoly::constant(-moment(i, j));
        for k in 0..n1 {
            eq = &eq + &(&MPoly::var(vars.v(k)) * &MPoly::var_pow(vars.u(k), 2 * i + 3 * j));
        }
        for k in 0..n2 {
            let term = &(&MPoly::var(vars.w(k)) * &MPoly::var_pow(vars.p(k), i)) * &MPoly::var_pow(vars.q(k), j);
            eq = &eq + &term;
        }
        equations.push(Equation {
            kind: EquationKind::Moment { i, j },
            poly: eq,
        });
    }

    if d >= 6 {
        for (i, j) in crate::moments::pq_indices(d - 6) {
            let rhs = moment(i + 3, j) - moment(i, j + 2);
            let mut eq = MPoly::constant(-rhs);
            for k in 0..n2 {
                let disc = &MPoly::var_pow(vars.p(k), 3) - &MPoly::var_pow(vars.q(k), 2);
                let mono = &MPoly::var_pow(vars.p(k), i) * &MPoly::var_pow(vars.q(k), j);
                eq = &eq + &(&(&MPoly::var(vars.w(k)) * &disc) * &mono);
            }
            equations.push(Equation {
                kind: EquationKind::Interior { i, j },
                poly: eq,
            });
        }
    }
    debug_assert_eq!(equations.len(), n_e as usize);
    Ok(MomentSystem {
        degree: d,
        rtype: t,
        vars,
        equations,
        n_e,
        n_v: t.nvars(),
    })
}
