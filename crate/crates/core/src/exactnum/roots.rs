//! Simultaneous (Aberth–Ehrlich) root extraction at MPFR precision.

use std::cmp::Ordering;

use rug::Float;

use super::{Complex, UniPoly};
use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 4000;

/// All complex roots of `p`, with multiplicity, sorted by real part then
/// imaginary part.
pub fn poly_roots(p: &UniPoly, prec: u32) -> Result<Vec<Complex>> {
    let coeffs: Vec<Complex> = p
        .coeffs()
        .iter()
        .map(|c| Complex::from_rational(c, prec))
        .collect();
    roots_of_complex_poly(&coeffs, prec)
}

/// Roots of `sum_j tilde[n-j] x^j`, the inverse of [`super::elem_sym`].
pub fn roots_from_elem(tilde: &[Complex], prec: u32) -> Result<Vec<Complex>> {
    let coeffs: Vec<Complex> = tilde.iter().rev().cloned().collect();
    roots_of_complex_poly(&coeffs, prec)
}

/// Roots of the polynomial with complex coefficients `coeffs`, lowest
/// power first.
pub fn roots_of_complex_poly(coeffs: &[Complex], prec: u32) -> Result<Vec<Complex>> {
    let mut coeffs: Vec<Complex> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Err(Error::ConstantPolynomial(degree));
    }
    let mut roots = Vec::with_capacity(degree);
    // exact zero roots are split off so they come back as exact zeros
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    roots.extend((0..zeros).map(|_| Complex::zero(prec)));
    let rest: Vec<Complex> = coeffs[zeros..].iter().map(|c| with_prec(c, prec)).collect();
    if rest.len() > 1 {
        roots.extend(aberth(&rest, prec)?);
    }
    sort_roots(&mut roots, prec);
    Ok(roots)
}

fn with_prec(c: &Complex, prec: u32) -> Complex {
    Complex {
        re: Float::with_val(prec, &c.re),
        im: Float::with_val(prec, &c.im),
    }
}

/// Value and derivative by Horner's rule.
fn horner(coeffs: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.prec();
    let mut p = Complex::zero(prec);
    let mut dp = Complex::zero(prec);
    for c in coeffs.iter().rev() {
        dp = dp * z.clone() + p.clone();
        p = p * z.clone() + c.clone();
    }
    (p, dp)
}

/// `sum |c_j| |z|^j`, the scale against which a residual is judged.
fn magnitude(coeffs: &[Complex], z: &Complex) -> Float {
    let r = z.abs();
    let mut acc = Float::new(z.prec());
    for c in coeffs.iter().rev() {
        acc *= &r;
        acc += c.abs();
    }
    acc
}

fn aberth(coeffs: &[Complex], prec: u32) -> Result<Vec<Complex>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].clone();
    let monic: Vec<Complex> = coeffs.iter().map(|c| c.clone() / lead.clone()).collect();

    // start on a circle around the root centroid, radius from the
    // geometric mean of the root moduli
    let centre = monic[n - 1].clone() / Complex::from_f64(-(n as f64), prec);
    let radius = {
        let c0 = monic[0].abs_f64();
        let r = if c0 > 0.0 { c0.powf(1.0 / n as f64) } else { 1.0 };
        r.max(1e-3) + centre.abs_f64()
    };
    let mut z: Vec<Complex> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            centre.clone() + Complex::from_parts_f64(radius * theta.cos(), radius * theta.sin(), prec)
        })
        .collect();

    let step_tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32 - 12)));
    let mut converged = vec![false; n];
    for iteration in 0..MAX_ITERATIONS {
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (p, dp) = horner(&monic, &z[k]);
            if p.is_zero() {
                converged[k] = true;
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex::zero(prec);
            for j in 0..n {
                if j != k {
                    repulsion = repulsion + (z[k].clone() - z[j].clone()).recip();
                }
            }
            let denom = Complex::one(prec) - ratio.clone() * repulsion;
            let step = ratio / denom;
            let step_abs = step.abs();
            let scale = Float::with_val(prec, 1 + z[k].abs());
            let rel = Float::with_val(prec, &step_abs / &scale);
            if rel <= step_tol {
                converged[k] = true;
            }
            z[k] = z[k].clone() - step;
        }
        if converged.iter().all(|&c| c) || (iteration > 8 && backward_error_ok(&monic, &z, prec)) {
            return Ok(z);
        }
    }
    if backward_error_ok(&monic, &z, prec) {
        return Ok(z);
    }
    Err(Error::RootNotConverged {
        iterations: MAX_ITERATIONS,
        residual: worst_relative_residual(&monic, &z),
    })
}

fn worst_relative_residual(coeffs: &[Complex], z: &[Complex]) -> f64 {
    z.iter()
        .map(|zk| {
            let (p, _) = horner(coeffs, zk);
            let m = magnitude(coeffs, zk);
            (p.abs() / m).to_f64()
        })
        .fold(0.0, f64::max)
}

/// Every residual is within a few ulps of the evaluation scale. This is
/// the attainable accuracy at clustered or multiple roots, where Aberth
/// converges only linearly.
fn backward_error_ok(coeffs: &[Complex], z: &[Complex], prec: u32) -> bool {
    let bound = f64::powi(2.0, -(prec as i32 - 24));
    worst_relative_residual(coeffs, z) <= bound
}

/// Ascending real part; roots whose real parts agree to about a quarter of
/// the working precision (conjugate pairs, repeated roots) are ordered by
/// imaginary part.
fn sort_roots(roots: &mut [Complex], prec: u32) {
    roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal));
    let tol = f64::powi(2.0, -(prec as i32 / 4)).max(1e-30);
    let mut start = 0;
    while start < roots.len() {
        let mut end = start + 1;
        while end < roots.len() {
            let gap = Float::with_val(prec, &roots[end].re - &roots[end - 1].re).abs();
            let scale = 1.0 + roots[end].re.to_f64().abs();
            if gap.to_f64() > tol * scale {
                break;
            }
            end += 1;
        }
        roots[start..end].sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal));
        start = end;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{elem_sym, rat};

    fn c(x: f64) -> Complex {
        Complex::from_f64(x, 256)
    }

    #[test]
    fn quadratic_from_four_point_rule() {
        // 3x^2 - 4x - 2
        let p = UniPoly::from_fracs(&[(-2, 1), (-4, 1), (3, 1)]);
        let r = poly_roots(&p, 256).unwrap();
        let s10 = Float::with_val(256, 10).sqrt();
        let lo = (Float::with_val(256, 2) - &s10) / 3;
        let hi = (Float::with_val(256, 2) + &s10) / 3;
        assert!(r[0].dist_f64(&Complex::from_real(lo)) < 1e-60);
        assert!(r[1].dist_f64(&Complex::from_real(hi)) < 1e-60);
        assert!((r[0].re_f64() + 0.38743).abs() < 1e-5);
        assert!((r[1].re_f64() - 1.72076).abs() < 1e-5);
    }

    #[test]
    fn half_roots() {
        let p = UniPoly::from_fracs(&[(-1, 4), (0, 1), (1, 1)]);
        let r = poly_roots(&p, 256).unwrap();
        assert!(r[0].dist_f64(&c(-0.5)) < 1e-70);
        assert!(r[1].dist_f64(&c(0.5)) < 1e-70);
    }

    #[test]
    fn centroid_cubic_triple_root() {
        let tilde = [c(1.0), c(-1.0), Complex::from_rational(&rat(1, 3), 256), Complex::from_rational(&rat(-1, 27), 256)];
        let r = roots_from_elem(&tilde, 256).unwrap();
        assert_eq!(r.len(), 3);
        let third = Complex::from_rational(&rat(1, 3), 256);
        for z in &r {
            // a triple root is only attainable to about a third of the digits
            assert!(z.dist_f64(&third) < 1e-20, "{z}");
        }
    }

    #[test]
    fn zero_and_double_root() {
        let tilde = [c(1.0), c(-1.0), c(0.25), c(0.0)];
        let r = roots_from_elem(&tilde, 256).unwrap();
        assert!(r[0].is_zero());
        assert!(r[1].dist_f64(&c(0.5)) < 1e-30);
        assert!(r[2].dist_f64(&c(0.5)) < 1e-30);
    }

    #[test]
    fn conjugate_pair_ordering() {
        // x^2 + 1
        let r = poly_roots(&UniPoly::from_fracs(&[(1, 1), (0, 1), (1, 1)]), 256).unwrap();
        assert!(r[0].im_f64() < 0.0 && r[1].im_f64() > 0.0);
        assert!(r[0].re_f64().abs() < 1e-60);
    }

    #[test]
    fn constant_rejected() {
        assert!(matches!(
            poly_roots(&UniPoly::from_fracs(&[(3, 1)]), 256),
            Err(Error::ConstantPolynomial(0))
        ));
    }

    #[test]
    fn elem_sym_inverse() {
        let vals: Vec<Complex> = [0.1, -1.7, 0.35, 1.2].iter().map(|&x| c(x)).collect();
        let tilde = elem_sym(&vals);
        let roots = roots_from_elem(&tilde, 256).unwrap();
        let mut sorted = vals.clone();
        sorted.sort_by(|a, b| a.lex_cmp(b));
        for (a, b) in roots.iter().zip(&sorted) {
            assert!(a.dist_f64(b) < 1e-60);
        }
    }
}
