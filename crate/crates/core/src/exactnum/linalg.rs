use rug::Float;

use super::Complex;

/// Why a dense solve failed.
#[derive(Clone, Debug, PartialEq)]
pub enum SolveFailure {
    /// Fewer independent rows than unknowns.
    RankDeficient { rank: usize },
    /// Overdetermined rows disagree; carries the largest relative misfit.
    Inconsistent(f64),
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
///
/// `a` may have more rows than columns; the extra rows must then be
/// satisfied to relative tolerance `tol`. A pivot below `tol` times the
/// largest entry of its column counts as zero.
pub fn solve_complex(
    mut a: Vec<Vec<Complex>>,
    mut b: Vec<Complex>,
    tol: f64,
) -> Result<Vec<Complex>, SolveFailure> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    assert_eq!(b.len(), m, "right-hand side length mismatch");
    if m < n {
        return Err(SolveFailure::RankDeficient { rank: m });
    }
    let scale: Vec<f64> = (0..n)
        .map(|c| a.iter().map(|row| row[c].abs_f64()).fold(0.0, f64::max))
        .collect();
    for col in 0..n {
        let (piv, mag) = (col..m)
            .map(|r| (r, a[r][col].abs_f64()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if mag <= tol * scale[col] || mag == 0.0 {
            return Err(SolveFailure::RankDeficient { rank: col });
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in col + 1..m {
            if a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone() * inv.clone();
            for c in col..n {
                let t = f.clone() * a[col][c].clone();
                a[r][c] = a[r][c].clone() - t;
            }
            b[r] = b[r].clone() - f * b[col].clone();
        }
    }
    let bscale = b.iter().map(Complex::abs_f64).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let misfit = b[n..].iter().map(|x| x.abs_f64() / bscale).fold(0.0, f64::max);
    if misfit > tol {
        return Err(SolveFailure::Inconsistent(misfit));
    }
    let prec = b.first().map_or(64, Complex::prec);
    let mut x = vec![Complex::zero(prec); n];
    for r in (0..n).rev() {
        let mut acc = b[r].clone();
        for c in r + 1..n {
            acc = acc - a[r][c].clone() * x[c].clone();
        }
        x[r] = acc / a[r][r].clone();
    }
    Ok(x)
}

/// Real square solve; a thin wrapper over [`solve_complex`].
pub fn solve_real(a: &[Vec<Float>], b: &[Float], tol: f64) -> Result<Vec<Float>, SolveFailure> {
    let ac = a
        .iter()
        .map(|row| row.iter().cloned().map(Complex::from_real).collect())
        .collect();
    let bc = b.iter().cloned().map(Complex::from_real).collect();
    Ok(solve_complex(ac, bc, tol)?.into_iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    fn c(n: i64, d: i64) -> Complex {
        Complex::from_rational(&rat(n, d), 128)
    }

    #[test]
    fn square_and_overdetermined() {
        // x + y = 3, x - y = 1, 2x + y = 5
        let a = vec![vec![c(1, 1), c(1, 1)], vec![c(1, 1), c(-1, 1)], vec![c(2, 1), c(1, 1)]];
        let b = vec![c(3, 1), c(1, 1), c(5, 1)];
        let x = solve_complex(a.clone(), b.clone(), 1e-30).unwrap();
        assert!(x[0].dist_f64(&c(2, 1)) < 1e-35 && x[1].dist_f64(&c(1, 1)) < 1e-35);
        let mut bad = b;
        bad[2] = c(6, 1);
        assert!(matches!(solve_complex(a, bad, 1e-30), Err(SolveFailure::Inconsistent(_))));
    }

    #[test]
    fn singular_detected() {
        let a = vec![vec![c(1, 1), c(2, 1)], vec![c(2, 1), c(4, 1)]];
        let b = vec![c(1, 1), c(2, 1)];
        assert_eq!(solve_complex(a, b, 1e-30), Err(SolveFailure::RankDeficient { rank: 1 }));
    }
}
