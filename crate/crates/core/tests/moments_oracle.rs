//! Moments against independent estimates: Monte Carlo sampling of the
//! reference triangle and direct lattice counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trisym::exactnum::rat;
use trisym::moments::{monomial_integral, moment, pq_indices, MomentTable};
use trisym::system::num_equations;

/// Uniform point in the triangle by folding the unit square.
fn sample(rng: &mut ChaCha8Rng) -> [f64; 3] {
    let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
    if a + b > 1.0 {
        (a, b) = (1.0 - a, 1.0 - b);
    }
    [a, b, 1.0 - a - b]
}

fn pq(l: [f64; 3]) -> (f64, f64) {
    let e2 = l[0] * l[1] + l[1] * l[2] + l[0] * l[2];
    let e3 = l[0] * l[1] * l[2];
    (1.0 - 3.0 * e2, 1.0 + 13.5 * e3 - 4.5 * e2)
}

#[test]
fn monte_carlo_i40() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 400_000;
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..n {
        let (p, _) = pq(sample(&mut rng));
        let f = p.powi(4);
        sum += f;
        sq += f * f;
    }
    let mean = sum / n as f64;
    let stderr = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
    let exact = moment(4, 0).to_f64();
    assert!((mean - exact).abs() < 5.0 * stderr, "MC {mean} +- {stderr}, exact {exact}");
}

#[test]
fn monte_carlo_mixed_moments() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let n = 200_000;
    let points: Vec<(f64, f64)> = (0..n).map(|_| pq(sample(&mut rng))).collect();
    for (i, j) in [(1, 1), (0, 2), (2, 1), (1, 2)] {
        let vals: Vec<f64> = points.iter().map(|(p, q)| p.powi(i) * q.powi(j)).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
        let exact = moment(i as u32, j as u32).to_f64();
        assert!((mean - exact).abs() < 5.0 * (var / n as f64).sqrt(), "I({i},{j})");
    }
}

#[test]
fn monomials_match_dirichlet_formula() {
    // a! b! c! 2 / (a + b + c + 2)!
    let fact = |n: u32| (1..=n).fold(rug::Integer::from(1), |acc, k| acc * k);
    for a in 0..6 {
        for b in 0..6 {
            for c in 0..4 {
                let want = rug::Rational::from((fact(a) * fact(b) * fact(c) * 2u32, fact(a + b + c + 2)));
                assert_eq!(monomial_integral(a, b, c), want);
            }
        }
    }
}

#[test]
fn vertex_and_centroid_limits() {
    // p and q vanish at the centroid and equal 1 at the vertices
    assert_eq!(moment(0, 0), rat(1, 1));
    assert!(moment(10, 0) < moment(9, 0));
}

#[test]
fn table_size_is_the_lattice_count() {
    for d in 1..=30 {
        let lattice = (0..=d / 2).map(|i| (d - 2 * i) / 3 + 1).sum::<u32>();
        assert_eq!(num_equations(d).unwrap(), lattice);
        assert_eq!(pq_indices(d).len() as u32, lattice);
        assert_eq!(MomentTable::new(d).len() as u32, lattice);
    }
    assert!(num_equations(0).is_err());
}
