//! From areal coordinates to the `(p, q)` invariants and back.

use trisym::exactnum::{rat, Complex};
use trisym::triangle::{areal_from_pq, expand_orbit, pq_from_areal, ArealPoint, Orbit};

fn main() -> trisym::Result<()> {
    let pt = ArealPoint::new(rat(1, 10), rat(3, 10), rat(3, 5));
    let (p, q) = pq_from_areal(&pt);
    println!("(1/10, 3/10, 3/5) -> p = {p}, q = {q}");

    let prec = 128;
    let (pc, qc) = (Complex::from_rational(&p, prec), Complex::from_rational(&q, prec));
    let back = areal_from_pq(&pc, &qc, prec)?;
    println!("recovered: {} {} {}", back.l[0], back.l[1], back.l[2]);

    // p^3 < q^2: the coordinates are complex
    let outside = areal_from_pq(&Complex::from_f64(0.25, prec), &Complex::from_f64(0.2, prec), prec)?;
    println!("p = 0.25, q = 0.2: {} {} {}", outside.l[0], outside.l[1], outside.l[2]);

    let orbit = Orbit::type2(pc, qc, Complex::from_f64(0.5, prec))?;
    for wp in expand_orbit(&orbit)? {
        let l: Vec<f64> = wp.point.l.iter().map(|c| c.to_f64()).collect();
        println!("  weight {:.6} at {l:.4?}", wp.weight.to_f64());
    }
    Ok(())
}
