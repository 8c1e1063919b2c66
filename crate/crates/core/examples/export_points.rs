//! Integrating over an arbitrary triangle with an exported rule.

use trisym::cli::cartesian_points;
use trisym::rulesdb::lookup;
use trisym::triangle::QualityLabel;

fn main() -> trisym::Result<()> {
    let rule = lookup(10, &[QualityLabel::PI])?.rule;
    let tri = [1.0, 0.0, 3.0, 1.0, 0.5, 2.0];
    let pts = cartesian_points(&rule, &tri)?;
    let area: f64 = pts.iter().map(|p| p.0).sum();
    // x^4 y^3 over the triangle, exact for a degree-10 rule
    let integral: f64 = pts.iter().map(|&(w, x, y)| w * x.powi(4) * y.powi(3)).sum();
    println!("{} points, area {area:.15}", pts.len());
    println!("integral of x^4 y^3: {integral:.15}");
    Ok(())
}
