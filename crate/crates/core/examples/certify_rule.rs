//! Certifying the degree of a tabulated rule, then of a damaged copy.

use trisym::exactnum::Complex;
use trisym::moments::{certify_degree, monomial_residual, CertifyTolerances};
use trisym::rulesdb::lookup;
use trisym::triangle::QualityLabel;

fn main() -> trisym::Result<()> {
    let rule = lookup(13, &[QualityLabel::PI])?.rule;
    println!("{:?}", certify_degree(&rule, &CertifyTolerances::CATALOG)?);
    let (r, worst) = monomial_residual(&rule, 13)?;
    println!("monomial residual at 13: {r:.2e} (worst L1^a L2^b L3^c = {worst:?})");

    let mut bad = rule.clone();
    let w = bad.orbits[1].weight_mut();
    *w = w.clone() + Complex::from_f64(1e-6, w.prec());
    println!("weight nudged by 1e-6: {:?}", certify_degree(&bad, &CertifyTolerances::CATALOG)?);
    Ok(())
}
