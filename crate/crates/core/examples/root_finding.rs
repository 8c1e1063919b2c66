//! Roots of a rational polynomial and of a polynomial given by its
//! signed elementary symmetric functions.

use trisym::exactnum::{elem_sym, poly_roots, roots_from_elem, Complex, UniPoly};

fn main() -> trisym::Result<()> {
    // 3x^2 - 4x - 2, whose positive root fixes the degree-4 rule
    let p = UniPoly::from_fracs(&[(-2, 1), (-4, 1), (3, 1)]);
    for r in poly_roots(&p, 256)? {
        println!("{r}");
    }

    let prec = 200;
    let xs: Vec<Complex> = [0.25, -0.5, 0.75].iter().map(|&x| Complex::from_f64(x, prec)).collect();
    let tilde = elem_sym(&xs);
    for r in roots_from_elem(&tilde, prec)? {
        println!("{r}");
    }
    Ok(())
}
