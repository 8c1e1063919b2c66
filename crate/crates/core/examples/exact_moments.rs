//! Exact area-averaged moments `I_{i,j}` of `p^i q^j` over the triangle.

use trisym::moments::{moment, monomial_integral, MomentTable};

fn main() {
    println!("average of L1^2 L2: {}", monomial_integral(2, 1, 0));
    for (i, j) in [(1, 0), (0, 1), (2, 0), (1, 1), (3, 0), (0, 2), (2, 1)] {
        println!("I({i},{j}) = {}", moment(i, j));
    }
    let table = MomentTable::new(12);
    println!("{} moments up to degree 12", table.len());
}
