//! Equation counts and the rule types that can reach each degree.

use trisym::system::{check_consistency, consistent_types, minimal_type, num_equations};
use trisym::triangle::RuleType;

fn main() -> trisym::Result<()> {
    println!("{:>3} {:>4} {:>10} {:>6}", "d", "n_e", "minimal", "points");
    for d in 1..=20 {
        let t = minimal_type(d)?;
        println!("{d:>3} {:>4} {:>10} {:>6}", num_equations(d)?, t.to_string(), t.npoints());
    }
    println!("degree 7 types up to 16 points:");
    for t in consistent_types(7, 16)? {
        println!("  {t} ({} points)", t.npoints());
    }
    if let Err(e) = check_consistency(7, RuleType::new(1, 1, 0)?) {
        println!("{e}");
    }
    Ok(())
}
