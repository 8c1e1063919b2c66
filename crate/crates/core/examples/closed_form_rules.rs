//! Every closed-form rule type, with solution counts per quality.

use trisym::exactnum::DEFAULT_PRECISION;
use trisym::solver::{analytic_types, solve_analytic};

fn main() -> trisym::Result<()> {
    for (d, t) in analytic_types() {
        let set = solve_analytic(d, t, DEFAULT_PRECISION)?;
        println!("d={d} {t:<8} {set}");
        for rule in set.rules().filter(|r| r.is_real()) {
            let w: Vec<String> = rule.orbits.iter().map(|o| format!("{:.6}", o.weight().re_f64())).collect();
            println!("    {}  weights {}", rule.quality, w.join(" "));
        }
    }
    Ok(())
}
