//! Multistart search for the real rules of one type.
//!
//! `cargo run --release --example numeric_search -- 10 1,2,3 2000`

use std::time::Instant;

use trisym::solver::{solve_numeric, SolverConfig};
use trisym::triangle::RuleType;

fn main() -> trisym::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: u32 = args.first().map_or(7, |s| s.parse().expect("degree"));
    let t: RuleType = args.get(1).map_or("0,1,2", String::as_str).parse()?;
    let starts = args.get(2).map_or(500, |s| s.parse().expect("starts"));
    let cfg = SolverConfig {
        starts,
        ..Default::default()
    };
    let clock = Instant::now();
    let set = solve_numeric(d, t, &cfg)?;
    println!("degree {d} type {t}: {set} ({:.1}s)", clock.elapsed().as_secs_f64());
    if let Some(diag) = &set.diagnostics {
        println!("{diag:?}");
    }
    for s in &set.solutions {
        println!("  {} residual {:.1e}", s.rule.quality, s.residual);
    }
    Ok(())
}
