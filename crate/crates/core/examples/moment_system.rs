//! The moment equations of a rule type and their reduced form.

use trisym::system::{build_moment_system, reduce_system};

fn main() -> trisym::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let d: u32 = args.first().map_or(5, |s| s.parse().expect("degree"));
    let t = args.get(1).map_or("1,2,0", String::as_str).parse()?;

    let ms = build_moment_system(d, t)?;
    let names = ms.names();
    println!("degree {d} type {t}: {} equations in {} unknowns", ms.n_e, ms.n_v);
    for eq in &ms.equations {
        println!("  {:?}: {} = 0", eq.kind, eq.poly.display(&names));
    }

    let rs = reduce_system(&ms)?;
    let names = rs.names();
    println!("reduced system in {}:", names.join(", "));
    for eq in rs.equations() {
        println!("  {} = 0", eq.display(&names));
    }
    Ok(())
}
