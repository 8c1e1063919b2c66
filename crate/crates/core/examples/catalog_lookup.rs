//! Best bundled rule per degree, and a full verification pass.

use trisym::rulesdb::{lookup, verify_all};
use trisym::triangle::QualityLabel;

fn main() -> trisym::Result<()> {
    for d in 1..=13 {
        match lookup(d, &[QualityLabel::PI, QualityLabel::NI]) {
            Ok(e) => println!("d={d:<2} {} {:<9} {:>2} points ({})", e.rule.quality, e.rule.rtype.to_string(), e.rule.npoints(), e.source),
            Err(e) => println!("d={d:<2} {e}"),
        }
    }
    let report = verify_all(1e-12)?;
    println!("{} entries verified, all pass: {}", report.entries.len(), report.passed());
    Ok(())
}
