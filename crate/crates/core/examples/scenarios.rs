//! Run the named scenarios and print each claim.

use facloc::scenarios::{run_scenario, NAMES};

fn main() -> facloc::Result<()> {
    let filter = std::env::args().nth(1);
    for name in NAMES.iter().filter(|n| filter.as_deref().is_none_or(|f| f == **n)) {
        let report = run_scenario(name)?;
        println!("{} [{}]", report.name, if report.pass() { "pass" } else { "FAIL" });
        for c in &report.claims {
            println!("  {} {}: expected {}, observed {}", if c.pass { "ok " } else { "BAD" }, c.description, c.expected, c.observed);
        }
    }
    Ok(())
}
