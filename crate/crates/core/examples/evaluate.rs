//! Evaluate every mechanism kind on one profile and show each agent's loss.

use facloc::mechanisms::catalog;
use facloc::{Mechanism, Profile};

fn main() -> facloc::Result<()> {
    let profile = Profile::ints(&[&[2, 4], &[2], &[4]])?;
    println!("profile: {}", profile.reports().iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" "));
    for m in catalog(3) {
        let out = m.evaluate(&profile)?;
        let losses: Vec<String> = profile.losses_at(&out).iter().map(|l| l.to_string()).collect();
        println!("{:<56} -> {:>4}  losses [{}]", m.label(), out.to_string(), losses.join(", "));
    }
    Ok(())
}
