//! Group strategyproofness and its strong variant on the same mechanism.

use facloc::scenarios::strong_gsp_mechanism;
use facloc::verify::{check_group_sp, check_strong_group_sp};
use facloc::{ActionSet, Grid, SearchConfig};

fn main() -> facloc::Result<()> {
    let mech = strong_gsp_mechanism();
    let grid = Grid::ints(&[0, 2, 4, 10])?;
    let cfg = SearchConfig::new(3, grid, 2, ActionSet::manipulation_only()).with_max_coalition(3);

    let weak = check_group_sp(&mech, &cfg)?;
    println!("group sp:        {} ({} triples)", if weak.pass { "pass" } else { "FAIL" }, weak.space_size);

    let strong = check_strong_group_sp(&mech, &cfg)?;
    println!("strong group sp: {} ({} triples)", if strong.pass { "pass" } else { "FAIL" }, strong.space_size);
    if let Some(w) = strong.witness {
        println!("truth {:?}", w.true_profile.reports().iter().map(|r| r.to_string()).collect::<Vec<_>>());
        println!("coalition {:?}, deviators {:?}", w.coalition, w.deviators());
        println!("output {} -> {}", w.output_before, w.output_after);
        let show = |v: &[facloc::ExtendedCoord]| v.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ");
        println!("losses [{}] -> [{}]", show(&w.losses_before), show(&w.losses_after));
    }
    Ok(())
}
