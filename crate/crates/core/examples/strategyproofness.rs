//! Search for a profitable unilateral deviation.

use facloc::scenarios::nonidentifying_mechanism;
use facloc::verify::check_strategyproof;
use facloc::{ActionSet, Grid, SearchConfig};

fn main() -> facloc::Result<()> {
    let mech = nonidentifying_mechanism();
    // The phantom count is tied to the total number of reported points.
    let cfg = SearchConfig::new(2, Grid::range(0, 2), 4, ActionSet::manipulation_only()).with_total_points(5);
    let verdict = check_strategyproof(&mech, &cfg)?;
    println!("{}: searched {} triples", mech, verdict.space_size);
    match verdict.witness {
        Some(w) => {
            println!("{}", serde_json::to_string_pretty(&w).expect("serializable"));
            w.replay(&mech)?;
            println!("witness replays");
        }
        None => println!("no profitable deviation"),
    }
    Ok(())
}
