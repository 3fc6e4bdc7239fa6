//! Pareto efficiency of outputs, pointwise and over a search space.

use facloc::scenarios::{two_threshold_config, two_threshold_mechanism};
use facloc::verify::{check_efficient, dominating_location, pareto_optimal};
use facloc::{ExtendedCoord, Profile};

fn main() -> facloc::Result<()> {
    let profile = Profile::ints(&[&[0, 4], &[2]])?;
    for y in [1, 2, 3] {
        let y = ExtendedCoord::int(y);
        println!("y = {y}: pareto optimal {}, dominated by {:?}", pareto_optimal(&profile, &y), dominating_location(&profile, &y).map(|d| d.to_string()));
    }

    let mech = two_threshold_mechanism();
    let verdict = check_efficient(&mech, &two_threshold_config())?;
    println!("{mech}: efficient {}", verdict.pass);
    if let Some(w) = verdict.witness {
        println!("output {} is dominated by {}", w.output_before, w.output_after);
    }
    Ok(())
}
