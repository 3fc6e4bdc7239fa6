//! Outputs an agent can reach while keeping a fixed median interval.

use facloc::mechanisms::MechanismSpec;
use facloc::scenarios::two_threshold_mechanism;
use facloc::verify::{fixed_median_output_set, output_set_shape};
use facloc::{ExtendedCoord, Grid, MedianInterval, Rational, Report};

fn show(v: &[ExtendedCoord]) -> Vec<String> {
    v.iter().map(|y| y.to_string()).collect()
}

fn main() -> facloc::Result<()> {
    let grid = Grid::ints(&[-1, 0, 5, 7, 10, 11])?;
    let others = [Report::ints(&[7])?];
    let target = MedianInterval::point(5.into());
    for mech in [
        MechanismSpec::representative_median(vec![0.into()], Rational::from_integer(1)),
        two_threshold_mechanism(),
    ] {
        let outputs = fixed_median_output_set(&mech, 0, target, &others, &grid, 3)?;
        let shape = output_set_shape(&outputs, &target);
        println!("{mech}");
        println!("  reachable: {:?}", show(&outputs.into_iter().collect::<Vec<_>>()));
        println!("  inside {:?}, below {:?}, above {:?}", show(&shape.inside), show(&shape.below), show(&shape.above));
        println!("  at most two outside, on opposite sides: {}", shape.at_most_two_straddling());
    }
    Ok(())
}
