use std::collections::BTreeSet;

use crate::coord::ExtendedCoord;
use crate::deviations::{multisets, Grid};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::model::{MedianInterval, Report};

/// Outputs the mechanism produces while `agent` varies her report over every
/// report on `grid` (at most `max_size` locations) whose median interval is
/// `target`, with the other agents' reports held at `others` (in agent order,
/// skipping `agent`).
pub fn fixed_median_output_set(
    mech: &dyn Mechanism,
    agent: usize,
    target: MedianInterval,
    others: &[Report],
    grid: &Grid,
    max_size: usize,
) -> Result<BTreeSet<ExtendedCoord>> {
    if agent > others.len() {
        return Err(Error::Domain(format!("agent {agent} out of range for {} agents", others.len() + 1)));
    }
    for end in [target.lo, target.hi] {
        if !end.finite().is_some_and(|x| grid.contains(&x)) {
            return Err(Error::Domain(format!("target median endpoint {end} is not a grid point")));
        }
    }
    let mut outputs = BTreeSet::new();
    let mut realized = false;
    for size in 1..=max_size {
        for points in multisets(grid.coords(), size) {
            let report = Report::new(points)?;
            if report.median() != target {
                continue;
            }
            realized = true;
            let mut refs: Vec<&Report> = others.iter().collect();
            refs.insert(agent, &report);
            outputs.insert(mech.outcome(&refs)?);
        }
    }
    if !realized {
        return Err(Error::Domain(format!(
            "no report of at most {max_size} grid locations has median [{}, {}]",
            target.lo, target.hi
        )));
    }
    Ok(outputs)
}

/// A fixed-median output set split around the target interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutputSetShape {
    pub inside: Vec<ExtendedCoord>,
    pub below: Vec<ExtendedCoord>,
    pub above: Vec<ExtendedCoord>,
}

impl OutputSetShape {
    pub fn outside(&self) -> usize {
        self.below.len() + self.above.len()
    }

    /// At most two outputs outside the interval, and when there are two they
    /// lie on opposite sides of it.
    pub fn at_most_two_straddling(&self) -> bool {
        match self.outside() {
            0 | 1 => true,
            2 => self.below.len() == 1 && self.above.len() == 1,
            _ => false,
        }
    }
}

pub fn output_set_shape(outputs: &BTreeSet<ExtendedCoord>, target: &MedianInterval) -> OutputSetShape {
    let mut shape = OutputSetShape { inside: Vec::new(), below: Vec::new(), above: Vec::new() };
    for y in outputs {
        if *y < target.lo {
            shape.below.push(*y);
        } else if *y > target.hi {
            shape.above.push(*y);
        } else {
            shape.inside.push(*y);
        }
    }
    shape
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::Rational;
    use crate::mechanisms::MechanismSpec;

    fn c(v: i64) -> ExtendedCoord {
        ExtendedCoord::int(v)
    }

    #[test]
    fn representative_median_has_a_single_output() {
        let m = MechanismSpec::representative_median(vec![c(1)], Rational::from_integer(1));
        let grid = Grid::range(0, 4);
        for other in [[0], [2], [4]] {
            let set = fixed_median_output_set(
                &m,
                0,
                MedianInterval::point(c(3)),
                &[Report::ints(&other).unwrap()],
                &grid,
                3,
            )
            .unwrap();
            assert_eq!(set.len(), 1);
        }
    }

    #[test]
    fn two_threshold_outputs_straddle_the_target() {
        let m = MechanismSpec::two_threshold(
            Rational::from_integer(0),
            Rational::from_integer(10),
            vec![ExtendedCoord::NegInf, ExtendedCoord::NegInf, ExtendedCoord::PosInf],
            Rational::from_integer(1),
        );
        let grid = Grid::ints(&[-1, 0, 5, 7, 10, 11]).unwrap();
        let target = MedianInterval::point(c(5));
        let set =
            fixed_median_output_set(&m, 0, target, &[Report::ints(&[7]).unwrap()], &grid, 3).unwrap();
        assert!(set.iter().all(|y| *y == c(0) || *y == c(10)));
        let shape = output_set_shape(&set, &target);
        assert!(shape.at_most_two_straddling());
    }

    #[test]
    fn constant_probe() {
        let m = MechanismSpec::constant(c(3));
        let set = fixed_median_output_set(
            &m,
            1,
            MedianInterval::new(c(0), c(2)).unwrap(),
            &[Report::ints(&[4]).unwrap()],
            &Grid::range(0, 4),
            2,
        )
        .unwrap();
        assert_eq!(set.into_iter().collect::<Vec<_>>(), vec![c(3)]);
    }

    #[test]
    fn unrealizable_target_is_a_domain_error() {
        let m = MechanismSpec::constant(c(3));
        let target = MedianInterval::new(c(0), c(2)).unwrap();
        let r = fixed_median_output_set(&m, 0, target, &[], &Grid::range(0, 4), 1);
        assert!(matches!(r, Err(Error::Domain(_))));
        let off_grid = MedianInterval::point(ExtendedCoord::ratio(1, 2));
        assert!(fixed_median_output_set(&m, 0, off_grid, &[], &Grid::range(0, 4), 3).is_err());
    }
}
