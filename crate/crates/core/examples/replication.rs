//! Compare action sets: the same mechanism against manipulation, replication and hiding.

use facloc::mechanisms::MechanismSpec;
use facloc::verify::check_strategyproof;
use facloc::{Action, ExtendedCoord, ActionSet, Grid, Rational, SearchConfig};

fn main() -> facloc::Result<()> {
    let candidates = [
        MechanismSpec::weighted_relabeled_median(Rational::from_integer(1)),
        MechanismSpec::representative_median(vec![ExtendedCoord::NegInf], Rational::new(1, 2)),
    ];
    for mech in &candidates {
        for action in [Action::Manipulation, Action::Replication, Action::Hiding] {
            let cfg = SearchConfig::new(2, Grid::range(0, 4), 3, ActionSet::new(&[action], 6)?);
            let v = check_strategyproof(mech, &cfg)?;
            let found = match &v.witness {
                Some(w) => format!("agent {} reports {} instead of {}", w.coalition[0], w.deviated_reports[0], w.true_profile.reports()[w.coalition[0]]),
                None => "none".into(),
            };
            println!("{mech} {action:?}: {found}");
        }
    }
    Ok(())
}
