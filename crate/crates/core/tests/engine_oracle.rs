//! The memoized search must return exactly the witness a naive
//! profile × coalition × joint-deviation loop finds first.

use itertools::Itertools;

use facloc::deviations::{deviations, multisets};
use facloc::mechanisms::catalog;
use facloc::verify::{self, Property};
use facloc::{
    loss, Action, ActionSet, ExtendedCoord, Grid, Mechanism, MechanismSpec, Profile, Rational, Report, SearchConfig,
};

struct Found {
    profile: Profile,
    coalition: Vec<usize>,
    reports: Vec<Report>,
    before: ExtendedCoord,
    after: ExtendedCoord,
}

fn truthful_reports(cfg: &SearchConfig) -> Vec<Report> {
    (1..=cfg.max_true_size)
        .filter(|s| !cfg.odd_true_sizes || s % 2 == 1)
        .flat_map(|s| multisets(cfg.grid.coords(), s).collect::<Vec<_>>())
        .map(|p| Report::new(p).unwrap())
        .collect()
}

fn profiles(cfg: &SearchConfig) -> Vec<Profile> {
    let reports = truthful_reports(cfg);
    (0..cfg.agents)
        .map(|_| reports.iter().cloned())
        .multi_cartesian_product()
        .filter(|p| !cfg.equal_cardinality || p.iter().map(Report::len).all_equal())
        .filter(|p| cfg.total_points.is_none_or(|t| p.iter().map(Report::len).sum::<usize>() == t))
        .map(|p| Profile::new(p).unwrap())
        .collect()
}

fn violates(property: Property, before: &[ExtendedCoord], after: &[ExtendedCoord]) -> bool {
    let pairs = || before.iter().zip(after);
    match property {
        Property::Sp | Property::GroupSp => pairs().all(|(b, a)| a < b),
        Property::StrongGroupSp => pairs().all(|(b, a)| a <= b) && pairs().any(|(b, a)| a < b),
        _ => unreachable!(),
    }
}

fn naive(mech: &dyn Mechanism, cfg: &SearchConfig, property: Property) -> Option<Found> {
    let all = profiles(cfg);
    let max = if property == Property::Sp { 1 } else { cfg.max_coalition };
    for size in 1..=max {
        for profile in &all {
            let before = mech.evaluate(profile).unwrap();
            for coalition in (0..cfg.agents).combinations(size) {
                let truth: Vec<&Report> = coalition.iter().map(|&i| &profile.reports()[i]).collect();
                let l0: Vec<ExtendedCoord> = truth.iter().map(|d| loss(&before, d)).collect();
                let lists: Vec<Vec<Report>> = truth.iter().map(|d| deviations(d, &cfg.grid, &cfg.actions)).collect();
                for joint in lists.iter().map(|l| l.iter()).multi_cartesian_product() {
                    let mut reports = profile.reports().to_vec();
                    for (&i, r) in coalition.iter().zip(&joint) {
                        reports[i] = (*r).clone();
                    }
                    let after = mech.evaluate(&Profile::new(reports).unwrap()).unwrap();
                    let l1: Vec<ExtendedCoord> = truth.iter().map(|d| loss(&after, d)).collect();
                    if violates(property, &l0, &l1) {
                        return Some(Found {
                            profile: profile.clone(),
                            coalition,
                            reports: joint.into_iter().cloned().collect(),
                            before,
                            after,
                        });
                    }
                }
            }
        }
    }
    None
}

fn agree(mech: &MechanismSpec, cfg: &SearchConfig, property: Property) {
    let verdict = match property {
        Property::Sp => verify::check_strategyproof(mech, cfg),
        Property::GroupSp => verify::check_group_sp(mech, cfg),
        _ => verify::check_strong_group_sp(mech, cfg),
    }
    .unwrap();
    let expected = naive(mech, cfg, property);
    match (verdict.witness, expected) {
        (None, None) => {}
        (Some(w), Some(f)) => {
            assert_eq!(w.true_profile, f.profile, "{mech} {property:?}");
            assert_eq!(w.coalition, f.coalition, "{mech} {property:?}");
            assert_eq!(w.deviated_reports, f.reports, "{mech} {property:?}");
            assert_eq!((w.output_before, w.output_after), (f.before, f.after));
            w.replay(mech).unwrap();
        }
        (w, f) => panic!("{mech} {property:?}: engine {:?} naive {:?}", w.is_some(), f.is_some()),
    }
}

fn r(v: i64) -> Rational {
    Rational::from_integer(v)
}

#[test]
fn singletons_match_on_the_catalog() {
    let configs = [
        SearchConfig::new(2, Grid::range(0, 4), 2, ActionSet::full(3)),
        SearchConfig::new(2, Grid::range(0, 4), 2, ActionSet::manipulation_only()),
        SearchConfig::new(2, Grid::range(0, 4), 2, ActionSet::new(&[Action::Replication], 4).unwrap()),
        SearchConfig::new(2, Grid::range(0, 4), 3, ActionSet::new(&[Action::Hiding], 3).unwrap()),
    ];
    for cfg in &configs {
        for m in catalog(2) {
            agree(&m, cfg, Property::Sp);
        }
    }
}

#[test]
fn coalitions_match_on_the_catalog() {
    let cfg = SearchConfig::new(3, Grid::range(0, 4), 1, ActionSet::full(2)).with_max_coalition(3);
    for m in catalog(3) {
        agree(&m, &cfg, Property::GroupSp);
        agree(&m, &cfg, Property::StrongGroupSp);
    }
}

#[test]
fn filtered_spaces_match() {
    let m = MechanismSpec::representative_median(vec![r(0).into(), r(10).into()], r(1));
    let grid = Grid::ints(&[0, 2, 4, 10]).unwrap();
    let odd = SearchConfig::new(3, grid.clone(), 3, ActionSet::manipulation_only()).with_odd_true_sizes().with_max_coalition(3);
    agree(&m, &odd, Property::StrongGroupSp);
    let equal = SearchConfig::new(3, grid, 2, ActionSet::manipulation_only()).with_equal_cardinality().with_max_coalition(2);
    agree(&m, &equal, Property::StrongGroupSp);

    let pooled = MechanismSpec::pooled_phantom_median(vec![r(0).into(), r(1).into(), r(1).into(), r(2).into(), r(2).into()]);
    let split = SearchConfig::new(2, Grid::range(0, 2), 3, ActionSet::manipulation_only()).with_total_points(4);
    agree(&pooled, &split, Property::Sp);
}
