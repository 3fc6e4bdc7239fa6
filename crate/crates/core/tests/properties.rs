use proptest::prelude::*;

use facloc::deviations::{combined, deviations, hidings, manipulations, replications};
use facloc::mechanisms::catalog;
use facloc::verify::{self, Property};
use facloc::{
    loss, median_interval, ActionSet, ExtendedCoord, Grid, Mechanism, MechanismSpec, Profile, Rational, Report,
    SearchConfig, ViolationWitness,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| Rational::new(n, d))
}

fn report() -> impl Strategy<Value = Report> {
    prop::collection::vec(rational(), 1..=6).prop_map(|p| Report::new(p).unwrap())
}

fn grid_report() -> impl Strategy<Value = Report> {
    prop::collection::vec(0i64..=4, 1..=4).prop_map(|p| Report::ints(&p).unwrap())
}

fn profile(agents: usize) -> impl Strategy<Value = Profile> {
    prop::collection::vec(report(), agents).prop_map(|r| Profile::new(r).unwrap())
}

fn fin(r: Rational) -> ExtendedCoord {
    ExtendedCoord::Finite(r)
}

/// Median by sorting, independent of the crate's selection code.
fn sorted_median(mut v: Vec<ExtendedCoord>) -> ExtendedCoord {
    v.sort();
    v[v.len() / 2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn loss_and_median_translate(d in report(), y in rational(), shift in rational()) {
        let moved = d.translate(shift);
        prop_assert_eq!(loss(&fin(y + shift), &moved), loss(&fin(y), &d));
        let med = d.median();
        let coords: Vec<ExtendedCoord> = moved.coords();
        let moved_med = median_interval(&coords).unwrap();
        prop_assert_eq!(moved_med.lo, med.lo + shift);
        prop_assert_eq!(moved_med.hi, med.hi + shift);
    }

    #[test]
    fn plateau_is_the_minimum(d in report(), w in 0i64..=10, y in rational()) {
        let med = d.median();
        let inside = med.lo.blend(&med.hi, Rational::new(w, 10));
        prop_assert!(loss(&inside, &d) <= loss(&fin(y), &d));
        prop_assert_eq!(loss(&inside, &d), loss(&med.lo, &d));
        prop_assert_eq!(loss(&ExtendedCoord::PosInf, &d), ExtendedCoord::PosInf);
    }

    #[test]
    fn pooled_view_ignores_order(p in profile(3), k in 0usize..6) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let q = p.permuted(&perms[k]);
        prop_assert_eq!(p.pooled(), q.pooled());
        prop_assert_eq!(p.total_points(), q.total_points());
    }

    #[test]
    fn catalog_is_anonymous_and_translation_equivariant(p in profile(3), k in 0usize..6, shift in rational()) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let q = p.permuted(&perms[k]);
        let moved = Profile::new(p.reports().iter().map(|d| d.translate(shift)).collect()).unwrap();
        for m in catalog(3) {
            let out = m.evaluate(&p).unwrap();
            prop_assert_eq!(m.evaluate(&q).unwrap(), out, "{}", m);
            prop_assert_eq!(m.translated(shift).evaluate(&moved).unwrap(), out + shift, "{}", m);
        }
    }

    #[test]
    fn representative_median_depends_only_on_representatives(p in profile(3), beta in 0i64..=2, a in rational(), b in rational()) {
        let beta = Rational::new(beta, 2);
        let m = MechanismSpec::representative_median(vec![fin(a), fin(b)], beta);
        // Same median interval, different reports.
        let twin = Profile::new(p.reports().iter().map(|d| {
            let med = d.median();
            Report::from_coords(&[med.lo, med.hi]).unwrap()
        }).collect()).unwrap();
        prop_assert_eq!(m.evaluate(&p).unwrap(), m.evaluate(&twin).unwrap());
    }

    #[test]
    fn equal_phantoms_clamp(p in profile(3), cst in rational(), beta in 0i64..=2) {
        let beta = Rational::new(beta, 2);
        let m = MechanismSpec::representative_median(vec![fin(cst); 2], beta);
        let mut all: Vec<ExtendedCoord> = p.reports().iter().map(|d| d.representative(beta)).collect();
        all.extend([fin(cst); 2]);
        prop_assert_eq!(m.evaluate(&p).unwrap(), sorted_median(all));
    }

    #[test]
    fn pareto_closed_form_matches_candidates(p in profile(3), y in rational()) {
        let y = fin(y);
        prop_assert_eq!(verify::pareto_optimal(&p, &y), verify::pareto_optimal_by_candidates(&p, &y));
        if let Some(better) = verify::dominating_location(&p, &y) {
            let before = p.losses_at(&y);
            let after = p.losses_at(&better);
            prop_assert!(before.iter().zip(&after).all(|(b, a)| a <= b));
            prop_assert!(before.iter().zip(&after).any(|(b, a)| a < b));
        }
    }

    #[test]
    fn streams_contain_the_truth_and_stay_inside_combined(d in grid_report()) {
        let grid = Grid::range(0, 4);
        let all = combined(&grid, 5).collect::<Vec<_>>();
        for stream in [manipulations(&d, &grid).collect::<Vec<_>>(), replications(&d, 5).collect(), hidings(&d).collect()] {
            prop_assert!(stream.contains(&d));
            prop_assert!(stream.iter().all(|r| all.contains(r)));
        }
        for r in replications(&d, 5).chain(hidings(&d)) {
            prop_assert!(r.points().iter().all(|x| d.points().contains(x)));
        }
        let full = deviations(&d, &grid, &ActionSet::full(5));
        prop_assert_eq!(full, all);
    }
}

fn witnesses_for(actions: ActionSet) -> Vec<(MechanismSpec, Option<ViolationWitness>)> {
    let cfg = SearchConfig::new(2, Grid::range(0, 4), 2, actions);
    catalog(2).into_iter().map(|m| {
        let w = verify::check_strategyproof(&m, &cfg).unwrap().witness;
        (m, w)
    }).collect()
}

#[test]
fn manipulation_witnesses_survive_richer_action_sets() {
    let manip = witnesses_for(ActionSet::manipulation_only());
    let full = witnesses_for(ActionSet::full(3));
    for ((m, w), (_, v)) in manip.iter().zip(&full) {
        if let Some(w) = w {
            assert!(v.is_some(), "{m}");
            // The manipulation itself is still available with every action.
            let cfg = SearchConfig::new(2, Grid::range(0, 4), 2, ActionSet::full(3));
            let again = verify::check_strategyproof_at(m, &cfg, &w.true_profile).unwrap();
            assert!(!again.pass, "{m}");
        }
    }
}

#[test]
fn witnesses_round_trip_through_json() {
    let cfg = SearchConfig::new(2, Grid::range(0, 4), 2, ActionSet::full(3)).with_max_coalition(2);
    let mut seen = 0;
    for m in catalog(2) {
        for check in [Property::Sp, Property::GroupSp, Property::StrongGroupSp, Property::Efficient, Property::Constant] {
            let v = facloc::campaign::run_check(&m, &cfg, check).unwrap();
            if let Some(w) = v.witness {
                let text = serde_json::to_string(&w).unwrap();
                let back: ViolationWitness = serde_json::from_str(&text).unwrap();
                assert_eq!(back, w);
                back.replay(&m).unwrap();
                seen += 1;
            }
        }
    }
    assert!(seen > 10);
}

#[test]
fn tampered_witnesses_do_not_replay() {
    let m = MechanismSpec::weighted_relabeled_median(Rational::from_integer(1));
    let cfg = SearchConfig::new(2, Grid::range(0, 4), 2, ActionSet::full(3));
    let w = verify::check_strategyproof(&m, &cfg).unwrap().witness.unwrap();
    let mut wrong_output = w.clone();
    wrong_output.output_after = ExtendedCoord::int(4) + Rational::from_integer(1);
    assert!(wrong_output.replay(&m).is_err());
    let mut wrong_loss = w.clone();
    wrong_loss.losses_after[0] = wrong_loss.losses_before[0];
    assert!(wrong_loss.replay(&m).is_err());
    let truthful = ViolationWitness { deviated_reports: vec![w.true_profile.reports()[w.coalition[0]].clone()], ..w };
    assert!(truthful.replay(&m).is_err());
}
