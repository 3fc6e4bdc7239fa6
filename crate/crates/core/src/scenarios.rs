//! Named, frozen reproductions of concrete constructions.
//!
//! Each scenario runs a fixed configuration and records claims as
//! `(description, expected, observed)` strings; a claim passes iff the two
//! strings are identical.

use std::collections::BTreeSet;
use std::fmt::Display;

use serde::{Deserialize, Serialize};

use crate::coord::{ExtendedCoord, Rational};
use crate::deviations::{Action, ActionSet, Grid};
use crate::error::{Error, Result};
use crate::mechanisms::{catalog, Mechanism, MechanismSpec};
use crate::model::{loss, Profile, Report};
use crate::verify::{self, Property, SearchConfig, ViolationWitness};

pub const NAMES: [&str; 7] = [
    "thm1_nonidentifying",
    "example1_sp_but_inefficient",
    "example2_strong_gsp_fail",
    "thm3_full_suite",
    "thm5_manipulation_only",
    "thm7_unique_optima",
    "relabeled_median_replication_attack",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub description: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub name: String,
    pub claims: Vec<Claim>,
    pub witnesses: Vec<ViolationWitness>,
}

impl ScenarioReport {
    fn new(name: &str) -> Self {
        ScenarioReport { name: name.to_string(), claims: Vec::new(), witnesses: Vec::new() }
    }

    fn claim(&mut self, description: &str, expected: impl Display, observed: impl Display) {
        let (expected, observed) = (expected.to_string(), observed.to_string());
        self.claims.push(Claim { description: description.to_string(), pass: expected == observed, expected, observed });
    }

    pub fn pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

pub fn run_scenario(name: &str) -> Result<ScenarioReport> {
    match name {
        "thm1_nonidentifying" => thm1_nonidentifying(),
        "example1_sp_but_inefficient" => example1_sp_but_inefficient(),
        "example2_strong_gsp_fail" => example2_strong_gsp_fail(),
        "thm3_full_suite" => thm3_full_suite(),
        "thm5_manipulation_only" => thm5_manipulation_only(),
        "thm7_unique_optima" => thm7_unique_optima(),
        "relabeled_median_replication_attack" => relabeled_median_replication_attack(),
        other => Err(Error::UnknownScenario(other.to_string())),
    }
}

pub fn run_all() -> Result<Vec<ScenarioReport>> {
    NAMES.iter().map(|n| run_scenario(n)).collect()
}

fn c(v: i64) -> ExtendedCoord {
    ExtendedCoord::int(v)
}

fn r(v: i64) -> Rational {
    Rational::from_integer(v)
}

fn list<T: Display>(items: &[T]) -> String {
    format!("[{}]", items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

fn replay_status(w: &ViolationWitness, mech: &dyn Mechanism) -> String {
    match w.replay(mech) {
        Ok(()) => "ok".into(),
        Err(e) => e.to_string(),
    }
}

pub fn nonidentifying_mechanism() -> MechanismSpec {
    MechanismSpec::pooled_phantom_median(vec![c(0), c(2), c(2), c(2), c(2), c(2)])
}

fn thm1_nonidentifying() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("thm1_nonidentifying");
    let mech = nonidentifying_mechanism();
    let truth = Profile::ints(&[&[0], &[1, 1, 1, 2]])?;
    let deviation = Report::ints(&[1, 1, 1, 1])?;
    let before = mech.evaluate(&truth)?;
    let after = mech.evaluate(&truth.with_report(1, deviation.clone()))?;
    let holder = &truth.reports()[1];
    rep.claim("truthful output", c(2), before);
    rep.claim("agent 2 truthful loss", c(3), loss(&before, holder));
    rep.claim("output after agent 2 reports {1,1,1,1}", c(1), after);
    rep.claim("agent 2 loss after deviating", c(1), loss(&after, holder));

    let w = ViolationWitness::strategic(Property::Sp, truth.clone(), vec![1], vec![deviation], before, after);
    rep.claim("explicit deviation replays as a strategyproofness violation", "ok", replay_status(&w, &mech));
    rep.witnesses.push(w);

    let cfg = SearchConfig::new(2, Grid::range(0, 2), 4, ActionSet::manipulation_only());
    let found = verify::check_strategyproof_at(&mech, &cfg, &truth)?;
    rep.claim("exhaustive manipulation search on this profile finds a violation", false, found.pass);
    Ok(rep)
}

pub fn two_threshold_mechanism() -> MechanismSpec {
    MechanismSpec::two_threshold(r(0), r(10), vec![ExtendedCoord::NegInf, ExtendedCoord::NegInf, ExtendedCoord::PosInf], r(1))
}

pub fn two_threshold_config() -> SearchConfig {
    SearchConfig::new(2, Grid::ints(&[-1, 0, 5, 7, 10, 11]).expect("distinct"), 3, ActionSet::full(3)).with_odd_true_sizes()
}

fn example1_sp_but_inefficient() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("example1_sp_but_inefficient");
    let mech = two_threshold_mechanism();
    let cfg = two_threshold_config();
    let sp = verify::check_strategyproof(&mech, &cfg)?;
    rep.claim("strategyproof over the configured space", true, sp.pass);
    let eff = verify::check_efficient(&mech, &cfg)?;
    rep.claim("efficient over the configured space", false, eff.pass);
    if let Some(w) = eff.witness {
        let medians: BTreeSet<String> =
            w.true_profile.reports().iter().map(|d| d.median().lo.to_string()).collect();
        rep.claim("every agent's median in the witness", "{5}", format!("{{{}}}", medians.into_iter().collect::<Vec<_>>().join(",")));
        rep.claim("witness output is a threshold", true, w.output_before == c(0) || w.output_before == c(10));
        rep.claim("dominating location", c(5), w.output_after);
        rep.claim("witness replays", "ok", replay_status(&w, &mech));
        rep.witnesses.push(w);
    }
    Ok(rep)
}

pub fn strong_gsp_mechanism() -> MechanismSpec {
    MechanismSpec::representative_median(vec![c(0), c(10)], r(1))
}

pub fn strong_gsp_profile() -> Profile {
    Profile::ints(&[&[2, 4], &[2], &[4]]).expect("valid")
}

fn example2_strong_gsp_fail() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("example2_strong_gsp_fail");
    let mech = strong_gsp_mechanism();
    let truth = strong_gsp_profile();
    let grid = Grid::ints(&[0, 1, 2, 3, 4, 10]).expect("distinct");
    let group = SearchConfig::new(3, grid, 2, ActionSet::full(3)).with_max_coalition(3);
    let gsp = verify::check_group_sp_at(&mech, &group, &truth)?;
    rep.claim("group strategyproof on this profile", true, gsp.pass);

    let coarse = Grid::ints(&[0, 2, 4, 10]).expect("distinct");
    let strong = SearchConfig::new(3, coarse, 2, ActionSet::manipulation_only()).with_max_coalition(3);
    let sgsp = verify::check_strong_group_sp_at(&mech, &strong, &truth)?;
    rep.claim("strong group strategyproof on this profile", false, sgsp.pass);
    if let Some(w) = sgsp.witness {
        let dev = w.deviators();
        rep.claim("deviating agents", "[0]", list(&dev));
        let k = w.coalition.iter().position(|&i| i == 0);
        let report = k.map(|k| w.deviated_reports[k].to_string()).unwrap_or_default();
        rep.claim("agent 0 reports", "{4, 4}", report);
        rep.claim("output before -> after", "2 -> 4", format!("{} -> {}", w.output_before, w.output_after));
        let l = k.map(|k| format!("{} -> {}", w.losses_before[k], w.losses_after[k])).unwrap_or_default();
        rep.claim("agent 0 loss", "2 -> 2", l);
        rep.claim("witness replays", "ok", replay_status(&w, &mech));
        rep.witnesses.push(w);
    }
    Ok(rep)
}

pub fn standard_mechanism() -> MechanismSpec {
    MechanismSpec::representative_median(vec![ExtendedCoord::NegInf, ExtendedCoord::NegInf], r(0))
}

pub fn standard_config() -> SearchConfig {
    SearchConfig::new(3, Grid::range(0, 3), 2, ActionSet::full(3)).with_max_coalition(3)
}

fn thm3_full_suite() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("thm3_full_suite");
    let mech = standard_mechanism();
    let cfg = standard_config();
    let verdicts = [
        verify::check_strategyproof(&mech, &cfg)?,
        verify::check_group_sp(&mech, &cfg)?,
        verify::check_anonymous(&mech, &cfg)?,
        verify::check_efficient(&mech, &cfg)?,
    ];
    for v in verdicts {
        rep.claim(&format!("{} over {} triples", v.check.name(), v.space_size), true, v.pass);
        rep.witnesses.extend(v.witness);
    }
    Ok(rep)
}

/// Catalog mechanisms that pass strategyproofness, anonymity and efficiency.
pub fn passing_suite(mechs: &[MechanismSpec], cfg: &SearchConfig) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for m in mechs {
        if verify::check_strategyproof(m, cfg)?.pass
            && verify::check_anonymous(m, cfg)?.pass
            && verify::check_efficient(m, cfg)?.pass
        {
            out.push(m.to_string());
        }
    }
    Ok(out)
}

pub fn characterization_configs(size: usize) -> (SearchConfig, SearchConfig) {
    let manip = SearchConfig::new(2, Grid::range(0, 4), size, ActionSet::manipulation_only()).with_equal_cardinality();
    let full = SearchConfig { actions: ActionSet::full(size + 1), ..manip.clone() };
    (manip, full)
}

fn thm5_manipulation_only() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("thm5_manipulation_only");
    let mechs = catalog(2);
    let (manip, full) = characterization_configs(3);
    let under_full = passing_suite(&mechs, &full)?;
    let under_manip = passing_suite(&mechs, &manip)?;
    rep.claim("mechanisms passing under manipulation only, three locations each", list(&under_full), list(&under_manip));
    Ok(rep)
}

pub fn unique_optima_config() -> SearchConfig {
    SearchConfig::new(3, Grid::ints(&[0, 1, 2, 3, 4, 10]).expect("distinct"), 3, ActionSet::full(3))
        .with_odd_true_sizes()
        .with_max_coalition(3)
}

fn thm7_unique_optima() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("thm7_unique_optima");
    let mech = strong_gsp_mechanism();
    let v = verify::check_strong_group_sp(&mech, &unique_optima_config())?;
    rep.claim(&format!("strong group strategyproof over {} triples", v.space_size), true, v.pass);
    rep.witnesses.extend(v.witness);
    Ok(rep)
}

pub fn replication_config() -> SearchConfig {
    SearchConfig::new(2, Grid::range(0, 4), 3, ActionSet::new(&[Action::Replication], 6).expect("nonempty"))
}

fn relabeled_median_replication_attack() -> Result<ScenarioReport> {
    let mut rep = ScenarioReport::new("relabeled_median_replication_attack");
    let mech = MechanismSpec::weighted_relabeled_median(r(1));
    let v = verify::check_strategyproof(&mech, &replication_config())?;
    rep.claim("strategyproof w.r.t. replication", false, v.pass);
    if let Some(w) = v.witness {
        let i = w.coalition[0];
        let truth = &w.true_profile.reports()[i];
        let dev = &w.deviated_reports[0];
        let same_support = dev.points().iter().all(|p| truth.points().contains(p));
        rep.claim("deviation only repeats truthful locations", true, same_support && dev.len() > truth.len());
        rep.claim("witness replays", "ok", replay_status(&w, &mech));
        rep.witnesses.push(w);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_name() {
        assert_eq!(run_scenario("nosuch"), Err(Error::UnknownScenario("nosuch".into())));
    }

    #[test]
    fn nonidentifying_goldens() {
        let rep = run_scenario("thm1_nonidentifying").unwrap();
        assert!(rep.pass(), "{rep:#?}");
        assert_eq!(rep.witnesses.len(), 1);
        assert_eq!(rep.witnesses[0].losses_before, vec![c(3)]);
        assert_eq!(rep.witnesses[0].losses_after, vec![c(1)]);
    }

    #[test]
    fn strong_gsp_goldens() {
        let rep = run_scenario("example2_strong_gsp_fail").unwrap();
        assert!(rep.pass(), "{rep:#?}");
        assert_eq!(rep.witnesses.len(), 1);
        assert_eq!(rep.witnesses[0].property, Property::StrongGroupSp);
    }
}
