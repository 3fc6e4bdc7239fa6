use rayon::prelude::*;

use super::space::Space;
use super::{Property, SearchConfig, Verdict, ViolationWitness};
use crate::coord::ExtendedCoord;
use crate::error::Result;
use crate::mechanisms::Mechanism;
use crate::model::Profile;

/// `a` is at least as good as `b` for every agent and strictly better for one.
pub(crate) fn dominates(profile: &Profile, a: &ExtendedCoord, b: &ExtendedCoord) -> bool {
    let la = profile.losses_at(a);
    let lb = profile.losses_at(b);
    la.iter().zip(&lb).all(|(x, y)| x <= y) && la.iter().zip(&lb).any(|(x, y)| x < y)
}

/// A location Pareto-dominating `y`, if one exists.
///
/// With `lo*` the largest left end and `hi*` the smallest right end of the
/// agents' median intervals, `y` is dominated from the right exactly when
/// `y < min(lo*, hi*)` and from the left exactly when `y > max(lo*, hi*)`;
/// the bound itself is then a dominating location.
pub fn dominating_location(profile: &Profile, y: &ExtendedCoord) -> Option<ExtendedCoord> {
    let medians = profile.reports().iter().map(|r| r.median());
    let lo_max = medians.clone().map(|m| m.lo).max()?;
    let hi_min = medians.map(|m| m.hi).min()?;
    let right = lo_max.min(hi_min);
    let left = lo_max.max(hi_min);
    if *y < right {
        Some(right)
    } else if *y > left {
        Some(left)
    } else {
        None
    }
}

pub fn pareto_optimal(profile: &Profile, y: &ExtendedCoord) -> bool {
    dominating_location(profile, y).is_none()
}

/// Brute-force reference: tries every median endpoint of every agent.
pub fn pareto_optimal_by_candidates(profile: &Profile, y: &ExtendedCoord) -> bool {
    let mut candidates: Vec<ExtendedCoord> = profile
        .reports()
        .iter()
        .flat_map(|r| [r.median().lo, r.median().hi])
        .collect();
    candidates.push(*y);
    !candidates.iter().any(|c| dominates(profile, c, y))
}

/// The mechanism's output is Pareto optimal on every truthful profile.
pub fn check_efficient(mech: &dyn Mechanism, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate()?;
    let space = Space::enumerate(cfg)?;
    let found = space
        .profiles
        .par_iter()
        .map(|ids| -> Result<Option<ViolationWitness>> {
            let profile = space.profile(ids);
            let out = mech.evaluate(&profile)?;
            Ok(dominating_location(&profile, &out).map(|better| efficiency_witness(profile, out, better)))
        })
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()?
        .flatten();
    Ok(Verdict::from_witness(Property::Efficient, space.profiles.len() as u64, found))
}

fn efficiency_witness(profile: Profile, out: ExtendedCoord, better: ExtendedCoord) -> ViolationWitness {
    let everyone: Vec<usize> = (0..profile.agents()).collect();
    ViolationWitness {
        property: Property::Efficient,
        losses_before: profile.losses_at(&out),
        losses_after: profile.losses_at(&better),
        true_profile: profile,
        coalition: everyone,
        deviated_reports: Vec::new(),
        output_before: out,
        output_after: better,
        permutation: None,
    }
}
