use itertools::Itertools;
use rayon::prelude::*;

use super::space::Space;
use super::{Property, SearchConfig, Verdict, ViolationWitness};
use crate::error::Result;
use crate::mechanisms::Mechanism;

/// Permuting the agents never changes the output.
pub fn check_anonymous(mech: &dyn Mechanism, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate()?;
    let space = Space::enumerate(cfg)?;
    let perms: Vec<Vec<usize>> = (0..cfg.agents).permutations(cfg.agents).skip(1).collect();
    let found = space
        .profiles
        .par_iter()
        .map(|ids| -> Result<Option<ViolationWitness>> {
            let profile = space.profile(ids);
            let out = mech.evaluate(&profile)?;
            for perm in &perms {
                let permuted = profile.permuted(perm);
                let other = mech.evaluate(&permuted)?;
                if other != out {
                    return Ok(Some(ViolationWitness {
                        property: Property::Anonymous,
                        losses_before: Vec::new(),
                        losses_after: Vec::new(),
                        true_profile: profile,
                        coalition: Vec::new(),
                        deviated_reports: Vec::new(),
                        output_before: out,
                        output_after: other,
                        permutation: Some(perm.clone()),
                    }));
                }
            }
            Ok(None)
        })
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()?
        .flatten();
    let size = space.profiles.len() as u64 * perms.len().max(1) as u64;
    Ok(Verdict::from_witness(Property::Anonymous, size, found))
}

/// Passes iff every enumerated profile yields the same output; a witness pairs
/// the first profile with the first one that differs from it.
pub fn check_constant(mech: &dyn Mechanism, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate()?;
    let space = Space::enumerate(cfg)?;
    let Some(first_ids) = space.profiles.first() else {
        return Ok(Verdict::from_witness(Property::Constant, 0, None));
    };
    let first = space.profile(first_ids);
    let reference = mech.evaluate(&first)?;
    let found = space
        .profiles
        .par_iter()
        .map(|ids| -> Result<Option<ViolationWitness>> {
            let profile = space.profile(ids);
            let out = mech.evaluate(&profile)?;
            if out == reference {
                return Ok(None);
            }
            let everyone: Vec<usize> = (0..profile.agents()).collect();
            Ok(Some(ViolationWitness {
                property: Property::Constant,
                losses_before: first.losses_at(&reference),
                losses_after: first.losses_at(&out),
                true_profile: first.clone(),
                coalition: everyone,
                deviated_reports: profile.reports().to_vec(),
                output_before: reference,
                output_after: out,
                permutation: None,
            }))
        })
        .find_first(|r| !matches!(r, Ok(None)))
        .transpose()?
        .flatten();
    Ok(Verdict::from_witness(Property::Constant, space.profiles.len() as u64, found))
}

/// True iff the output is identical over all enumerated profiles.
pub fn is_constant(mech: &dyn Mechanism, cfg: &SearchConfig) -> Result<bool> {
    Ok(check_constant(mech, cfg)?.pass)
}
