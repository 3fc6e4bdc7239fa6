//! Strategyproofness, group strategyproofness and strong group
//! strategyproofness.
//!
//! The search fixes a coalition and the reports of everyone outside it (a
//! block), evaluates the mechanism once per joint coalition report, and then
//! answers every truthful profile of the block from the memoized outputs.
//! Outputs for one joint report do not depend on which profile is truthful,
//! so this is the same exhaustive search as the naive triple loop.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;

use super::space::Space;
use super::{Property, SearchConfig, Verdict, ViolationWitness};
use crate::coord::ExtendedCoord;
use crate::error::Result;
use crate::mechanisms::Mechanism;
use crate::model::{loss, Profile, Report};

/// Largest coalition the joint-report memo can key.
pub(crate) const MAX_COALITION: usize = 6;

const ID_BITS: u32 = 21;

struct Candidate {
    profile: usize,
    coalition_rank: usize,
    joint: Vec<u32>,
    coalition: Vec<usize>,
    before: ExtendedCoord,
    after: ExtendedCoord,
}

impl Candidate {
    fn key(&self) -> (usize, usize, &[u32]) {
        (self.profile, self.coalition_rank, &self.joint)
    }
}

fn earlier(a: Option<Candidate>, b: Option<Candidate>) -> Option<Candidate> {
    match (a, b) {
        (Some(a), Some(b)) => Some(if b.key() < a.key() { b } else { a }),
        (a, None) => a,
        (None, b) => b,
    }
}

/// Does moving from `before` to `after` (losses per member) refute `property`?
fn refutes(property: Property, before: &[ExtendedCoord], after: &[ExtendedCoord]) -> bool {
    let mut pairs = before.iter().zip(after);
    match property {
        Property::Sp | Property::GroupSp => pairs.all(|(b, a)| a < b),
        Property::StrongGroupSp => {
            let mut gain = false;
            for (b, a) in pairs {
                if a > b {
                    return false;
                }
                gain |= a < b;
            }
            gain
        }
        _ => unreachable!("not a strategic property"),
    }
}

/// Whether any joint deviation could possibly refute `property`, given which
/// members are already at one of their optimal locations.
fn worth_searching(property: Property, at_optimum: &[bool]) -> bool {
    match property {
        Property::Sp | Property::GroupSp => !at_optimum.iter().any(|&b| b),
        _ => !at_optimum.iter().all(|&b| b),
    }
}

struct Block<'a> {
    mech: &'a dyn Mechanism,
    space: &'a Space,
    coalition: &'a [usize],
    refs: Vec<&'a Report>,
    memo: HashMap<u128, u32>,
    outputs: Vec<ExtendedCoord>,
    reachable: HashMap<Vec<u32>, Vec<(u32, Vec<u32>)>>,
}

impl<'a> Block<'a> {
    fn new(mech: &'a dyn Mechanism, space: &'a Space, coalition: &'a [usize], template: &[u32]) -> Self {
        Block {
            mech,
            space,
            coalition,
            refs: template.iter().map(|&id| &space.table[id as usize]).collect(),
            memo: HashMap::new(),
            outputs: Vec::new(),
            reachable: HashMap::new(),
        }
    }

    fn output_id(&mut self, joint: &[u32]) -> Result<u32> {
        let key = joint.iter().fold(0u128, |acc, &id| (acc << ID_BITS) | u128::from(id));
        if let Some(&id) = self.memo.get(&key) {
            return Ok(id);
        }
        for (&agent, &rid) in self.coalition.iter().zip(joint) {
            self.refs[agent] = &self.space.table[rid as usize];
        }
        let out = self.mech.outcome(&self.refs)?;
        let id = match self.outputs.iter().position(|o| *o == out) {
            Some(i) => i as u32,
            None => {
                self.outputs.push(out);
                self.outputs.len() as u32 - 1
            }
        };
        self.memo.insert(key, id);
        Ok(id)
    }

    /// Distinct outputs reachable from the given member deviation lists, each
    /// with the first joint report (in enumeration order) that produces it.
    fn reachable(&mut self, list_ids: Vec<u32>) -> Result<&[(u32, Vec<u32>)]> {
        if !self.reachable.contains_key(&list_ids) {
            let space = self.space;
            let lists: Vec<&[u32]> = list_ids.iter().map(|&l| space.lists[l as usize].as_slice()).collect();
            let mut found: Vec<(u32, Vec<u32>)> = Vec::new();
            let mut seen = vec![false; self.outputs.len()];
            for joint in lists.iter().map(|l| l.iter().copied()).multi_cartesian_product() {
                let oid = self.output_id(&joint)? as usize;
                if oid >= seen.len() {
                    seen.resize(oid + 1, false);
                }
                if !seen[oid] {
                    seen[oid] = true;
                    found.push((oid as u32, joint));
                }
            }
            self.reachable.insert(list_ids.clone(), found);
        }
        Ok(&self.reachable[&list_ids])
    }

    fn scan(&mut self, property: Property, profiles: &[usize], rank: usize) -> Result<Option<Candidate>> {
        let space = self.space;
        for &pi in profiles {
            let prof = &space.profiles[pi];
            let truthful: Vec<u32> = self.coalition.iter().map(|&i| prof[i]).collect();
            let truth: Vec<&Report> = truthful.iter().map(|&id| &space.table[id as usize]).collect();
            let before_id = self.output_id(&truthful)?;
            let before = self.outputs[before_id as usize];
            let at_optimum: Vec<bool> = truth.iter().map(|r| r.median().contains(&before)).collect();
            if !worth_searching(property, &at_optimum) {
                continue;
            }
            let losses_before: Vec<ExtendedCoord> = truth.iter().map(|r| loss(&before, r)).collect();
            let list_ids: Vec<u32> = truthful.iter().map(|id| space.list_of[id]).collect();
            let reachable = self.reachable(list_ids)?.to_vec();
            for (oid, joint) in reachable {
                let after = self.outputs[oid as usize];
                let losses_after: Vec<ExtendedCoord> = truth.iter().map(|r| loss(&after, r)).collect();
                if refutes(property, &losses_before, &losses_after) {
                    return Ok(Some(Candidate {
                        profile: pi,
                        coalition_rank: rank,
                        joint,
                        coalition: self.coalition.to_vec(),
                        before,
                        after,
                    }));
                }
            }
        }
        Ok(None)
    }
}

fn coalition_sizes(property: Property, cfg: &SearchConfig) -> std::ops::RangeInclusive<usize> {
    match property {
        Property::Sp => 1..=1,
        _ => 1..=cfg.max_coalition,
    }
}

fn space_size(space: &Space, sizes: std::ops::RangeInclusive<usize>, agents: usize) -> u64 {
    let mut total: u64 = 0;
    for s in sizes {
        for coalition in (0..agents).combinations(s) {
            for prof in &space.profiles {
                let joint: u64 = coalition
                    .iter()
                    .map(|&i| space.list_for(prof[i]).len() as u64)
                    .fold(1u64, |a, b| a.saturating_mul(b));
                total = total.saturating_add(joint);
            }
        }
    }
    total
}

fn search(mech: &dyn Mechanism, cfg: &SearchConfig, space: &Space, property: Property) -> Result<Verdict> {
    cfg.validate_for(mech)?;
    let sizes = coalition_sizes(property, cfg);
    let size = space_size(space, sizes.clone(), cfg.agents);
    for s in sizes {
        let coalitions: Vec<Vec<usize>> = (0..cfg.agents).combinations(s).collect();
        let mut tasks: Vec<(usize, Vec<usize>)> = Vec::new();
        for (rank, coalition) in coalitions.iter().enumerate() {
            let mut blocks: HashMap<Vec<u32>, Vec<usize>> = HashMap::new();
            for (pi, prof) in space.profiles.iter().enumerate() {
                let others: Vec<u32> = (0..cfg.agents)
                    .filter(|i| !coalition.contains(i))
                    .map(|i| prof[i])
                    .collect();
                blocks.entry(others).or_default().push(pi);
            }
            let mut blocks: Vec<Vec<usize>> = blocks.into_values().collect();
            blocks.sort_unstable_by_key(|b| b[0]);
            tasks.extend(blocks.into_iter().map(|b| (rank, b)));
        }
        let best = tasks
            .par_iter()
            .map(|(rank, profiles)| {
                let coalition = &coalitions[*rank];
                let template = &space.profiles[profiles[0]];
                Block::new(mech, space, coalition, template).scan(property, profiles, *rank)
            })
            .try_reduce(|| None, |a, b| Ok(earlier(a, b)))?;
        if let Some(c) = best {
            let profile: Profile = space.profile(&space.profiles[c.profile]);
            let reports = c.joint.iter().map(|&id| space.table[id as usize].clone()).collect();
            let witness = ViolationWitness::strategic(property, profile, c.coalition, reports, c.before, c.after);
            return Ok(Verdict::from_witness(property, size, Some(witness)));
        }
    }
    Ok(Verdict::from_witness(property, size, None))
}

/// No single agent gains by any deviation in the action set, over every
/// profile the configuration enumerates.
pub fn check_strategyproof(mech: &dyn Mechanism, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate_for(mech)?;
    search(mech, cfg, &Space::enumerate(cfg)?, Property::Sp)
}

/// No coalition of at most `max_coalition` agents can deviate so that every
/// member strictly gains.
pub fn check_group_sp(mech: &dyn Mechanism, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate_for(mech)?;
    search(mech, cfg, &Space::enumerate(cfg)?, Property::GroupSp)
}

/// No coalition can deviate so that nobody in it loses and somebody gains.
pub fn check_strong_group_sp(mech: &dyn Mechanism, cfg: &SearchConfig) -> Result<Verdict> {
    cfg.validate_for(mech)?;
    search(mech, cfg, &Space::enumerate(cfg)?, Property::StrongGroupSp)
}

/// [`check_strategyproof`] restricted to one truthful profile.
pub fn check_strategyproof_at(mech: &dyn Mechanism, cfg: &SearchConfig, profile: &Profile) -> Result<Verdict> {
    cfg.validate_for(mech)?;
    search(mech, cfg, &Space::single(cfg, profile)?, Property::Sp)
}

pub fn check_group_sp_at(mech: &dyn Mechanism, cfg: &SearchConfig, profile: &Profile) -> Result<Verdict> {
    cfg.validate_for(mech)?;
    search(mech, cfg, &Space::single(cfg, profile)?, Property::GroupSp)
}

pub fn check_strong_group_sp_at(mech: &dyn Mechanism, cfg: &SearchConfig, profile: &Profile) -> Result<Verdict> {
    cfg.validate_for(mech)?;
    search(mech, cfg, &Space::single(cfg, profile)?, Property::StrongGroupSp)
}
