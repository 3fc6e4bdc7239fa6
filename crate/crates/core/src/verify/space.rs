use std::collections::HashMap;

use itertools::Itertools;

use super::SearchConfig;
use crate::deviations::{deviations, multisets, Action};
use crate::error::{Error, Result};
use crate::model::{Profile, Report};

/// The enumerated instance space, with every report interned.
///
/// Table ids follow shortlex order, so comparing ids compares reports in the
/// enumeration order.
pub(crate) struct Space {
    pub table: Vec<Report>,
    pub profiles: Vec<Vec<u32>>,
    /// Deviation list id for every truthful report id that occurs in a profile.
    pub list_of: HashMap<u32, u32>,
    pub lists: Vec<Vec<u32>>,
}

impl Space {
    /// Every profile the configuration admits.
    pub fn enumerate(cfg: &SearchConfig) -> Result<Self> {
        cfg.validate()?;
        let mut space = Space::with_table(cfg, cfg.max_true_size)?;
        let truthful: Vec<u32> = (0..space.table.len() as u32)
            .filter(|&id| {
                let len = space.table[id as usize].len();
                len <= cfg.max_true_size && (!cfg.odd_true_sizes || len % 2 == 1)
            })
            .collect();
        space.profiles = (0..cfg.agents)
            .map(|_| truthful.iter().copied())
            .multi_cartesian_product()
            .filter(|p| space.admits(cfg, p))
            .collect();
        space.build_lists(cfg)?;
        Ok(space)
    }

    /// A single fixed profile, with deviations drawn from `cfg`.
    pub fn single(cfg: &SearchConfig, profile: &Profile) -> Result<Self> {
        cfg.validate()?;
        if profile.agents() != cfg.agents {
            return Err(Error::Config(format!(
                "profile has {} agents, configuration expects {}",
                profile.agents(),
                cfg.agents
            )));
        }
        let largest = profile.reports().iter().map(Report::len).max().unwrap_or(1);
        let mut space = Space::with_table(cfg, cfg.max_true_size.max(largest))?;
        let index: HashMap<&Report, u32> = space.table.iter().enumerate().map(|(i, r)| (r, i as u32)).collect();
        let ids = profile
            .reports()
            .iter()
            .map(|r| {
                index
                    .get(r)
                    .copied()
                    .ok_or_else(|| Error::Config("profile locations must lie on the grid".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        drop(index);
        space.profiles = vec![ids];
        space.build_lists(cfg)?;
        Ok(space)
    }

    fn with_table(cfg: &SearchConfig, true_size: usize) -> Result<Self> {
        let mut max = true_size;
        if cfg.actions.allows(Action::Replication) {
            max = max.max(cfg.actions.max_report_size);
        }
        let table: Vec<Report> = (1..=max)
            .flat_map(|s| multisets(cfg.grid.coords(), s).collect::<Vec<_>>())
            .map(|p| Report::new(p).expect("nonempty"))
            .collect();
        if table.len() >= 1 << 21 {
            return Err(Error::Config(format!(
                "{} distinct reports exceed the enumerator's limit; shrink the grid or the sizes",
                table.len()
            )));
        }
        Ok(Space { table, profiles: Vec::new(), list_of: HashMap::new(), lists: Vec::new() })
    }

    fn admits(&self, cfg: &SearchConfig, ids: &[u32]) -> bool {
        let sizes = ids.iter().map(|&i| self.table[i as usize].len());
        if cfg.equal_cardinality && !sizes.clone().all_equal() {
            return false;
        }
        match cfg.total_points {
            Some(total) => sizes.sum::<usize>() == total,
            None => true,
        }
    }

    fn build_lists(&mut self, cfg: &SearchConfig) -> Result<()> {
        let index: HashMap<&Report, u32> = self.table.iter().enumerate().map(|(i, r)| (r, i as u32)).collect();
        let mut interned: HashMap<Vec<u32>, u32> = HashMap::new();
        let mut lists = Vec::new();
        let mut list_of = HashMap::new();
        for id in self.profiles.iter().flatten().copied().unique().sorted() {
            let devs = deviations(&self.table[id as usize], &cfg.grid, &cfg.actions);
            let ids: Vec<u32> = devs
                .iter()
                .map(|r| index.get(r).copied().ok_or_else(|| Error::Config("deviation outside table".into())))
                .collect::<Result<_>>()?;
            let next = lists.len() as u32;
            let lid = *interned.entry(ids.clone()).or_insert_with(|| {
                lists.push(ids);
                next
            });
            list_of.insert(id, lid);
        }
        self.lists = lists;
        self.list_of = list_of;
        Ok(())
    }

    pub fn profile(&self, ids: &[u32]) -> Profile {
        Profile::new(ids.iter().map(|&i| self.table[i as usize].clone()).collect()).expect("n >= 1")
    }

    pub fn list_for(&self, true_id: u32) -> &[u32] {
        &self.lists[self.list_of[&true_id] as usize]
    }
}

/// Number of truthful profiles `cfg` enumerates.
pub fn count_profiles(cfg: &SearchConfig) -> Result<u64> {
    Ok(Space::enumerate(cfg)?.profiles.len() as u64)
}
