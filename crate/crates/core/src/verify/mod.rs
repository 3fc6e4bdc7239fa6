//! Exhaustive property checkers over grid-bounded instance spaces.
//!
//! A check either passes over the whole configured space or returns the
//! first [`ViolationWitness`] in a fixed enumeration order. Profiles are
//! ordered lexicographically (agent 0 most significant) with each agent's
//! report in shortlex order; deviations use the same report order. Group
//! checks try coalitions by increasing size and stop at the first size that
//! yields a witness.
//!
//! Verdicts only speak for the enumerated space. `space_size` records how
//! many (profile, coalition, deviation) triples that space contains.

mod efficiency;
mod probe;
mod space;
mod strategic;
mod symmetry;
mod witness;

use serde::{Deserialize, Serialize};

use crate::coord::ExtendedCoord;
use crate::deviations::{ActionSet, Grid};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;

pub use efficiency::{check_efficient, dominating_location, pareto_optimal, pareto_optimal_by_candidates};
pub use probe::{fixed_median_output_set, output_set_shape, OutputSetShape};
pub use space::count_profiles;
pub use strategic::{
    check_group_sp, check_group_sp_at, check_strategyproof, check_strategyproof_at, check_strong_group_sp,
    check_strong_group_sp_at,
};
pub use symmetry::{check_anonymous, check_constant, is_constant};
pub use witness::ViolationWitness;

/// The property a check verifies, and that a witness refutes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    Sp,
    GroupSp,
    StrongGroupSp,
    Anonymous,
    Efficient,
    Constant,
}

impl Property {
    pub const ALL: [Property; 6] = [
        Property::Sp,
        Property::GroupSp,
        Property::StrongGroupSp,
        Property::Anonymous,
        Property::Efficient,
        Property::Constant,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::Sp => "sp",
            Property::GroupSp => "group_sp",
            Property::StrongGroupSp => "strong_group_sp",
            Property::Anonymous => "anonymous",
            Property::Efficient => "efficient",
            Property::Constant => "constant",
        }
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub check: Property,
    pub pass: bool,
    pub space_size: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<ViolationWitness>,
}

impl Verdict {
    pub(crate) fn from_witness(check: Property, space_size: u64, witness: Option<ViolationWitness>) -> Self {
        Verdict { check, pass: witness.is_none(), space_size, witness }
    }
}

/// Which true profiles to enumerate and which deviations to try from each.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchConfig {
    pub agents: usize,
    pub grid: Grid,
    /// Largest truthful report `|D̄_i|`.
    pub max_true_size: usize,
    pub actions: ActionSet,
    /// All agents hold the same number of locations.
    #[serde(default)]
    pub equal_cardinality: bool,
    /// Only odd-size truthful reports, so every agent has a unique optimum.
    #[serde(default)]
    pub odd_true_sizes: bool,
    /// Fixes `N`, the total number of truthful locations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_points: Option<usize>,
    #[serde(default = "default_coalition")]
    pub max_coalition: usize,
}

fn default_coalition() -> usize {
    1
}

impl SearchConfig {
    pub fn new(agents: usize, grid: Grid, max_true_size: usize, actions: ActionSet) -> Self {
        SearchConfig {
            agents,
            grid,
            max_true_size,
            actions,
            equal_cardinality: false,
            odd_true_sizes: false,
            total_points: None,
            max_coalition: 1,
        }
    }

    pub fn with_equal_cardinality(mut self) -> Self {
        self.equal_cardinality = true;
        self
    }

    pub fn with_odd_true_sizes(mut self) -> Self {
        self.odd_true_sizes = true;
        self
    }

    pub fn with_total_points(mut self, total: usize) -> Self {
        self.total_points = Some(total);
        self
    }

    pub fn with_max_coalition(mut self, k: usize) -> Self {
        self.max_coalition = k;
        self
    }

    /// Structural checks that do not involve a mechanism.
    pub fn validate(&self) -> Result<()> {
        if self.agents == 0 {
            return Err(Error::Config("need at least one agent".into()));
        }
        if self.max_true_size == 0 {
            return Err(Error::Config("max_true_size must be positive".into()));
        }
        if self.max_coalition == 0 || self.max_coalition > self.agents {
            return Err(Error::Config(format!(
                "max_coalition must be in 1..={}, got {}",
                self.agents, self.max_coalition
            )));
        }
        if self.max_coalition > strategic::MAX_COALITION {
            return Err(Error::Config(format!(
                "coalitions larger than {} are not supported",
                strategic::MAX_COALITION
            )));
        }
        self.actions.validate()
    }

    /// [`validate`](Self::validate) plus the breakpoint guard for `mech`: every
    /// finite parameter must be a grid point, and every band `(t1, t2)` needs a
    /// grid point strictly inside, strictly below and strictly above it.
    pub fn validate_for(&self, mech: &dyn Mechanism) -> Result<()> {
        self.validate()?;
        for b in mech.breakpoints() {
            if !self.grid.contains(&b) {
                return Err(Error::BreakpointNotOnGrid(format!(
                    "{} is a parameter of {} but not a grid point",
                    ExtendedCoord::Finite(b),
                    mech.label()
                )));
            }
        }
        for (t1, t2) in mech.bands() {
            let g = self.grid.coords();
            let inside = g.iter().any(|x| t1 < *x && *x < t2);
            let below = g.first().is_some_and(|x| *x < t1);
            let above = g.last().is_some_and(|x| *x > t2);
            if !(inside && below && above) {
                return Err(Error::BreakpointNotOnGrid(format!(
                    "grid must reach inside, below and above the band ({}, {})",
                    ExtendedCoord::Finite(t1),
                    ExtendedCoord::Finite(t2)
                )));
            }
        }
        Ok(())
    }
}
