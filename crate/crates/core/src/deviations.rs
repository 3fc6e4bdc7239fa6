//! Strategic action spaces, enumerated over a finite coordinate grid.
//!
//! Every stream is produced in shortlex order (smaller reports first, then
//! lexicographic over the sorted locations) and always contains the truthful
//! report whenever the action set allows it to be reproduced.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::coord::{ExtendedCoord, Rational};
use crate::error::{Error, Result};
use crate::model::Report;

/// Strictly increasing finite coordinates that deviations may use.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ExtendedCoord>", into = "Vec<ExtendedCoord>")]
pub struct Grid {
    coords: Vec<Rational>,
}

impl Grid {
    pub fn new(mut coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Config("grid must not be empty".into()));
        }
        coords.sort_unstable();
        if coords.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Config("grid coordinates must be distinct".into()));
        }
        Ok(Grid { coords })
    }

    /// `{lo, lo+1, .., hi}`.
    pub fn range(lo: i64, hi: i64) -> Self {
        Grid::new((lo..=hi).map(Rational::from_integer).collect()).expect("nonempty range")
    }

    pub fn ints(values: &[i64]) -> Result<Self> {
        Grid::new(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.coords.binary_search(x).is_ok()
    }

    pub fn contains_report(&self, report: &Report) -> bool {
        report.points().iter().all(|p| self.contains(p))
    }
}

impl TryFrom<Vec<ExtendedCoord>> for Grid {
    type Error = Error;

    fn try_from(v: Vec<ExtendedCoord>) -> Result<Self> {
        let coords = v
            .iter()
            .map(|c| c.finite().ok_or_else(|| Error::Config(format!("grid coordinate {c} is not finite"))))
            .collect::<Result<Vec<_>>>()?;
        Grid::new(coords)
    }
}

impl From<Grid> for Vec<ExtendedCoord> {
    fn from(g: Grid) -> Self {
        g.coords.into_iter().map(ExtendedCoord::Finite).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Manipulation,
    Replication,
    Hiding,
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Action::Manipulation => "manipulation",
            Action::Replication => "replication",
            Action::Hiding => "hiding",
        })
    }
}

/// Which strategic actions an agent may combine, and the largest report she
/// may submit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSet {
    pub actions: Vec<Action>,
    pub max_report_size: usize,
}

impl ActionSet {
    pub fn new(actions: &[Action], max_report_size: usize) -> Result<Self> {
        let mut actions = actions.to_vec();
        actions.sort_unstable();
        actions.dedup();
        let set = ActionSet { actions, max_report_size };
        set.validate()?;
        Ok(set)
    }

    pub fn full(max_report_size: usize) -> Self {
        ActionSet::new(&[Action::Manipulation, Action::Replication, Action::Hiding], max_report_size)
            .expect("nonempty")
    }

    pub fn manipulation_only() -> Self {
        // Manipulation never changes the report size, so the bound is unused.
        ActionSet { actions: vec![Action::Manipulation], max_report_size: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.actions.is_empty() {
            return Err(Error::Config("action set must not be empty".into()));
        }
        if self.max_report_size == 0 && self.changes_size() {
            return Err(Error::Config("max_report_size must be positive for replication or hiding".into()));
        }
        Ok(())
    }

    pub fn allows(&self, action: Action) -> bool {
        self.actions.contains(&action)
    }

    /// Whether any allowed action can change the report size away from the
    /// truthful size.
    pub fn changes_size(&self) -> bool {
        self.allows(Action::Replication) || self.allows(Action::Hiding)
    }
}

/// All multisets of exactly `size` elements drawn from `values` (sorted,
/// distinct), in lexicographic order.
pub fn multisets(values: &[Rational], size: usize) -> impl Iterator<Item = Vec<Rational>> + '_ {
    values.iter().copied().combinations_with_replacement(size)
}

fn into_reports(points: impl Iterator<Item = Vec<Rational>>) -> Vec<Report> {
    points.map(|p| Report::new(p).expect("generated reports are nonempty")).collect()
}

fn shortlex(mut reports: Vec<Report>) -> Vec<Report> {
    reports.sort_by(Report::shortlex_cmp);
    reports.dedup();
    reports
}

fn support_counts(report: &Report) -> Vec<(Rational, usize)> {
    let mut counts: BTreeMap<Rational, usize> = BTreeMap::new();
    for p in report.points() {
        *counts.entry(*p).or_default() += 1;
    }
    counts.into_iter().collect()
}

/// Every report of the same size as `true_report` over `grid`.
pub fn manipulations(true_report: &Report, grid: &Grid) -> impl Iterator<Item = Report> {
    into_reports(multisets(grid.coords(), true_report.len())).into_iter()
}

/// The truthful report plus any extra copies of its own values, up to
/// `max_size` locations in total.
pub fn replications(true_report: &Report, max_size: usize) -> impl Iterator<Item = Report> {
    let support: Vec<Rational> = support_counts(true_report).into_iter().map(|(v, _)| v).collect();
    let base = true_report.points().to_vec();
    let extra_max = max_size.saturating_sub(base.len());
    let out: Vec<Report> = (0..=extra_max)
        .flat_map(|extra| {
            let base = base.clone();
            multisets(&support, extra)
                .map(move |add| base.iter().copied().chain(add).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        })
        .map(|p| Report::new(p).expect("nonempty"))
        .collect();
    shortlex(out).into_iter()
}

/// Every nonempty sub-multiset of `true_report`.
pub fn hidings(true_report: &Report) -> impl Iterator<Item = Report> {
    let counts = support_counts(true_report);
    let out: Vec<Report> = counts
        .iter()
        .map(|&(_, m)| 0..=m)
        .multi_cartesian_product()
        .filter(|keep| keep.iter().any(|&k| k > 0))
        .map(|keep| {
            let points = counts
                .iter()
                .zip(keep)
                .flat_map(|(&(v, _), k)| std::iter::repeat_n(v, k))
                .collect();
            Report::new(points).expect("nonempty")
        })
        .collect();
    shortlex(out).into_iter()
}

/// Every nonempty report over `grid` with at most `max_size` locations.
pub fn combined(grid: &Grid, max_size: usize) -> impl Iterator<Item = Report> + '_ {
    (1..=max_size).flat_map(move |size| into_reports(multisets(grid.coords(), size)))
}

/// The reports reachable from `true_report` by any combination of the allowed
/// actions.
///
/// With manipulation the values are free over the grid and the size ranges
/// from `1` (if hiding) or `|D|` up to `max_report_size` (if replicating) or
/// `|D|`. Without manipulation the values stay within the truthful support:
/// replication alone yields super-multisets, hiding alone sub-multisets, and
/// both together any nonempty multiset over the support.
pub fn deviations(true_report: &Report, grid: &Grid, actions: &ActionSet) -> Vec<Report> {
    let size = true_report.len();
    let hide = actions.allows(Action::Hiding);
    let replicate = actions.allows(Action::Replication);
    if actions.allows(Action::Manipulation) {
        let lo = if hide { 1 } else { size };
        let hi = if replicate { actions.max_report_size.max(size) } else { size };
        return (lo..=hi).flat_map(|s| into_reports(multisets(grid.coords(), s))).collect();
    }
    match (replicate, hide) {
        (true, true) => {
            let support: Vec<Rational> = support_counts(true_report).into_iter().map(|(v, _)| v).collect();
            let max = actions.max_report_size.max(size);
            (1..=max).flat_map(|s| into_reports(multisets(&support, s))).collect()
        }
        (true, false) => replications(true_report, actions.max_report_size).collect(),
        (false, true) => hidings(true_report).collect(),
        (false, false) => vec![true_report.clone()],
    }
}
