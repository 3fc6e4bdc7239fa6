//! Reports, profiles, medians and the per-agent loss.
//!
//! An agent's loss for a facility at `y` is the sum of distances from `y` to
//! each of her locations. It is flat on the median interval of her locations
//! and strictly increasing away from it on either side, so the median interval
//! is the set of her optimal locations.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::coord::{ExtendedCoord, Rational};
use crate::error::{Error, Result};

/// Median of a multiset: a single point for odd size, `[t_{k/2}, t_{k/2+1}]`
/// for even size (1-based indices over the sorted multiset).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MedianInterval {
    pub lo: ExtendedCoord,
    pub hi: ExtendedCoord,
}

impl MedianInterval {
    pub fn new(lo: ExtendedCoord, hi: ExtendedCoord) -> Result<Self> {
        if lo > hi {
            return Err(Error::Domain(format!("median interval [{lo}, {hi}] is reversed")));
        }
        Ok(MedianInterval { lo, hi })
    }

    pub fn point(y: ExtendedCoord) -> Self {
        MedianInterval { lo: y, hi: y }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, y: &ExtendedCoord) -> bool {
        self.lo <= *y && *y <= self.hi
    }

    /// `beta·lo + (1−beta)·hi`, the tie-broken single summary of the interval.
    pub fn representative(&self, beta: Rational) -> ExtendedCoord {
        self.lo.blend(&self.hi, beta)
    }
}

/// Median interval of an already sorted, nonempty slice.
pub(crate) fn median_of_sorted<T: Copy>(sorted: &[T]) -> (T, T) {
    let k = sorted.len();
    if k % 2 == 1 {
        (sorted[k / 2], sorted[k / 2])
    } else {
        (sorted[k / 2 - 1], sorted[k / 2])
    }
}

pub fn median_interval(points: &[ExtendedCoord]) -> Result<MedianInterval> {
    if points.is_empty() {
        return Err(Error::Domain("median of an empty multiset".into()));
    }
    let mut sorted = points.to_vec();
    sorted.sort_unstable();
    let (lo, hi) = median_of_sorted(&sorted);
    Ok(MedianInterval { lo, hi })
}

/// The unique median of an odd-size multiset.
pub(crate) fn odd_median(points: &mut [ExtendedCoord]) -> ExtendedCoord {
    debug_assert!(points.len() % 2 == 1);
    let mid = points.len() / 2;
    *points.select_nth_unstable(mid).1
}

/// One agent's submission: a nonempty multiset of finite locations, stored
/// sorted so that equality is multiset equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Report {
    points: Vec<Rational>,
    median: MedianInterval,
}

impl Report {
    pub fn new(mut points: Vec<Rational>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Domain("a report needs at least one location".into()));
        }
        points.sort_unstable();
        let (lo, hi) = median_of_sorted(&points);
        let median = MedianInterval {
            lo: ExtendedCoord::Finite(lo),
            hi: ExtendedCoord::Finite(hi),
        };
        Ok(Report { points, median })
    }

    /// Builds a report from finite coordinates; infinite ones are rejected.
    pub fn from_coords(coords: &[ExtendedCoord]) -> Result<Self> {
        let points = coords
            .iter()
            .map(|c| {
                c.finite()
                    .ok_or_else(|| Error::Domain(format!("report location {c} is not finite")))
            })
            .collect::<Result<Vec<_>>>()?;
        Report::new(points)
    }

    pub fn ints(values: &[i64]) -> Result<Self> {
        Report::new(values.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    pub fn points(&self) -> &[Rational] {
        &self.points
    }

    pub fn coords(&self) -> Vec<ExtendedCoord> {
        self.points.iter().copied().map(ExtendedCoord::Finite).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn median(&self) -> MedianInterval {
        self.median
    }

    pub fn representative(&self, beta: Rational) -> ExtendedCoord {
        self.median.representative(beta)
    }

    pub fn translate(&self, shift: Rational) -> Report {
        Report::new(self.points.iter().map(|p| *p + shift).collect())
            .expect("translation keeps the report nonempty")
    }

    /// Shortlex order: smaller reports first, then lexicographic.
    pub fn shortlex_cmp(&self, other: &Report) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.points.cmp(&other.points))
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords().iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Report {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<ExtendedCoord>::deserialize(d)?;
        Report::from_coords(&coords).map_err(serde::de::Error::custom)
    }
}

/// Total distance from `y` to the locations of `report`; `+∞` for infinite `y`.
pub fn loss(y: &ExtendedCoord, report: &Report) -> ExtendedCoord {
    match y {
        ExtendedCoord::Finite(y) => {
            let mut total = Rational::from_integer(0);
            for p in report.points() {
                total += if p > y { *p - *y } else { *y - *p };
            }
            ExtendedCoord::Finite(total)
        }
        _ => ExtendedCoord::PosInf,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preference {
    A,
    B,
    Tie,
}

/// Which of two facility locations the holder of `report` prefers.
pub fn prefers(report: &Report, a: &ExtendedCoord, b: &ExtendedCoord) -> Preference {
    match loss(a, report).cmp(&loss(b, report)) {
        Ordering::Less => Preference::A,
        Ordering::Greater => Preference::B,
        Ordering::Equal => Preference::Tie,
    }
}

/// The reports of all agents, in agent order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Report>", into = "Vec<Report>")]
pub struct Profile {
    reports: Vec<Report>,
}

impl TryFrom<Vec<Report>> for Profile {
    type Error = Error;

    fn try_from(reports: Vec<Report>) -> Result<Self> {
        Profile::new(reports)
    }
}

impl From<Profile> for Vec<Report> {
    fn from(p: Profile) -> Self {
        p.reports
    }
}

impl Profile {
    pub fn new(reports: Vec<Report>) -> Result<Self> {
        if reports.is_empty() {
            return Err(Error::Domain("a profile needs at least one agent".into()));
        }
        Ok(Profile { reports })
    }

    /// Convenience constructor from integer locations.
    pub fn ints(reports: &[&[i64]]) -> Result<Self> {
        Profile::new(reports.iter().map(|r| Report::ints(r)).collect::<Result<_>>()?)
    }

    pub fn reports(&self) -> &[Report] {
        &self.reports
    }

    pub fn agents(&self) -> usize {
        self.reports.len()
    }

    pub fn report_refs(&self) -> Vec<&Report> {
        self.reports.iter().collect()
    }

    /// `N`, the number of reported locations over all agents.
    pub fn total_points(&self) -> usize {
        self.reports.iter().map(Report::len).sum()
    }

    /// The multiset union of all reports, sorted. Independent of agent order.
    pub fn pooled(&self) -> Vec<Rational> {
        pooled_points(&self.report_refs())
    }

    pub fn with_report(&self, agent: usize, report: Report) -> Profile {
        let mut reports = self.reports.clone();
        reports[agent] = report;
        Profile { reports }
    }

    pub fn permuted(&self, perm: &[usize]) -> Profile {
        Profile {
            reports: perm.iter().map(|&i| self.reports[i].clone()).collect(),
        }
    }

    pub fn losses_at(&self, y: &ExtendedCoord) -> Vec<ExtendedCoord> {
        self.reports.iter().map(|r| loss(y, r)).collect()
    }
}

pub(crate) fn pooled_points(reports: &[&Report]) -> Vec<Rational> {
    let mut all: Vec<Rational> = reports.iter().flat_map(|r| r.points().iter().copied()).collect();
    all.sort_unstable();
    all
}
