//! The mechanism catalog: every mechanism maps the agents' reports to a single
//! facility location on the extended line.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::coord::{rational_serde, ExtendedCoord, Rational};
use crate::error::{Error, Result};
use crate::model::{loss, median_of_sorted, odd_median, pooled_points, Profile, Report};

/// Anything that picks a facility location from a list of reports.
///
/// Implementations must be pure functions of the reports. The checkers in
/// [`crate::verify`] call `outcome` from several threads.
pub trait Mechanism: Sync {
    fn outcome(&self, reports: &[&Report]) -> Result<ExtendedCoord>;

    /// Finite constants the output can snap to (phantoms, thresholds,
    /// constant outputs). The search grid must contain all of them.
    fn breakpoints(&self) -> Vec<Rational> {
        Vec::new()
    }

    /// Open intervals whose interior, and both outer sides, the grid must
    /// reach for the search to be decisive.
    fn bands(&self) -> Vec<(Rational, Rational)> {
        Vec::new()
    }

    fn label(&self) -> String;

    fn evaluate(&self, profile: &Profile) -> Result<ExtendedCoord> {
        self.outcome(&profile.report_refs())
    }
}

/// Serializable description of one catalog mechanism and its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MechanismSpec {
    /// Median of all pooled locations plus `N+1` phantoms; blind to which agent
    /// reported what.
    PooledPhantomMedian { phantoms: Vec<ExtendedCoord> },
    /// Median of the agents' tie-broken median locations plus `n−1` phantoms.
    RepresentativeMedian {
        phantoms: Vec<ExtendedCoord>,
        #[serde(with = "rational_serde")]
        beta: Rational,
    },
    /// Representative median with `n+1` phantoms, then snapped to `t1` or `t2`
    /// by majority whenever it lands strictly between them.
    TwoThreshold {
        #[serde(with = "rational_serde")]
        t1: Rational,
        #[serde(with = "rational_serde")]
        t2: Rational,
        phantoms: Vec<ExtendedCoord>,
        #[serde(with = "rational_serde")]
        beta: Rational,
    },
    Constant { value: ExtendedCoord },
    /// Each location is relabelled by its owner's representative; the output is
    /// the representative of the relabelled multiset's median.
    WeightedRelabeledMedian {
        #[serde(with = "rational_serde")]
        beta: Rational,
    },
    /// Representative of the median of all pooled locations.
    PooledOptimal {
        #[serde(with = "rational_serde")]
        beta: Rational,
    },
}

pub const KINDS: [&str; 6] = [
    "pooled_phantom_median",
    "representative_median",
    "two_threshold",
    "constant",
    "weighted_relabeled_median",
    "pooled_optimal",
];

fn one() -> Rational {
    Rational::from_integer(1)
}

fn check_beta(beta: &Rational) -> Result<()> {
    if *beta < Rational::from_integer(0) || *beta > one() {
        return Err(Error::Config(format!("beta {beta} outside [0, 1]")));
    }
    Ok(())
}

fn check_phantoms(kind: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Config(format!("{kind} needs {want} phantoms, got {got}")));
    }
    Ok(())
}

fn sorted(mut v: Vec<ExtendedCoord>) -> Vec<ExtendedCoord> {
    v.sort_unstable();
    v
}

impl MechanismSpec {
    pub fn pooled_phantom_median(phantoms: Vec<ExtendedCoord>) -> Self {
        MechanismSpec::PooledPhantomMedian { phantoms: sorted(phantoms) }
    }

    pub fn representative_median(phantoms: Vec<ExtendedCoord>, beta: Rational) -> Self {
        MechanismSpec::RepresentativeMedian { phantoms: sorted(phantoms), beta }
    }

    pub fn two_threshold(t1: Rational, t2: Rational, phantoms: Vec<ExtendedCoord>, beta: Rational) -> Self {
        MechanismSpec::TwoThreshold { t1, t2, phantoms: sorted(phantoms), beta }
    }

    pub fn constant(value: ExtendedCoord) -> Self {
        MechanismSpec::Constant { value }
    }

    pub fn weighted_relabeled_median(beta: Rational) -> Self {
        MechanismSpec::WeightedRelabeledMedian { beta }
    }

    pub fn pooled_optimal(beta: Rational) -> Self {
        MechanismSpec::PooledOptimal { beta }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MechanismSpec::PooledPhantomMedian { .. } => KINDS[0],
            MechanismSpec::RepresentativeMedian { .. } => KINDS[1],
            MechanismSpec::TwoThreshold { .. } => KINDS[2],
            MechanismSpec::Constant { .. } => KINDS[3],
            MechanismSpec::WeightedRelabeledMedian { .. } => KINDS[4],
            MechanismSpec::PooledOptimal { .. } => KINDS[5],
        }
    }

    pub fn phantoms(&self) -> &[ExtendedCoord] {
        match self {
            MechanismSpec::PooledPhantomMedian { phantoms }
            | MechanismSpec::RepresentativeMedian { phantoms, .. }
            | MechanismSpec::TwoThreshold { phantoms, .. } => phantoms,
            _ => &[],
        }
    }

    /// The same mechanism with every location parameter shifted by `shift`.
    pub fn translated(&self, shift: Rational) -> Self {
        let moved = |v: &[ExtendedCoord]| v.iter().map(|c| *c + shift).collect::<Vec<_>>();
        match self {
            MechanismSpec::PooledPhantomMedian { phantoms } => MechanismSpec::PooledPhantomMedian { phantoms: moved(phantoms) },
            MechanismSpec::RepresentativeMedian { phantoms, beta } => {
                MechanismSpec::RepresentativeMedian { phantoms: moved(phantoms), beta: *beta }
            }
            MechanismSpec::TwoThreshold { t1, t2, phantoms, beta } => MechanismSpec::TwoThreshold {
                t1: t1 + shift,
                t2: t2 + shift,
                phantoms: moved(phantoms),
                beta: *beta,
            },
            MechanismSpec::Constant { value } => MechanismSpec::Constant { value: *value + shift },
            other => other.clone(),
        }
    }

    /// Sorts the phantoms and checks the parameters that do not depend on a
    /// profile. When `agents` is given, phantom counts tied to `n` are checked
    /// too; the `N+1` count of the pooled mechanism is checked per profile.
    pub fn validated(mut self, agents: Option<usize>) -> Result<Self> {
        match &mut self {
            MechanismSpec::PooledPhantomMedian { phantoms } => phantoms.sort_unstable(),
            MechanismSpec::RepresentativeMedian { phantoms, beta } => {
                phantoms.sort_unstable();
                check_beta(beta)?;
                if let Some(n) = agents {
                    check_phantoms(KINDS[1], phantoms.len(), n.saturating_sub(1))?;
                }
            }
            MechanismSpec::TwoThreshold { t1, t2, phantoms, beta } => {
                phantoms.sort_unstable();
                check_beta(beta)?;
                if t1 >= t2 {
                    return Err(Error::Config(format!("thresholds need t1 < t2, got {t1} >= {t2}")));
                }
                if let Some(n) = agents {
                    check_phantoms(KINDS[2], phantoms.len(), n + 1)?;
                }
            }
            MechanismSpec::Constant { .. } => {}
            MechanismSpec::WeightedRelabeledMedian { beta } | MechanismSpec::PooledOptimal { beta } => {
                check_beta(beta)?
            }
        }
        Ok(self)
    }
}

impl fmt::Display for MechanismSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[ExtendedCoord]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        let b = |r: &Rational| ExtendedCoord::Finite(*r);
        match self {
            MechanismSpec::PooledPhantomMedian { phantoms } => {
                write!(f, "pooled_phantom_median(phantoms=[{}])", list(phantoms))
            }
            MechanismSpec::RepresentativeMedian { phantoms, beta } => write!(
                f,
                "representative_median(phantoms=[{}], beta={})",
                list(phantoms),
                b(beta)
            ),
            MechanismSpec::TwoThreshold { t1, t2, phantoms, beta } => write!(
                f,
                "two_threshold(t1={}, t2={}, phantoms=[{}], beta={})",
                b(t1),
                b(t2),
                list(phantoms),
                b(beta)
            ),
            MechanismSpec::Constant { value } => write!(f, "constant({value})"),
            MechanismSpec::WeightedRelabeledMedian { beta } => {
                write!(f, "weighted_relabeled_median(beta={})", b(beta))
            }
            MechanismSpec::PooledOptimal { beta } => write!(f, "pooled_optimal(beta={})", b(beta)),
        }
    }
}

impl Mechanism for MechanismSpec {
    fn outcome(&self, reports: &[&Report]) -> Result<ExtendedCoord> {
        if reports.is_empty() {
            return Err(Error::Domain("no agents".into()));
        }
        match self {
            MechanismSpec::PooledPhantomMedian { phantoms } => pooled_phantom_median(reports, phantoms),
            MechanismSpec::RepresentativeMedian { phantoms, beta } => {
                representative_median(reports, phantoms, *beta)
            }
            MechanismSpec::TwoThreshold { t1, t2, phantoms, beta } => {
                two_threshold(reports, *t1, *t2, phantoms, *beta)
            }
            MechanismSpec::Constant { value } => Ok(*value),
            MechanismSpec::WeightedRelabeledMedian { beta } => Ok(weighted_relabeled_median(reports, *beta)),
            MechanismSpec::PooledOptimal { beta } => Ok(pooled_optimal(reports, *beta)),
        }
    }

    fn breakpoints(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.phantoms().iter().filter_map(ExtendedCoord::finite).collect();
        match self {
            MechanismSpec::TwoThreshold { t1, t2, .. } => out.extend([*t1, *t2]),
            MechanismSpec::Constant { value } => out.extend(value.finite()),
            _ => {}
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn bands(&self) -> Vec<(Rational, Rational)> {
        match self {
            MechanismSpec::TwoThreshold { t1, t2, .. } => vec![(*t1, *t2)],
            _ => Vec::new(),
        }
    }

    fn label(&self) -> String {
        self.to_string()
    }
}

/// `med(y_1..y_N, α_1..α_{N+1})` over the pooled locations.
pub fn pooled_phantom_median(reports: &[&Report], phantoms: &[ExtendedCoord]) -> Result<ExtendedCoord> {
    let pooled = pooled_points(reports);
    check_phantoms(KINDS[0], phantoms.len(), pooled.len() + 1)?;
    let mut all: Vec<ExtendedCoord> = pooled.into_iter().map(ExtendedCoord::Finite).collect();
    all.extend_from_slice(phantoms);
    Ok(odd_median(&mut all))
}

/// `med(y_1*, .., y_n*, α_1, .., α_{n−1})` with `y_i* = β·lo_i + (1−β)·hi_i`.
pub fn representative_median(
    reports: &[&Report],
    phantoms: &[ExtendedCoord],
    beta: Rational,
) -> Result<ExtendedCoord> {
    check_phantoms(KINDS[1], phantoms.len(), reports.len() - 1)?;
    Ok(phantom_median_of_representatives(reports, phantoms, beta))
}

fn phantom_median_of_representatives(
    reports: &[&Report],
    phantoms: &[ExtendedCoord],
    beta: Rational,
) -> ExtendedCoord {
    let mut all: Vec<ExtendedCoord> = Vec::with_capacity(reports.len() + phantoms.len());
    all.extend(reports.iter().map(|r| r.representative(beta)));
    all.extend_from_slice(phantoms);
    odd_median(&mut all)
}

pub fn two_threshold(
    reports: &[&Report],
    t1: Rational,
    t2: Rational,
    phantoms: &[ExtendedCoord],
    beta: Rational,
) -> Result<ExtendedCoord> {
    if t1 >= t2 {
        return Err(Error::Config(format!("thresholds need t1 < t2, got {t1} >= {t2}")));
    }
    check_phantoms(KINDS[2], phantoms.len(), reports.len() + 1)?;
    let t_star = phantom_median_of_representatives(reports, phantoms, beta);
    let (lo, hi) = (ExtendedCoord::Finite(t1), ExtendedCoord::Finite(t2));
    if t_star <= lo || t_star >= hi {
        // Outside the band, or exactly on a threshold: pass through.
        return Ok(t_star);
    }
    let prefer_t1 = reports.iter().filter(|r| loss(&lo, r) <= loss(&hi, r)).count();
    let prefer_t2 = reports.len() - prefer_t1;
    Ok(if prefer_t1 >= prefer_t2 { lo } else { hi })
}

pub fn constant(_reports: &[&Report], value: ExtendedCoord) -> ExtendedCoord {
    value
}

pub fn weighted_relabeled_median(reports: &[&Report], beta: Rational) -> ExtendedCoord {
    // Agent i contributes |D_i| copies of y_i*; the median of that weighted
    // multiset is found by walking the sorted representatives.
    let mut weighted: Vec<(ExtendedCoord, usize)> =
        reports.iter().map(|r| (r.representative(beta), r.len())).collect();
    weighted.sort_unstable();
    let total: usize = weighted.iter().map(|(_, w)| w).sum();
    let nth = |k: usize| {
        let mut seen = 0;
        for (y, w) in &weighted {
            seen += w;
            if k < seen {
                return *y;
            }
        }
        unreachable!("index within total weight")
    };
    let (lo, hi) = if total % 2 == 1 {
        (nth(total / 2), nth(total / 2))
    } else {
        (nth(total / 2 - 1), nth(total / 2))
    };
    lo.blend(&hi, beta)
}

pub fn pooled_optimal(reports: &[&Report], beta: Rational) -> ExtendedCoord {
    let pooled = pooled_points(reports);
    let (lo, hi) = median_of_sorted(&pooled);
    ExtendedCoord::Finite(lo).blend(&ExtendedCoord::Finite(hi), beta)
}

/// `k` phantoms spread over `{0, .., 4}`: `[1]`, `[0, 4]`, `[0, 2, 4]`, ...
fn spread(k: usize) -> Vec<ExtendedCoord> {
    match k {
        0 => Vec::new(),
        1 => vec![ExtendedCoord::int(1)],
        _ => (0..k).map(|i| ExtendedCoord::Finite(Rational::new(4 * i as i64, k as i64 - 1))).collect(),
    }
}

/// A fixed sample of every catalog kind for `n` agents, with all finite
/// parameters drawn from `{0, .., 4}`.
///
/// The pooled phantom median is left out: its phantom count is tied to the
/// total number of reported locations, which deviations change.
pub fn catalog(n: usize) -> Vec<MechanismSpec> {
    let int = ExtendedCoord::int;
    let betas = [Rational::from_integer(0), Rational::new(1, 2), one()];
    let k = n.saturating_sub(1);
    let phantom_sets: Vec<Vec<ExtendedCoord>> = vec![
        vec![ExtendedCoord::NegInf; k],
        vec![ExtendedCoord::PosInf; k],
        vec![int(2); k],
        spread(k),
    ];
    let mut out = Vec::new();
    for phantoms in &phantom_sets {
        for beta in betas {
            out.push(MechanismSpec::representative_median(phantoms.clone(), beta));
        }
    }
    let mut tt_phantoms = vec![ExtendedCoord::NegInf; n];
    tt_phantoms.push(ExtendedCoord::PosInf);
    out.push(MechanismSpec::two_threshold(
        Rational::from_integer(1),
        Rational::from_integer(3),
        tt_phantoms,
        one(),
    ));
    out.push(MechanismSpec::constant(int(2)));
    for beta in betas {
        out.push(MechanismSpec::weighted_relabeled_median(beta));
    }
    for beta in betas {
        out.push(MechanismSpec::pooled_optimal(beta));
    }
    out.dedup();
    out
}
