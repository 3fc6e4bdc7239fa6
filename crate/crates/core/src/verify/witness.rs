use serde::{Deserialize, Serialize};

use super::{efficiency, Property};
use crate::coord::ExtendedCoord;
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::model::{loss, Profile, Report};

/// A concrete, replayable counterexample.
///
/// Agent indices are 0-based. `losses_*` are aligned with `coalition` and are
/// always measured against the truthful reports.
///
/// * strategic checks: `coalition` are the colluding agents and
///   `deviated_reports` what each of them submits (members may submit their
///   truthful report);
/// * efficiency: `coalition` is every agent, `deviated_reports` is empty and
///   `output_after` is a location that Pareto-dominates the output;
/// * anonymity: `permutation` reorders the agents, `coalition` is empty;
/// * constancy: `coalition` is every agent and `deviated_reports` is a second
///   profile with a different output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationWitness {
    pub property: Property,
    pub true_profile: Profile,
    pub coalition: Vec<usize>,
    pub deviated_reports: Vec<Report>,
    pub losses_before: Vec<ExtendedCoord>,
    pub losses_after: Vec<ExtendedCoord>,
    pub output_before: ExtendedCoord,
    pub output_after: ExtendedCoord,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
}

impl ViolationWitness {
    /// Members whose submitted report differs from their truthful one.
    pub fn deviators(&self) -> Vec<usize> {
        self.coalition
            .iter()
            .zip(&self.deviated_reports)
            .filter(|(&i, r)| self.true_profile.reports()[i] != **r)
            .map(|(&i, _)| i)
            .collect()
    }

    /// The profile the mechanism sees after the deviation (or permutation).
    pub fn deviated_profile(&self) -> Profile {
        if let Some(perm) = &self.permutation {
            return self.true_profile.permuted(perm);
        }
        let mut reports = self.true_profile.reports().to_vec();
        for (&i, r) in self.coalition.iter().zip(&self.deviated_reports) {
            reports[i] = r.clone();
        }
        Profile::new(reports).expect("nonempty")
    }

    pub(crate) fn strategic(
        property: Property,
        true_profile: Profile,
        coalition: Vec<usize>,
        deviated_reports: Vec<Report>,
        output_before: ExtendedCoord,
        output_after: ExtendedCoord,
    ) -> Self {
        let truth = true_profile.reports();
        let losses_before = coalition.iter().map(|&i| loss(&output_before, &truth[i])).collect();
        let losses_after = coalition.iter().map(|&i| loss(&output_after, &truth[i])).collect();
        ViolationWitness {
            property,
            true_profile,
            coalition,
            deviated_reports,
            losses_before,
            losses_after,
            output_before,
            output_after,
            permutation: None,
        }
    }

    /// Re-runs `mech` on the stored profiles and checks that every recorded
    /// output and loss is reproduced exactly and still violates the property.
    pub fn replay(&self, mech: &dyn Mechanism) -> Result<()> {
        let mismatch = |what: &str| Err(Error::Replay(what.to_string()));
        let truth = self.true_profile.reports();
        if mech.evaluate(&self.true_profile)? != self.output_before {
            return mismatch("truthful output differs");
        }
        if self.coalition.iter().any(|&i| i >= truth.len()) {
            return mismatch("coalition member out of range");
        }
        let recomputed: Vec<ExtendedCoord> = self.coalition.iter().map(|&i| loss(&self.output_before, &truth[i])).collect();
        if recomputed != self.losses_before {
            return mismatch("losses before differ");
        }
        let after: Vec<ExtendedCoord> = self.coalition.iter().map(|&i| loss(&self.output_after, &truth[i])).collect();
        if after != self.losses_after {
            return mismatch("losses after differ");
        }
        let pairs = || self.losses_before.iter().zip(&self.losses_after);
        match self.property {
            Property::Sp | Property::GroupSp | Property::StrongGroupSp => {
                if self.deviated_reports.len() != self.coalition.len() {
                    return mismatch("one deviated report per coalition member expected");
                }
                if mech.evaluate(&self.deviated_profile())? != self.output_after {
                    return mismatch("deviated output differs");
                }
                let violates = match self.property {
                    Property::Sp => self.coalition.len() == 1 && pairs().all(|(b, a)| a < b),
                    Property::GroupSp => pairs().all(|(b, a)| a < b),
                    _ => pairs().all(|(b, a)| a <= b) && pairs().any(|(b, a)| a < b),
                };
                if !violates {
                    return mismatch("deviation does not violate the property");
                }
            }
            Property::Efficient => {
                if !efficiency::dominates(&self.true_profile, &self.output_after, &self.output_before) {
                    return mismatch("stored location does not dominate the output");
                }
            }
            Property::Anonymous => {
                let Some(perm) = &self.permutation else {
                    return mismatch("anonymity witness without permutation");
                };
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                if sorted != (0..truth.len()).collect::<Vec<_>>() {
                    return mismatch("not a permutation");
                }
                let out = mech.evaluate(&self.deviated_profile())?;
                if out != self.output_after || out == self.output_before {
                    return mismatch("permuted output does not reproduce");
                }
            }
            Property::Constant => {
                let out = mech.evaluate(&self.deviated_profile())?;
                if out != self.output_after || out == self.output_before {
                    return mismatch("second profile does not reproduce a different output");
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::Rational;
    use crate::mechanisms::MechanismSpec;

    #[test]
    fn deviators_skip_truthful_members() {
        let truth = Profile::ints(&[&[2, 4], &[2], &[4]]).unwrap();
        let reports = vec![Report::ints(&[4, 4]).unwrap(), Report::ints(&[4]).unwrap()];
        let c = ExtendedCoord::int;
        let w = ViolationWitness::strategic(Property::StrongGroupSp, truth, vec![0, 2], reports, c(2), c(4));
        assert_eq!(w.deviators(), vec![0]);
        assert_eq!(w.losses_before, vec![c(2), c(2)]);
        assert_eq!(w.losses_after, vec![c(2), c(0)]);
        assert_eq!(w.deviated_profile(), Profile::ints(&[&[4, 4], &[2], &[4]]).unwrap());
        let m = MechanismSpec::representative_median(vec![c(0), c(10)], Rational::from_integer(1));
        w.replay(&m).unwrap();
        let weaker = ViolationWitness { property: Property::GroupSp, ..w };
        assert!(matches!(weaker.replay(&m), Err(Error::Replay(_))));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"property":"sp","true_profile":[[0]],"coalition":[0],"deviated_reports":[[1]],
            "losses_before":[0],"losses_after":[1],"output_before":0,"output_after":1,"extra":1}"#;
        assert!(serde_json::from_str::<ViolationWitness>(text).is_err());
    }
}
