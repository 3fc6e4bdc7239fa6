//! Facility location on a line when every agent controls several locations.
//!
//! The crate has three layers:
//!
//! * [`coord`] and [`model`]: exact coordinates on ℚ ∪ {±∞}, reports as
//!   multisets, median intervals and the sum-of-distances loss;
//! * [`mechanisms`]: the catalog of location rules (phantom medians, the
//!   representative median, a two-threshold rule, constants and two pooled
//!   baselines);
//! * [`deviations`] and [`verify`]: exhaustive enumeration of manipulation,
//!   replication and hiding over a finite grid, and checkers for
//!   strategyproofness, (strong) group strategyproofness, anonymity,
//!   efficiency and constancy that return replayable witnesses.
//!
//! [`scenarios`] reproduces fixed constructions as regression goldens and
//! [`campaign`] drives config-file verification runs for the `facloc` binary.
//!
//! ```
//! use facloc::{ExtendedCoord, Mechanism, MechanismSpec, Profile, Rational};
//!
//! let mech = MechanismSpec::representative_median(
//!     vec![ExtendedCoord::int(0), ExtendedCoord::int(10)],
//!     Rational::from_integer(1),
//! );
//! let profile = Profile::ints(&[&[2, 4], &[2], &[4]]).unwrap();
//! assert_eq!(mech.evaluate(&profile).unwrap(), ExtendedCoord::int(2));
//! ```

pub mod campaign;
pub mod coord;
pub mod deviations;
pub mod error;
pub mod mechanisms;
pub mod model;
pub mod scenarios;
pub mod verify;

pub use coord::{ExtendedCoord, Rational};
pub use deviations::{Action, ActionSet, Grid};
pub use error::{Error, Result};
pub use mechanisms::{Mechanism, MechanismSpec};
pub use model::{loss, median_interval, prefers, MedianInterval, Preference, Profile, Report};
pub use verify::{Property, SearchConfig, Verdict, ViolationWitness};
