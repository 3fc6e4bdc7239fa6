//! Exact coordinates on the extended real line.
//!
//! Every location, phantom, threshold and mechanism output is an
//! [`ExtendedCoord`]: an exact rational or one of the two infinities. There is
//! no floating point anywhere in the crate; ties between losses are decided
//! exactly.

use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Exact rational number. `num_rational` keeps it in lowest terms with a
/// positive denominator.
pub type Rational = Rational64;

/// A point of ℚ ∪ {−∞, +∞}.
///
/// The derived order is the intended total order: `NegInf` sorts before every
/// finite value and `PosInf` after.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtendedCoord {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl ExtendedCoord {
    pub const ZERO: ExtendedCoord = ExtendedCoord::Finite(Rational::new_raw(0, 1));

    pub fn int(v: i64) -> Self {
        ExtendedCoord::Finite(Rational::from_integer(v))
    }

    /// `num / den`, reduced. Panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        ExtendedCoord::Finite(Rational::new(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedCoord::Finite(_))
    }

    pub fn finite(&self) -> Option<Rational> {
        match self {
            ExtendedCoord::Finite(r) => Some(*r),
            _ => None,
        }
    }

    /// Distance `|self − other|`. Any infinite operand gives `+∞`.
    pub fn distance(&self, other: &ExtendedCoord) -> ExtendedCoord {
        match (self, other) {
            (ExtendedCoord::Finite(a), ExtendedCoord::Finite(b)) => {
                ExtendedCoord::Finite((*a - *b).abs())
            }
            _ => ExtendedCoord::PosInf,
        }
    }

    /// Convex combination `w·self + (1−w)·other` for `w ∈ [0,1]`.
    ///
    /// The endpoints are returned untouched when `w` is 0 or 1, so infinite
    /// endpoints are fine as long as they carry zero weight. An infinite
    /// endpoint with positive weight yields that infinity.
    pub fn blend(&self, other: &ExtendedCoord, w: Rational) -> ExtendedCoord {
        if w == Rational::from_integer(1) {
            return *self;
        }
        if w.is_zero() {
            return *other;
        }
        match (self, other) {
            (ExtendedCoord::Finite(a), ExtendedCoord::Finite(b)) => {
                ExtendedCoord::Finite(w * *a + (Rational::from_integer(1) - w) * *b)
            }
            (ExtendedCoord::Finite(_), inf) | (inf, _) => *inf,
        }
    }
}

impl From<i64> for ExtendedCoord {
    fn from(v: i64) -> Self {
        ExtendedCoord::int(v)
    }
}

impl From<Rational> for ExtendedCoord {
    fn from(r: Rational) -> Self {
        ExtendedCoord::Finite(r)
    }
}

impl Add for ExtendedCoord {
    type Output = ExtendedCoord;

    /// Sum with `+∞ + x = +∞`. `−∞ + +∞` is never formed by the crate and
    /// resolves to `+∞` (the loss convention).
    fn add(self, rhs: ExtendedCoord) -> ExtendedCoord {
        match (self, rhs) {
            (ExtendedCoord::Finite(a), ExtendedCoord::Finite(b)) => ExtendedCoord::Finite(a + b),
            (ExtendedCoord::PosInf, _) | (_, ExtendedCoord::PosInf) => ExtendedCoord::PosInf,
            _ => ExtendedCoord::NegInf,
        }
    }
}

impl Sub<Rational> for ExtendedCoord {
    type Output = ExtendedCoord;

    fn sub(self, rhs: Rational) -> ExtendedCoord {
        match self {
            ExtendedCoord::Finite(a) => ExtendedCoord::Finite(a - rhs),
            inf => inf,
        }
    }
}

impl Add<Rational> for ExtendedCoord {
    type Output = ExtendedCoord;

    fn add(self, rhs: Rational) -> ExtendedCoord {
        match self {
            ExtendedCoord::Finite(a) => ExtendedCoord::Finite(a + rhs),
            inf => inf,
        }
    }
}

impl Mul<Rational> for ExtendedCoord {
    type Output = ExtendedCoord;

    /// Scaling by a positive rational; infinities are preserved.
    fn mul(self, rhs: Rational) -> ExtendedCoord {
        debug_assert!(rhs.is_positive());
        match self {
            ExtendedCoord::Finite(a) => ExtendedCoord::Finite(a * rhs),
            inf => inf,
        }
    }
}

/// Formats as `p/q`, a bare integer when `q = 1`, or `inf` / `-inf`.
impl fmt::Display for ExtendedCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedCoord::NegInf => f.write_str("-inf"),
            ExtendedCoord::PosInf => f.write_str("inf"),
            ExtendedCoord::Finite(r) => write_rational(f, r),
        }
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, r: &Rational) -> fmt::Result {
    if *r.denom() == 1 {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or `inf` / `+inf` / `-inf`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(p, q))
        }
        None => s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad()),
    }
}

pub fn format_rational(r: &Rational) -> String {
    ExtendedCoord::Finite(*r).to_string()
}

impl FromStr for ExtendedCoord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtendedCoord::PosInf),
            "-inf" => Ok(ExtendedCoord::NegInf),
            other => parse_rational(other).map(ExtendedCoord::Finite),
        }
    }
}

impl Serialize for ExtendedCoord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

struct CoordVisitor;

impl<'de> Visitor<'de> for CoordVisitor {
    type Value = ExtendedCoord;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a string such as \"3/4\", \"inf\" or \"-inf\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<ExtendedCoord, E> {
        Ok(ExtendedCoord::int(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<ExtendedCoord, E> {
        i64::try_from(v)
            .map(ExtendedCoord::int)
            .map_err(|_| E::custom("integer out of range"))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<ExtendedCoord, E> {
        v.parse().map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for ExtendedCoord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(CoordVisitor)
    }
}

/// Serde adapter for bare [`Rational`] fields (`p/q` strings or integers).
pub mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&ExtendedCoord::Finite(*r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        match ExtendedCoord::deserialize(d)? {
            ExtendedCoord::Finite(r) => Ok(r),
            _ => Err(de::Error::custom("expected a finite rational")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_puts_infinities_at_the_ends() {
        let mut v = vec![
            ExtendedCoord::PosInf,
            ExtendedCoord::int(3),
            ExtendedCoord::NegInf,
            ExtendedCoord::ratio(-7, 2),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                ExtendedCoord::NegInf,
                ExtendedCoord::ratio(-7, 2),
                ExtendedCoord::int(3),
                ExtendedCoord::PosInf
            ]
        );
    }

    #[test]
    fn canonical_form() {
        let c = ExtendedCoord::ratio(4, -6);
        let r = c.finite().unwrap();
        assert_eq!((*r.numer(), *r.denom()), (-2, 3));
        assert_eq!(c.to_string(), "-2/3");
        assert_eq!(ExtendedCoord::ratio(6, 3).to_string(), "2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-5", "3/4", "-1/2", "inf", "-inf"] {
            let c: ExtendedCoord = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
        assert_eq!("+inf".parse::<ExtendedCoord>().unwrap(), ExtendedCoord::PosInf);
        assert!("1/0".parse::<ExtendedCoord>().is_err());
        assert!("x".parse::<ExtendedCoord>().is_err());
    }

    #[test]
    fn json_accepts_ints_and_strings() {
        let v: Vec<ExtendedCoord> = serde_json::from_str(r#"[1, "1/2", "-inf"]"#).unwrap();
        assert_eq!(
            v,
            vec![ExtendedCoord::int(1), ExtendedCoord::ratio(1, 2), ExtendedCoord::NegInf]
        );
        assert_eq!(serde_json::to_string(&v).unwrap(), r#"["1","1/2","-inf"]"#);
    }

    #[test]
    fn distance_to_infinity_is_infinite() {
        assert_eq!(ExtendedCoord::int(2).distance(&ExtendedCoord::NegInf), ExtendedCoord::PosInf);
        assert_eq!(ExtendedCoord::int(2).distance(&ExtendedCoord::int(-1)), ExtendedCoord::int(3));
    }

    #[test]
    fn blend_endpoints() {
        let half = Rational::new(1, 2);
        assert_eq!(
            ExtendedCoord::int(0).blend(&ExtendedCoord::int(3), half),
            ExtendedCoord::ratio(3, 2)
        );
        assert_eq!(
            ExtendedCoord::int(0).blend(&ExtendedCoord::PosInf, Rational::from_integer(1)),
            ExtendedCoord::int(0)
        );
    }
}
