//! Rationals modulo one.
//!
//! Twists, quadratic forms and cocycle values are all roots of unity in this
//! crate, so they are stored exactly as `r` with `θ = exp(2πi·r)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;

/// An element of Q/Z, normalized into `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Phase(Ratio<i64>);

impl Phase {
    pub const ZERO: Phase = Phase(Ratio::new_raw(0, 1));

    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        let n = r.numer().mod_floor(r.denom());
        Phase(Ratio::new(n, *r.denom()))
    }

    pub fn half() -> Self {
        Phase::new(1, 2)
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn numer(self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(self) -> f64 {
        self.0.to_f64().unwrap_or(0.0)
    }

    /// `exp(2πi·r)`.
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::TAU * self.to_f64())
    }

    /// Nearest phase with denominator dividing `denom`, if `x` (mod 1) lies within `tol`.
    pub fn snap(x: f64, denom: i64, tol: f64) -> Option<Phase> {
        let scaled = x * denom as f64;
        let k = scaled.round();
        if (scaled - k).abs() <= tol * denom as f64 {
            Some(Phase::new(k as i64, denom))
        } else {
            None
        }
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::from_ratio(self.0 + rhs.0)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_ratio(-self.0)
    }
}

impl Mul<i64> for Phase {
    type Output = Phase;
    fn mul(self, k: i64) -> Phase {
        Phase::from_ratio(self.0 * k)
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Phase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse {
            location: "rational".into(),
            message: format!("malformed rational {s:?}"),
        };
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let d: i64 = d.parse().map_err(|_| bad())?;
        if d <= 0 {
            return Err(bad());
        }
        Ok(Phase::new(n, d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_into_unit_interval() {
        assert_eq!(Phase::new(-1, 16), Phase::new(15, 16));
        assert_eq!(Phase::new(3, 2), Phase::half());
        assert_eq!(Phase::new(4, 4), Phase::ZERO);
        assert_eq!(-Phase::new(1, 4), Phase::new(3, 4));
    }

    #[test]
    fn parses_and_prints() {
        let p: Phase = "3/16".parse().unwrap();
        assert_eq!(p.to_string(), "3/16");
        assert_eq!("-1/2".parse::<Phase>().unwrap(), Phase::half());
        assert_eq!("0".parse::<Phase>().unwrap(), Phase::ZERO);
        assert!("1/0".parse::<Phase>().is_err());
        assert!("a/b".parse::<Phase>().is_err());
    }

    #[test]
    fn snapping() {
        assert_eq!(Phase::snap(0.0625 + 1e-9, 16, 1e-6), Some(Phase::new(1, 16)));
        assert_eq!(Phase::snap(0.1, 16, 1e-6), None);
    }
}
