//! The Rényi order α.
//!
//! Orders live in (0, 1) ∪ (1, ∞). The Shannon limit α → 1 and the
//! min-entropy limit α → ∞ are explicit markers rather than floats, so that
//! no caller ever evaluates `1/(1-α)` at or next to its pole.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Floats closer than this to 1 are rejected in favour of [`AlphaOrder::ONE`].
pub const NEAR_ONE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Repr {
    Finite(f64),
    One,
    Infinity,
}

/// A validated Rényi order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaOrder(Repr);

/// Borrowed view of an [`AlphaOrder`] for matching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaKind {
    /// A finite order different from 1.
    Finite(f64),
    /// The Shannon limit α → 1.
    One,
    /// The limit α → ∞.
    Infinity,
}

impl AlphaOrder {
    /// The Shannon marker.
    pub const ONE: AlphaOrder = AlphaOrder(Repr::One);
    /// The α → ∞ marker.
    pub const INFINITY: AlphaOrder = AlphaOrder(Repr::Infinity);

    /// Validates a finite order. `f64::INFINITY` maps to [`AlphaOrder::INFINITY`].
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidAlpha(alpha));
        }
        if alpha == f64::INFINITY {
            return Ok(Self::INFINITY);
        }
        if (alpha - 1.0).abs() <= NEAR_ONE {
            return Err(Error::AlphaNearOne(alpha));
        }
        Ok(AlphaOrder(Repr::Finite(alpha)))
    }

    pub fn kind(self) -> AlphaKind {
        match self.0 {
            Repr::Finite(a) => AlphaKind::Finite(a),
            Repr::One => AlphaKind::One,
            Repr::Infinity => AlphaKind::Infinity,
        }
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<f64> {
        match self.0 {
            Repr::Finite(a) => Some(a),
            _ => None,
        }
    }

    /// Numeric value with the markers mapped to `1.0` and `f64::INFINITY`.
    pub fn as_f64(self) -> f64 {
        match self.0 {
            Repr::Finite(a) => a,
            Repr::One => 1.0,
            Repr::Infinity => f64::INFINITY,
        }
    }

    pub fn is_one(self) -> bool {
        matches!(self.0, Repr::One)
    }

    pub fn is_infinite(self) -> bool {
        matches!(self.0, Repr::Infinity)
    }
}

impl fmt::Display for AlphaOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Repr::Finite(a) => write!(f, "{a}"),
            Repr::One => f.write_str("1"),
            Repr::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for AlphaOrder {
    type Err = Error;

    /// Accepts a positive float, `inf`/`infinity`, or `one`/`shannon` for the
    /// α → 1 marker. A bare `1` is rejected like any other near-one float.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" => Ok(Self::INFINITY),
            "one" | "shannon" => Ok(Self::ONE),
            other => {
                let v: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse alpha '{s}'")))?;
                Self::new(v)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_and_nan() {
        assert_eq!(AlphaOrder::new(0.0), Err(Error::InvalidAlpha(0.0)));
        assert!(AlphaOrder::new(-2.0).is_err());
        assert!(AlphaOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn near_one_needs_marker() {
        assert_eq!(AlphaOrder::new(1.0), Err(Error::AlphaNearOne(1.0)));
        assert!(AlphaOrder::new(1.0 + 1e-10).is_err());
        assert!(AlphaOrder::new(1.0 + 1e-6).is_ok());
    }

    #[test]
    fn parses_markers() {
        assert_eq!("inf".parse::<AlphaOrder>().unwrap(), AlphaOrder::INFINITY);
        assert_eq!("shannon".parse::<AlphaOrder>().unwrap(), AlphaOrder::ONE);
        assert_eq!("2.5".parse::<AlphaOrder>().unwrap().finite(), Some(2.5));
        assert!("1".parse::<AlphaOrder>().is_err());
        assert_eq!(AlphaOrder::new(f64::INFINITY).unwrap(), AlphaOrder::INFINITY);
    }
}
