use crate::error::{Error, Result};

/// The shape of a support set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportKind {
    /// (0, 1).
    UnitInterval,
    /// A bounded open interval (lo, hi).
    Interval { lo: f64, hi: f64 },
    /// (0, ∞).
    PositiveReals,
    /// ℝ.
    AllReals,
    /// ℝⁿ.
    RealVectorSpace(usize),
}

/// Common support of the densities being compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportSpec {
    kind: SupportKind,
}

impl SupportSpec {
    pub const UNIT_INTERVAL: SupportSpec = SupportSpec {
        kind: SupportKind::UnitInterval,
    };
    pub const POSITIVE_REALS: SupportSpec = SupportSpec {
        kind: SupportKind::PositiveReals,
    };
    pub const ALL_REALS: SupportSpec = SupportSpec {
        kind: SupportKind::AllReals,
    };

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!(
                "interval ({lo}, {hi}) must be finite with lo < hi"
            )));
        }
        if lo == 0.0 && hi == 1.0 {
            return Ok(Self::UNIT_INTERVAL);
        }
        Ok(SupportSpec {
            kind: SupportKind::Interval { lo, hi },
        })
    }

    pub fn real_vector_space(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(SupportSpec {
            kind: SupportKind::RealVectorSpace(n),
        })
    }

    pub fn kind(&self) -> SupportKind {
        self.kind
    }

    /// Lebesgue measure |𝕊|, present iff finite.
    pub fn length(&self) -> Option<f64> {
        match self.kind {
            SupportKind::UnitInterval => Some(1.0),
            SupportKind::Interval { lo, hi } => Some(hi - lo),
            _ => None,
        }
    }

    /// Endpoints of a one-dimensional support (possibly infinite).
    pub fn bounds(&self) -> Option<(f64, f64)> {
        match self.kind {
            SupportKind::UnitInterval => Some((0.0, 1.0)),
            SupportKind::Interval { lo, hi } => Some((lo, hi)),
            SupportKind::PositiveReals => Some((0.0, f64::INFINITY)),
            SupportKind::AllReals => Some((f64::NEG_INFINITY, f64::INFINITY)),
            SupportKind::RealVectorSpace(_) => None,
        }
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            SupportKind::RealVectorSpace(n) => n,
            _ => 1,
        }
    }

    /// Whether the (one-dimensional) point lies in the open support.
    pub fn contains(&self, x: f64) -> bool {
        match self.bounds() {
            Some((lo, hi)) => x > lo && x < hi,
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_iff_finite() {
        assert_eq!(SupportSpec::UNIT_INTERVAL.length(), Some(1.0));
        assert_eq!(SupportSpec::interval(-1.0, 1.0).unwrap().length(), Some(2.0));
        assert_eq!(SupportSpec::POSITIVE_REALS.length(), None);
        assert_eq!(SupportSpec::ALL_REALS.length(), None);
        assert_eq!(SupportSpec::real_vector_space(3).unwrap().length(), None);
    }

    #[test]
    fn unit_interval_normalizes() {
        assert_eq!(SupportSpec::interval(0.0, 1.0).unwrap(), SupportSpec::UNIT_INTERVAL);
        assert!(SupportSpec::interval(1.0, 1.0).is_err());
    }

    #[test]
    fn membership() {
        assert!(SupportSpec::POSITIVE_REALS.contains(3.0));
        assert!(!SupportSpec::POSITIVE_REALS.contains(0.0));
        assert!(SupportSpec::ALL_REALS.contains(-7.0));
        assert!(!SupportSpec::UNIT_INTERVAL.contains(1.0));
    }
}
