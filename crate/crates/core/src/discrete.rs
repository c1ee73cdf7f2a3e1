//! Rényi and Shannon measures over a finite alphabet.
//!
//! Sums are evaluated in the log domain, so large orders (α = 10³ and beyond)
//! do not underflow. Zero masses follow one convention throughout: a term with
//! `p(x) = 0` contributes nothing, and `q(x) = 0 < p(x)` contributes `+inf`
//! when the exponent on `q` is negative and nothing when it is positive.

use crate::alpha::{AlphaKind, AlphaOrder};
use crate::error::{Error, Result};

/// Tolerance on the total mass of a distribution.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// A probability mass function over `{0, …, K−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidParameter("distribution needs at least one symbol".into()));
        }
        if let Some((i, v)) = probs.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidParameter(format!("mass {v} at index {i} must be finite and nonnegative")));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NotNormalized(sum));
        }
        Ok(Self { probs })
    }

    /// Normalizes nonnegative weights into a distribution.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if !(sum.is_finite() && sum > 0.0) {
            return Err(Error::InvalidParameter(format!("weights must have positive finite sum, got {sum}")));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("alphabet size must be positive".into()));
        }
        Ok(Self {
            probs: vec![1.0 / k as f64; k],
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    /// Largest mass.
    pub fn max_mass(&self) -> f64 {
        self.probs.iter().copied().fold(0.0, f64::max)
    }

    pub fn has_full_support(&self) -> bool {
        self.probs.iter().all(|&p| p > 0.0)
    }
}

fn same_alphabet(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<()> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(Error::DimensionMismatch(p.alphabet_size(), q.alphabet_size()));
    }
    Ok(())
}

/// ln Σ exp(terms), where terms may contain ±inf.
pub(crate) fn log_sum_exp(terms: impl IntoIterator<Item = f64>) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    let m = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + terms.iter().map(|t| (t - m).exp()).sum::<f64>().ln()
}

/// ln Σ_x p(x)·q(x)^e over the support of p, with the zero-mass conventions.
fn log_weighted_power_sum(p: &DiscreteDistribution, q: &DiscreteDistribution, e: f64) -> f64 {
    log_sum_exp(p.probs.iter().zip(&q.probs).filter(|(pi, _)| **pi > 0.0).map(|(&pi, &qi)| {
        if qi > 0.0 {
            pi.ln() + e * qi.ln()
        } else if e < 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        }
    }))
}

/// −Σ p ln p.
pub fn shannon_entropy(p: &DiscreteDistribution) -> f64 {
    -p.probs.iter().filter(|&&v| v > 0.0).map(|&v| v * v.ln()).sum::<f64>()
}

/// −Σ p ln q; `+inf` when q vanishes where p does not.
pub fn shannon_cross_entropy(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    same_alphabet(p, q)?;
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(&pi, &qi)| if qi > 0.0 { -pi * qi.ln() } else { f64::INFINITY })
        .sum())
}

/// Σ p ln(p/q), the Kullback–Leibler divergence (nonnegative).
pub fn kl_divergence(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    same_alphabet(p, q)?;
    Ok(p.probs
        .iter()
        .zip(&q.probs)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(&pi, &qi)| if qi > 0.0 { pi * (pi / qi).ln() } else { f64::INFINITY })
        .sum())
}

/// H_α(p) = 1/(1−α) · ln Σ p^α; Shannon entropy at α = 1 and −ln max p at α = ∞.
pub fn renyi_entropy(p: &DiscreteDistribution, alpha: AlphaOrder) -> Result<f64> {
    Ok(match alpha.kind() {
        AlphaKind::One => shannon_entropy(p),
        AlphaKind::Infinity => -p.max_mass().ln(),
        AlphaKind::Finite(a) => log_weighted_power_sum(p, p, a - 1.0) / (1.0 - a),
    })
}

/// D_α(p‖q) = 1/(α−1) · ln Σ p^α q^{1−α}.
///
/// Returns `+inf` when the sum diverges (α > 1 and q vanishes where p does not)
/// or vanishes (α < 1 and disjoint supports). α = 1 gives the KL divergence and
/// α = ∞ gives ln max p/q.
pub fn renyi_divergence(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: AlphaOrder) -> Result<f64> {
    same_alphabet(p, q)?;
    Ok(match alpha.kind() {
        AlphaKind::One => kl_divergence(p, q)?,
        AlphaKind::Infinity => p
            .probs
            .iter()
            .zip(&q.probs)
            .filter(|(pi, _)| **pi > 0.0)
            .map(|(&pi, &qi)| if qi > 0.0 { (pi / qi).ln() } else { f64::INFINITY })
            .fold(f64::NEG_INFINITY, f64::max),
        AlphaKind::Finite(a) => {
            // Σ p·(p/q)^{α−1}
            let log_sum = log_sum_exp(p.probs.iter().zip(&q.probs).filter(|(pi, _)| **pi > 0.0).map(|(&pi, &qi)| {
                if qi > 0.0 {
                    pi.ln() + (a - 1.0) * (pi / qi).ln()
                } else if a > 1.0 {
                    f64::INFINITY
                } else {
                    f64::NEG_INFINITY
                }
            }));
            log_sum / (a - 1.0)
        }
    })
}

/// H_α(p; q) = 1/(1−α) · ln Σ p(x) q(x)^{α−1}.
///
/// Nonnegative and non-increasing in α. α = 1 gives −Σ p ln q; α = ∞ gives
/// −ln of the largest q-mass on the support of p.
pub fn renyi_cross_entropy(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: AlphaOrder) -> Result<f64> {
    same_alphabet(p, q)?;
    Ok(match alpha.kind() {
        AlphaKind::One => shannon_cross_entropy(p, q)?,
        AlphaKind::Infinity => {
            let m = p
                .probs
                .iter()
                .zip(&q.probs)
                .filter(|(pi, _)| **pi > 0.0)
                .map(|(_, &qi)| qi)
                .fold(0.0, f64::max);
            -m.ln()
        }
        AlphaKind::Finite(a) => log_weighted_power_sum(p, q, a - 1.0) / (1.0 - a),
    })
}

/// The alternate cross-entropy D_α(p‖q) + H_α(p).
pub fn alt_cross_entropy(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: AlphaOrder) -> Result<f64> {
    let d = renyi_divergence(p, q, alpha)?;
    if d == f64::INFINITY {
        return Ok(d);
    }
    Ok(d + renyi_entropy(p, alpha)?)
}

/// −ln max q, the α → ∞ limit of H_α(p; q) for every full-support p.
pub fn cross_entropy_alpha_inf(q: &DiscreteDistribution) -> f64 {
    -q.max_mass().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(v: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::new(v.to_vec()).unwrap()
    }

    fn a(v: f64) -> AlphaOrder {
        AlphaOrder::new(v).unwrap()
    }

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol
    }

    #[test]
    fn validation() {
        assert!(DiscreteDistribution::new(vec![]).is_err());
        assert!(matches!(DiscreteDistribution::new(vec![0.5, 0.6]), Err(Error::NotNormalized(_))));
        assert!(DiscreteDistribution::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteDistribution::from_weights(vec![1.0, 3.0]).is_ok());
        let err = renyi_cross_entropy(&d(&[1.0]), &d(&[0.5, 0.5]), a(2.0));
        assert_eq!(err, Err(Error::DimensionMismatch(1, 2)));
    }

    #[test]
    fn entropy_examples() {
        let u4 = DiscreteDistribution::uniform(4).unwrap();
        assert!(close(renyi_entropy(&u4, a(2.0)).unwrap(), 4f64.ln(), 1e-15));
        let p = d(&[0.5, 0.3, 0.2]);
        assert!(close(renyi_entropy(&p, AlphaOrder::INFINITY).unwrap(), 2f64.ln(), 1e-15));
        // −ln(0.81 + 0.01)
        assert!(close(renyi_entropy(&d(&[0.9, 0.1]), a(2.0)).unwrap(), -(0.82f64).ln(), 1e-15));
        assert!(close(renyi_entropy(&d(&[0.9, 0.1]), a(2.0)).unwrap(), 0.198_450_938_7, 1e-10));
    }

    #[test]
    fn divergence_examples() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.9, 0.1]);
        assert!(renyi_divergence(&q, &q, a(3.0)).unwrap().abs() < 1e-15);
        let expect = (0.25 / 0.9 + 0.25 / 0.1f64).ln();
        assert!(close(renyi_divergence(&p, &q, a(2.0)).unwrap(), expect, 1e-15));
        assert!(close(expect, 1.021_651_247_5, 1e-9));
        assert_eq!(renyi_divergence(&p, &d(&[1.0, 0.0]), a(2.0)).unwrap(), f64::INFINITY);
        // α < 1 tolerates q = 0 < p
        assert!(renyi_divergence(&p, &d(&[1.0, 0.0]), a(0.5)).unwrap().is_finite());
        assert_eq!(renyi_divergence(&d(&[1.0, 0.0]), &d(&[0.0, 1.0]), a(0.5)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn kl_has_standard_sign() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[0.9, 0.1]);
        let kl = kl_divergence(&p, &q).unwrap();
        assert!(kl > 0.0);
        assert!(close(kl, 0.5 * (0.5 / 0.9f64).ln() + 0.5 * (0.5 / 0.1f64).ln(), 1e-15));
        assert_eq!(renyi_divergence(&p, &q, AlphaOrder::ONE).unwrap(), kl);
    }

    #[test]
    fn cross_entropy_examples() {
        let half = d(&[0.5, 0.5]);
        let q = d(&[0.9, 0.1]);
        assert!(close(renyi_cross_entropy(&half, &half, a(2.0)).unwrap(), 2f64.ln(), 1e-15));
        // −ln(0.45 + 0.05)
        assert!(close(renyi_cross_entropy(&half, &q, a(2.0)).unwrap(), 2f64.ln(), 1e-15));
        let shannon = -0.5 * 0.9f64.ln() - 0.5 * 0.1f64.ln();
        assert!(close(renyi_cross_entropy(&half, &q, AlphaOrder::ONE).unwrap(), shannon, 1e-15));
        assert!(close(shannon, 1.203_972_804_3, 1e-9));
    }

    #[test]
    fn cross_entropy_zero_conventions() {
        let p = d(&[0.5, 0.5]);
        let q = d(&[1.0, 0.0]);
        assert_eq!(renyi_cross_entropy(&p, &q, a(0.5)).unwrap(), f64::INFINITY);
        // α > 1: the q = 0 term drops out, leaving −ln(0.5)
        assert!(close(renyi_cross_entropy(&p, &q, a(2.0)).unwrap(), 2f64.ln(), 1e-15));
        assert_eq!(renyi_cross_entropy(&d(&[0.0, 1.0]), &q, a(2.0)).unwrap(), f64::INFINITY);
        // p = 0 terms never contribute
        assert!(close(renyi_cross_entropy(&d(&[1.0, 0.0]), &q, a(0.5)).unwrap(), 0.0, 1e-15));
    }

    #[test]
    fn alt_cross_entropy_examples() {
        let half = d(&[0.5, 0.5]);
        let q = d(&[0.9, 0.1]);
        assert!(close(alt_cross_entropy(&half, &half, a(2.0)).unwrap(), 2f64.ln(), 1e-15));
        let expect = (0.25 / 0.9 + 0.25 / 0.1f64).ln() + 2f64.ln();
        assert!(close(alt_cross_entropy(&half, &q, a(2.0)).unwrap(), expect, 1e-15));
        assert!(close(expect, 1.714_798_428, 1e-8));
        let shannon = renyi_cross_entropy(&half, &q, AlphaOrder::ONE).unwrap();
        assert!(close(alt_cross_entropy(&half, &q, AlphaOrder::ONE).unwrap(), shannon, 1e-15));
        assert!(close(alt_cross_entropy(&half, &q, a(1.0 + 1e-7)).unwrap(), shannon, 1e-6));
        assert_eq!(alt_cross_entropy(&half, &d(&[1.0, 0.0]), a(2.0)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn alpha_inf_examples() {
        assert!(close(cross_entropy_alpha_inf(&d(&[0.5, 0.3, 0.2])), 2f64.ln(), 1e-15));
        assert!(close(cross_entropy_alpha_inf(&DiscreteDistribution::uniform(7).unwrap()), 7f64.ln(), 1e-14));
        assert_eq!(cross_entropy_alpha_inf(&d(&[1.0, 0.0])), 0.0);
        let p = d(&[0.2, 0.3, 0.5]);
        let q = d(&[0.5, 0.3, 0.2]);
        assert_eq!(renyi_cross_entropy(&p, &q, AlphaOrder::INFINITY).unwrap(), cross_entropy_alpha_inf(&q));
    }

    #[test]
    fn large_alpha_does_not_underflow() {
        let p = d(&[0.2, 0.3, 0.5]);
        let q = d(&[0.2, 0.2, 0.6]);
        let v = renyi_cross_entropy(&p, &q, a(1e4)).unwrap();
        assert!(close(v, cross_entropy_alpha_inf(&q), 1e-3));
    }

    fn dist(k: usize) -> impl Strategy<Value = DiscreteDistribution> {
        prop::collection::vec(0.01f64..1.0, k).prop_map(|w| DiscreteDistribution::from_weights(w).unwrap())
    }

    fn pair() -> impl Strategy<Value = (DiscreteDistribution, DiscreteDistribution)> {
        (2usize..7).prop_flat_map(|k| (dist(k), dist(k)))
    }

    proptest! {
        #[test]
        fn monotone_in_alpha((p, q) in pair()) {
            let mut prev = f64::INFINITY;
            for i in 1..=100 {
                let al = i as f64 / 10.0;
                let alpha = if i == 10 { AlphaOrder::ONE } else { a(al) };
                let v = renyi_cross_entropy(&p, &q, alpha).unwrap();
                prop_assert!(v >= 0.0);
                prop_assert!(prev >= v - 1e-12, "alpha {}: {} then {}", al, prev, v);
                prev = v;
            }
        }

        #[test]
        fn self_reduction((p, _q) in pair(), al in 0.05f64..20.0) {
            prop_assume!((al - 1.0).abs() > 1e-6);
            let alpha = a(al);
            let x = renyi_cross_entropy(&p, &p, alpha).unwrap();
            let h = renyi_entropy(&p, alpha).unwrap();
            prop_assert!((x - h).abs() <= 1e-12);
        }

        #[test]
        fn limits((p, q) in pair()) {
            let shannon = shannon_cross_entropy(&p, &q).unwrap();
            for al in [1.0 - 1e-6, 1.0 + 1e-6] {
                prop_assert!((renyi_cross_entropy(&p, &q, a(al)).unwrap() - shannon).abs() <= 1e-4);
                prop_assert!((alt_cross_entropy(&p, &q, a(al)).unwrap() - shannon).abs() <= 1e-4);
            }
            prop_assert!((alt_cross_entropy(&p, &q, AlphaOrder::ONE).unwrap() - shannon).abs() <= 1e-6);
            let big = renyi_cross_entropy(&p, &q, a(1e3)).unwrap();
            prop_assert!((big - cross_entropy_alpha_inf(&q)).abs() <= 1e-2);
        }

        #[test]
        fn entropy_bounds(p in (1usize..9).prop_flat_map(dist), al in 0.05f64..20.0) {
            prop_assume!((al - 1.0).abs() > 1e-6);
            let h = renyi_entropy(&p, a(al)).unwrap();
            let k = p.alphabet_size() as f64;
            prop_assert!(h >= -1e-12 && h <= k.ln() + 1e-12);
        }
    }
}
