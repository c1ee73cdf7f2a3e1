//! Per-family closed forms in classical parameters.
//!
//! Each row is obtained by integrating `p·q^{α−1}` directly. With
//! subscripts 1 for `p` and 2 for `q`:
//!
//! | family      | existence                       | h_α(p; q)                                                              |
//! |-------------|---------------------------------|------------------------------------------------------------------------|
//! | Beta        | a_h, b_h > 0                    | ln B(a2,b2) + ln(B(a_h,b_h)/B(a1,b1))/(1−α)                            |
//! | Gamma       | k_h > 0, 1/θ_h > 0              | ln Γ(k2) + k2 ln θ2 + [ln Γ(k_h) + k_h ln θ_h − ln Γ(k1) − k1 ln θ1]/(1−α) |
//! | Chi-squared | as Gamma with k = ν/2, θ = 2    |                                                                        |
//! | Exponential | λ_h > 0                         | −ln λ2 + ln(λ1/λ_h)/(1−α)                                              |
//! | Gaussian    | σ_h² > 0                        | ½ ln(2πσ2²) + ln(σ2²/σ_h²)/(2(1−α)) + (μ1−μ2)²/(2σ_h²)                 |
//! | Laplace     | b2 + (α−1)b1 > 0, μ1 = μ2       | ln(2b2) + ln(b2/(b2+(α−1)b1))/(1−α)                                    |
//!
//! where `a_h = a1 + (α−1)(a2−1)`, `k_h = k1 + (α−1)(k2−1)`,
//! `1/θ_h = 1/θ1 + (α−1)/θ2`, `λ_h = λ1 + (α−1)λ2` and
//! `σ_h² = σ2² + (α−1)σ1²`.

use statrs::function::beta::ln_beta;
use statrs::function::gamma::{digamma, ln_gamma};

use super::{cross_entropy_multivariate_gaussian, unsupported, CrossEntropyResult, Method};
use crate::alpha::{AlphaKind, AlphaOrder};
use crate::error::{Error, Result};
use crate::exponential_family::{ExpFamilyDistribution as D, LN_2PI};

fn gamma_row(k1: f64, th1: f64, k2: f64, th2: f64, a: f64) -> CrossEntropyResult {
    let kh = k1 + (a - 1.0) * (k2 - 1.0);
    let rate_h = 1.0 / th1 + (a - 1.0) / th2;
    if kh <= 0.0 || rate_h <= 0.0 {
        return CrossEntropyResult::divergent(a, Method::ClosedForm);
    }
    let ln_i = ln_gamma(kh) - kh * rate_h.ln() - ln_gamma(k1) - k1 * th1.ln();
    CrossEntropyResult::new(ln_i / (1.0 - a) + ln_gamma(k2) + k2 * th2.ln(), Method::ClosedForm)
}

fn gamma_shannon(k1: f64, th1: f64, k2: f64, th2: f64) -> f64 {
    ln_gamma(k2) + k2 * th2.ln() - (k2 - 1.0) * (digamma(k1) + th1.ln()) + k1 * th1 / th2
}

fn same_laplace_location(m1: f64, m2: f64) -> Result<()> {
    if m1 != m2 {
        return Err(Error::InvalidParameter(format!(
            "the laplace closed form needs equal locations ({m1} vs {m2})"
        )));
    }
    Ok(())
}

/// Closed-form cross-entropy for two members of the same family.
///
/// Zero-mean multivariate Gaussians are delegated to
/// [`cross_entropy_multivariate_gaussian`]. The Shannon marker gives
/// [`shannon_cross_entropy_closed`].
pub fn cross_entropy_closed(f1: &D, f2: &D, alpha: AlphaOrder) -> Result<CrossEntropyResult> {
    f1.validate()?;
    f2.validate()?;
    let a = match alpha.kind() {
        AlphaKind::Finite(a) => a,
        AlphaKind::One => return shannon_cross_entropy_closed(f1, f2),
        AlphaKind::Infinity => return Err(unsupported(alpha, "cross_entropy_closed")),
    };
    let w = a - 1.0;
    let r = match (f1, f2) {
        (D::Beta { a: a1, b: b1 }, D::Beta { a: a2, b: b2 }) => {
            let ah = a1 + w * (a2 - 1.0);
            let bh = b1 + w * (b2 - 1.0);
            if ah <= 0.0 || bh <= 0.0 {
                CrossEntropyResult::divergent(a, Method::ClosedForm)
            } else {
                let v = ln_beta(*a2, *b2) + (ln_beta(ah, bh) - ln_beta(*a1, *b1)) / (1.0 - a);
                CrossEntropyResult::new(v, Method::ClosedForm)
            }
        }
        (D::Gamma { shape: k1, scale: t1 }, D::Gamma { shape: k2, scale: t2 }) => gamma_row(*k1, *t1, *k2, *t2, a),
        (D::ChiSquared { nu: n1 }, D::ChiSquared { nu: n2 }) => gamma_row(n1 / 2.0, 2.0, n2 / 2.0, 2.0, a),
        (D::Exponential { rate: l1 }, D::Exponential { rate: l2 }) => {
            let lh = l1 + w * l2;
            if lh <= 0.0 {
                CrossEntropyResult::divergent(a, Method::ClosedForm)
            } else {
                CrossEntropyResult::new(-l2.ln() + (l1 / lh).ln() / (1.0 - a), Method::ClosedForm)
            }
        }
        (D::Gaussian { mean: m1, var: v1 }, D::Gaussian { mean: m2, var: v2 }) => {
            let vh = v2 + w * v1;
            if vh <= 0.0 {
                CrossEntropyResult::divergent(a, Method::ClosedForm)
            } else {
                let d = m1 - m2;
                let v = 0.5 * (LN_2PI + v2.ln()) + (v2 / vh).ln() / (2.0 * (1.0 - a)) + 0.5 * d * d / vh;
                CrossEntropyResult::new(v, Method::ClosedForm)
            }
        }
        (D::Laplace { location: m1, scale: b1 }, D::Laplace { location: m2, scale: b2 }) => {
            same_laplace_location(*m1, *m2)?;
            let bh = b2 + w * b1;
            if bh <= 0.0 {
                CrossEntropyResult::divergent(a, Method::ClosedForm)
            } else {
                CrossEntropyResult::new((2.0 * b2).ln() + (b2 / bh).ln() / (1.0 - a), Method::ClosedForm)
            }
        }
        (D::MvnZeroMean { cov: c1 }, D::MvnZeroMean { cov: c2 }) => {
            return cross_entropy_multivariate_gaussian(c1, c2, alpha)
        }
        _ => return Err(Error::FamilyMismatch(f1.family().name(), f2.family().name())),
    };
    Ok(r)
}

/// Shannon differential cross-entropy −∫ p ln q for two members of the same
/// family, via the expected sufficient statistics of `p`.
pub fn shannon_cross_entropy_closed(f1: &D, f2: &D) -> Result<CrossEntropyResult> {
    f1.validate()?;
    f2.validate()?;
    let v = match (f1, f2) {
        (D::Beta { a: a1, b: b1 }, D::Beta { a: a2, b: b2 }) => {
            let ds = digamma(a1 + b1);
            ln_beta(*a2, *b2) - (a2 - 1.0) * (digamma(*a1) - ds) - (b2 - 1.0) * (digamma(*b1) - ds)
        }
        (D::Gamma { shape: k1, scale: t1 }, D::Gamma { shape: k2, scale: t2 }) => gamma_shannon(*k1, *t1, *k2, *t2),
        (D::ChiSquared { nu: n1 }, D::ChiSquared { nu: n2 }) => gamma_shannon(n1 / 2.0, 2.0, n2 / 2.0, 2.0),
        (D::Exponential { rate: l1 }, D::Exponential { rate: l2 }) => -l2.ln() + l2 / l1,
        (D::Gaussian { mean: m1, var: v1 }, D::Gaussian { mean: m2, var: v2 }) => {
            let d = m1 - m2;
            0.5 * (LN_2PI + v2.ln()) + (v1 + d * d) / (2.0 * v2)
        }
        (D::Laplace { location: m1, scale: b1 }, D::Laplace { location: m2, scale: b2 }) => {
            same_laplace_location(*m1, *m2)?;
            (2.0 * b2).ln() + b1 / b2
        }
        (D::MvnZeroMean { cov: c1 }, D::MvnZeroMean { cov: c2 }) => {
            return cross_entropy_multivariate_gaussian(c1, c2, AlphaOrder::ONE)
        }
        _ => return Err(Error::FamilyMismatch(f1.family().name(), f2.family().name())),
    };
    Ok(CrossEntropyResult::new(v, Method::ClosedForm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{shannon_cross_entropy_numeric, QuadratureSettings};
    use approx::assert_relative_eq;

    fn a(x: f64) -> AlphaOrder {
        AlphaOrder::new(x).unwrap()
    }

    #[test]
    fn uniform_beta_is_zero() {
        let u = D::beta(1.0, 1.0).unwrap();
        for al in [a(0.3), a(2.0), a(7.5), AlphaOrder::ONE] {
            assert!(cross_entropy_closed(&u, &u, al).unwrap().value.abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_example() {
        let p = D::exponential(2.0).unwrap();
        let q = D::exponential(3.0).unwrap();
        let v = cross_entropy_closed(&p, &q, a(2.0)).unwrap().value;
        assert_relative_eq!(v, (2.5f64).ln() - 3f64.ln(), epsilon = 1e-14);
        assert!((v - (-0.18232)).abs() < 1e-5);
    }

    #[test]
    fn shifted_gaussian_example() {
        // The integral ∫ N(1,1)·N(0,1) = exp(−1/4)/√(4π) gives
        // ½[ln 2π + ln 2 + ½].
        let p = D::gaussian(1.0, 1.0).unwrap();
        let q = D::gaussian(0.0, 1.0).unwrap();
        let v = cross_entropy_closed(&p, &q, a(2.0)).unwrap().value;
        assert_relative_eq!(v, 0.5 * (LN_2PI + 2f64.ln() + 0.5), epsilon = 1e-14);
        assert_relative_eq!(v, 1.5155121234846454, epsilon = 1e-12);
    }

    #[test]
    fn existence_conditions() {
        let p = D::exponential(1.0).unwrap();
        let q = D::exponential(4.0).unwrap();
        let r = cross_entropy_closed(&p, &q, a(0.5)).unwrap();
        assert!(r.diverged && r.value == f64::INFINITY);
        let p = D::laplace(0.0, 4.0).unwrap();
        let q = D::laplace(0.0, 1.0).unwrap();
        assert!(cross_entropy_closed(&p, &q, a(0.5)).unwrap().diverged);
        let q2 = D::laplace(1.0, 1.0).unwrap();
        assert!(cross_entropy_closed(&p, &q2, a(2.0)).is_err());
        let g1 = D::gamma(2.0, 1.0).unwrap();
        let g2 = D::gamma(0.5, 1.0).unwrap();
        let r = cross_entropy_closed(&g1, &g2, a(6.0)).unwrap();
        assert!(r.diverged && r.value == f64::NEG_INFINITY);
    }

    #[test]
    fn shannon_forms_match_quadrature() {
        let s = QuadratureSettings::default();
        let pairs = [
            (D::beta(2.0, 3.0).unwrap(), D::beta(1.5, 0.8).unwrap()),
            (D::gamma(2.5, 1.5).unwrap(), D::gamma(0.8, 2.0).unwrap()),
            (D::chi_squared(3.0).unwrap(), D::chi_squared(5.5).unwrap()),
            (D::exponential(2.0).unwrap(), D::exponential(0.5).unwrap()),
            (D::gaussian(1.0, 0.5).unwrap(), D::gaussian(-0.5, 2.0).unwrap()),
            (D::laplace(0.5, 0.7).unwrap(), D::laplace(0.5, 1.9).unwrap()),
        ];
        for (p, q) in &pairs {
            let c = shannon_cross_entropy_closed(p, q).unwrap().value;
            let n = shannon_cross_entropy_numeric(|x| p.ln_pdf(x), |x| q.ln_pdf(x), &p.support(), &s).unwrap();
            assert_relative_eq!(c, n, max_relative = 1e-8, epsilon = 1e-10);
        }
    }
}
