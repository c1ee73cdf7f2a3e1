//! Differential Rényi cross-entropy.
//!
//! Three independent routes are provided for exponential-family pairs:
//!
//! - [`cross_entropy_natural`] works purely on natural parameters,
//!   `h = [A(η1) − A(η_h) + ln E_h]/(1−α) − A(η2)` with `η_h = η1 + (α−1)η2`;
//! - [`cross_entropy_closed`] evaluates per-family formulas in classical
//!   parameters;
//! - [`cross_entropy_quadrature`] integrates `p·q^{α−1}` numerically.
//!
//! The special cases for uniform, exponential and Gaussian `q` (or uniform `p`)
//! live in [`special`], and the zero-mean multivariate Gaussian in
//! [`cross_entropy_multivariate_gaussian`].
//!
//! Whenever the defining integral diverges the result carries `diverged = true`
//! and an infinite value: `+inf` for α < 1 and `-inf` for α > 1, since the
//! integral is `+inf` either way and `1/(1−α)` flips sign.

mod closed;
pub mod special;

use nalgebra::DMatrix;

use crate::alpha::{AlphaKind, AlphaOrder};
use crate::error::{Error, Result};
use crate::exponential_family::{combine_natural, log_base_expectation, spd_log_det, ExpFamilyDistribution, LN_2PI};
use crate::oracle::{cross_entropy_numeric, integrate_nonnegative, shannon_cross_entropy_numeric, weighted_density, QuadratureSettings};
use crate::support::SupportSpec;

pub use closed::{cross_entropy_closed, shannon_cross_entropy_closed};
pub use special::{
    cross_entropy_p_uniform, cross_entropy_q_exponential, cross_entropy_q_gaussian, cross_entropy_q_uniform,
    MgfFunction,
};

/// Which route produced a [`CrossEntropyResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    NaturalParams,
    ClosedForm,
    SpecialCase,
    Quadrature,
}

/// A cross-entropy value in nats together with its provenance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossEntropyResult {
    pub value: f64,
    pub method: Method,
    /// True iff `value` is infinite.
    pub diverged: bool,
}

impl CrossEntropyResult {
    pub fn new(value: f64, method: Method) -> Self {
        CrossEntropyResult {
            value,
            method,
            diverged: value.is_infinite(),
        }
    }

    /// The value of `(1/(1−α)) ln ∞`.
    pub(crate) fn divergent(alpha: f64, method: Method) -> Self {
        let value = if alpha < 1.0 { f64::INFINITY } else { f64::NEG_INFINITY };
        Self::new(value, method)
    }
}

pub(crate) fn unsupported(alpha: AlphaOrder, operation: &'static str) -> Error {
    Error::UnsupportedAlpha {
        alpha: alpha.to_string(),
        operation,
    }
}

/// Cross-entropy through natural parameters only.
///
/// With the Shannon marker, univariate pairs are integrated numerically and
/// multivariate Gaussians use the closed Shannon form.
pub fn cross_entropy_natural(
    f1: &ExpFamilyDistribution,
    f2: &ExpFamilyDistribution,
    alpha: AlphaOrder,
) -> Result<CrossEntropyResult> {
    if f1.family() != f2.family() {
        return Err(Error::FamilyMismatch(f1.family().name(), f2.family().name()));
    }
    let a = match alpha.kind() {
        AlphaKind::Finite(a) => a,
        AlphaKind::One if f1.dim() > 1 => {
            let mut r = shannon_cross_entropy_closed(f1, f2)?;
            r.method = Method::NaturalParams;
            return Ok(r);
        }
        AlphaKind::One => return cross_entropy_quadrature(f1, f2, alpha, &QuadratureSettings::from_env()?),
        AlphaKind::Infinity => return Err(unsupported(alpha, "cross_entropy_natural")),
    };
    let eta1 = f1.to_natural()?;
    let eta2 = f2.to_natural()?;
    let eta_h = match combine_natural(&eta1, &eta2, alpha) {
        Ok(e) => e,
        Err(Error::OutOfDomain { .. }) => return Ok(CrossEntropyResult::divergent(a, Method::NaturalParams)),
        Err(e) => return Err(e),
    };
    let ln_e = log_base_expectation(&eta_h, alpha)?;
    let value = (eta1.log_partition()? - eta_h.log_partition()? + ln_e) / (1.0 - a) - eta2.log_partition()?;
    Ok(CrossEntropyResult::new(value, Method::NaturalParams))
}

/// Cross-entropy by adaptive quadrature of the defining integral.
///
/// Works for any pair of univariate densities; `p = f1` fixes the support.
/// Beta pairs are integrated over (0, ½] twice, once reflected through
/// x ↦ 1 − x, so that neither endpoint singularity sits where floats are sparse.
pub fn cross_entropy_quadrature(
    f1: &ExpFamilyDistribution,
    f2: &ExpFamilyDistribution,
    alpha: AlphaOrder,
    settings: &QuadratureSettings,
) -> Result<CrossEntropyResult> {
    if f1.dim() != 1 || f2.dim() != 1 {
        return Err(Error::InvalidParameter(
            "quadrature is one-dimensional; use the multivariate Gaussian form".into(),
        ));
    }
    if alpha.is_infinite() {
        return Err(unsupported(alpha, "cross_entropy_quadrature"));
    }
    if let (ExpFamilyDistribution::Beta { a: a1, b: b1 }, ExpFamilyDistribution::Beta { a: a2, b: b2 }) = (f1, f2) {
        let r1 = ExpFamilyDistribution::beta(*b1, *a1)?;
        let r2 = ExpFamilyDistribution::beta(*b2, *a2)?;
        let half = SupportSpec::interval(0.0, 0.5)?;
        let value = match alpha.kind() {
            AlphaKind::Finite(a) => {
                let part = |p: &ExpFamilyDistribution, q: &ExpFamilyDistribution| {
                    integrate_nonnegative(|x| weighted_density(p.ln_pdf(x), q.ln_pdf(x), a - 1.0), &half, settings)
                };
                (part(f1, f2)? + part(&r1, &r2)?).ln() / (1.0 - a)
            }
            _ => {
                let part = |p: &ExpFamilyDistribution, q: &ExpFamilyDistribution| {
                    shannon_cross_entropy_numeric(|x| p.ln_pdf(x), |x| q.ln_pdf(x), &half, settings)
                };
                part(f1, f2)? + part(&r1, &r2)?
            }
        };
        return Ok(CrossEntropyResult::new(value, Method::Quadrature));
    }
    let value = cross_entropy_numeric(|x| f1.ln_pdf(x), |x| f2.ln_pdf(x), &f1.support(), alpha, settings)?;
    Ok(CrossEntropyResult::new(value, Method::Quadrature))
}

fn checked_cov(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    ExpFamilyDistribution::mvn_zero_mean(m.clone())?;
    m.clone().cholesky().map(|c| c.inverse()).ok_or(Error::NotPositiveDefinite)
}

/// Cross-entropy between N(0, Σ1) and N(0, Σ2):
/// `ln(|Σ1||S|)/(2α−2) + ½ ln|Σ2| + (n/2) ln 2π` with `S = Σ1⁻¹ + (α−1)Σ2⁻¹`.
///
/// S fails to be positive definite only for α < 1, where the integral diverges.
pub fn cross_entropy_multivariate_gaussian(
    sigma1: &DMatrix<f64>,
    sigma2: &DMatrix<f64>,
    alpha: AlphaOrder,
) -> Result<CrossEntropyResult> {
    let inv1 = checked_cov(sigma1)?;
    let inv2 = checked_cov(sigma2)?;
    let n = sigma1.nrows();
    if sigma2.nrows() != n {
        return Err(Error::DimensionMismatch(n, sigma2.nrows()));
    }
    let ld1 = spd_log_det(sigma1).ok_or(Error::NotPositiveDefinite)?;
    let ld2 = spd_log_det(sigma2).ok_or(Error::NotPositiveDefinite)?;
    let a = match alpha.kind() {
        AlphaKind::Finite(a) => a,
        AlphaKind::One => {
            let trace = (&inv2 * sigma1).trace();
            let value = 0.5 * (n as f64 * LN_2PI + ld2 + trace);
            return Ok(CrossEntropyResult::new(value, Method::ClosedForm));
        }
        AlphaKind::Infinity => return Err(unsupported(alpha, "cross_entropy_multivariate_gaussian")),
    };
    let s = &inv1 + &inv2 * (a - 1.0);
    let s = (&s + s.transpose()) * 0.5;
    let Some(ld_s) = spd_log_det(&s) else {
        return Ok(CrossEntropyResult::divergent(a, Method::ClosedForm));
    };
    let value = (ld1 + ld_s) / (2.0 * a - 2.0) + 0.5 * ld2 + 0.5 * n as f64 * LN_2PI;
    Ok(CrossEntropyResult::new(value, Method::ClosedForm))
}
