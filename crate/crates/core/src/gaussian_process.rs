//! Cross-entropy rates of stationary zero-mean Gaussian processes.
//!
//! With `f̃` the spectral density of the first process (the `p` side), `g̃` that
//! of the second (`q`) and `h̃ = g̃ + (α−1)f̃`,
//!
//! ```text
//! lim (1/n) h_α(Xⁿ; Yⁿ) = ½ ln 2π + 1/(4π(1−α)) ∫₀^{2π} [(2−α) ln g̃(λ) − ln h̃(λ)] dλ
//! ```
//!
//! and for finite `n`, with Toeplitz covariances and `Bⁿ = Σ_Yⁿ + (α−1)Σ_Xⁿ`,
//!
//! ```text
//! (1/n) h_α(Xⁿ; Yⁿ) = ½ ln 2π + [(2−α) ln|Σ_Yⁿ| − ln|Bⁿ|] / (2n(1−α)).
//! ```
//!
//! The spectral integrands are assumed Riemann integrable; for the supported
//! specs they are smooth and periodic, so the trapezoidal rule converges fast.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::alpha::{AlphaKind, AlphaOrder};
use crate::error::{Error, Result};
use crate::exponential_family::LN_2PI;

/// Grid size used to validate spectral densities and to start the spectral integral.
pub const PSD_GRID: usize = 4096;
/// Smallest admissible spectral density value.
pub const PSD_FLOOR: f64 = 1e-12;
const RATE_TOLERANCE: f64 = 1e-9;
const MAX_GRID: usize = 1 << 20;

/// Closed-form spectral densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralForm {
    /// σ² at every frequency.
    White { var: f64 },
    /// r(k) = var·ρ^|k|, f̃(λ) = var(1−ρ²)/(1 − 2ρ cos λ + ρ²).
    Ar1 { rho: f64, var: f64 },
}

impl SpectralForm {
    fn eval(&self, lambda: f64) -> f64 {
        match *self {
            SpectralForm::White { var } => var,
            SpectralForm::Ar1 { rho, var } => var * (1.0 - rho * rho) / (1.0 - 2.0 * rho * lambda.cos() + rho * rho),
        }
    }
}

/// A stationary zero-mean Gaussian process given by a truncated
/// autocovariance `r(0), …, r(m)` (zero beyond `m`), optionally with a
/// closed-form spectral density.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryGaussianSpec {
    autocov: Vec<f64>,
    spectral: Option<SpectralForm>,
}

fn truncated_psd(r: &[f64], lambda: f64) -> f64 {
    r[0] + 2.0 * r[1..].iter().enumerate().map(|(k, v)| v * ((k + 1) as f64 * lambda).cos()).sum::<f64>()
}

fn check_grid(f: impl Fn(f64) -> f64) -> Result<()> {
    for j in 0..=PSD_GRID {
        let lambda = 2.0 * PI * j as f64 / PSD_GRID as f64;
        let value = f(lambda);
        if !(value >= PSD_FLOOR) {
            return Err(Error::NonPositivePsd { lambda, value });
        }
    }
    Ok(())
}

impl StationaryGaussianSpec {
    /// Validates `r(0) > 0` and a truncated spectral density of at least
    /// [`PSD_FLOOR`] on a [`PSD_GRID`]-point grid. A strictly positive
    /// spectral density makes every Toeplitz section positive definite.
    pub fn from_autocovariance(autocov: Vec<f64>) -> Result<Self> {
        Self::build(autocov, None)
    }

    fn build(autocov: Vec<f64>, spectral: Option<SpectralForm>) -> Result<Self> {
        if autocov.is_empty() || autocov.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("autocovariance must be non-empty and finite".into()));
        }
        if autocov[0] <= 0.0 {
            return Err(Error::InvalidParameter(format!("r(0) = {} must be positive", autocov[0])));
        }
        check_grid(|l| truncated_psd(&autocov, l))?;
        if let Some(form) = spectral {
            check_grid(|l| form.eval(l))?;
        }
        Ok(StationaryGaussianSpec { autocov, spectral })
    }

    /// White noise with variance `var`.
    pub fn white_noise(var: f64) -> Result<Self> {
        if !(var.is_finite() && var > 0.0) {
            return Err(Error::InvalidParameter(format!("variance {var} must be positive")));
        }
        Self::build(vec![var], Some(SpectralForm::White { var }))
    }

    /// AR(1) with lag-one correlation `rho` and marginal variance `var`,
    /// autocovariance truncated after lag `m`.
    pub fn ar1(rho: f64, var: f64, m: usize) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!("|rho| = {} must be below 1", rho.abs())));
        }
        if !(var.is_finite() && var > 0.0) {
            return Err(Error::InvalidParameter(format!("variance {var} must be positive")));
        }
        let autocov = (0..=m).map(|k| var * rho.powi(k as i32)).collect();
        Self::build(autocov, Some(SpectralForm::Ar1 { rho, var }))
    }

    pub fn autocovariance(&self) -> &[f64] {
        &self.autocov
    }

    /// Truncation order m.
    pub fn truncation_order(&self) -> usize {
        self.autocov.len() - 1
    }

    pub fn spectral_form(&self) -> Option<SpectralForm> {
        self.spectral
    }

    /// r(k), zero beyond the truncation.
    pub fn r(&self, k: usize) -> f64 {
        self.autocov.get(k).copied().unwrap_or(0.0)
    }

    fn psd_unchecked(&self, lambda: f64) -> f64 {
        match self.spectral {
            Some(form) => form.eval(lambda),
            None => truncated_psd(&self.autocov, lambda),
        }
    }
}

/// The n×n Toeplitz covariance with first row r(0), …, r(n−1).
pub fn toeplitz_cov(spec: &StationaryGaussianSpec, n: usize) -> Result<DMatrix<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let m = DMatrix::from_fn(n, n, |i, j| spec.r(i.abs_diff(j)));
    if m.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(m)
}

/// Spectral density at λ ∈ [0, 2π]: the closed form if the process carries one,
/// else `r(0) + 2 Σ r(k) cos kλ`.
pub fn psd(spec: &StationaryGaussianSpec, lambda: f64) -> Result<f64> {
    if !(0.0..=2.0 * PI).contains(&lambda) {
        return Err(Error::InvalidParameter(format!("frequency {lambda} outside [0, 2π]")));
    }
    let value = spec.psd_unchecked(lambda);
    if !(value > 0.0) {
        return Err(Error::NonPositivePsd { lambda, value });
    }
    Ok(value)
}

/// Mean of a 2π-periodic function by the trapezoidal rule, doubling the grid
/// from [`PSD_GRID`] points until two successive values differ by at most 1e−9.
/// `None` from the integrand aborts with `None`.
fn periodic_mean(f: impl Fn(f64) -> Option<f64>) -> Result<Option<f64>> {
    let sum_at = |n: usize, offset: usize, stride: usize| -> Option<f64> {
        let mut s = 0.0;
        let mut j = offset;
        while j < n {
            s += f(2.0 * PI * j as f64 / n as f64)?;
            j += stride;
        }
        Some(s)
    };
    let mut n = PSD_GRID;
    let Some(mut sum) = sum_at(n, 0, 1) else { return Ok(None) };
    let mut mean = sum / n as f64;
    while n < MAX_GRID {
        // the new grid interleaves midpoints with the old one
        let Some(mid) = sum_at(2 * n, 1, 2) else { return Ok(None) };
        sum += mid;
        n *= 2;
        let next = sum / n as f64;
        let settled = (next - mean).abs() <= RATE_TOLERANCE;
        mean = next;
        if settled {
            return Ok(Some(mean));
        }
    }
    Err(Error::IterationLimit("spectral trapezoid refinement"))
}

/// Cross-entropy rate from the spectral densities.
///
/// With the Shannon marker the rate is `½ ln 2π + (1/4π) ∫ [ln g̃ + f̃/g̃]`.
/// For α < 1, `h̃ ≤ 0` somewhere means the finite-n integrals diverge and
/// `+inf` is returned.
pub fn rate_spectral(x: &StationaryGaussianSpec, y: &StationaryGaussianSpec, alpha: AlphaOrder) -> Result<f64> {
    let a = match alpha.kind() {
        AlphaKind::Finite(a) => a,
        AlphaKind::One => {
            let mean = periodic_mean(|l| {
                let g = y.psd_unchecked(l);
                Some(g.ln() + x.psd_unchecked(l) / g)
            })?
            .expect("integrand never aborts");
            return Ok(0.5 * LN_2PI + 0.5 * mean);
        }
        AlphaKind::Infinity => {
            return Err(Error::UnsupportedAlpha {
                alpha: alpha.to_string(),
                operation: "rate_spectral",
            })
        }
    };
    let mean = periodic_mean(|l| {
        let f = x.psd_unchecked(l);
        let g = y.psd_unchecked(l);
        let h = g + (a - 1.0) * f;
        (h > 0.0).then(|| (2.0 - a) * g.ln() - h.ln())
    })?;
    Ok(match mean {
        // (1/4π)∫ = ½·mean over the period
        Some(m) => 0.5 * LN_2PI + 0.5 * m / (1.0 - a),
        None => f64::INFINITY,
    })
}

/// ln det of the n×n symmetric Toeplitz matrix with first row `r`, by the
/// Levinson–Durbin recursion: the sum of the logs of the successive
/// prediction-error variances. `None` if the matrix is not positive definite.
pub fn toeplitz_log_det(r: &[f64]) -> Option<f64> {
    let n = r.len();
    if n == 0 || !(r[0] > 0.0) {
        return None;
    }
    let mut phi = vec![0.0; n];
    let mut prev = vec![0.0; n];
    let mut err = r[0];
    let mut log_det = err.ln();
    for k in 1..n {
        let acc: f64 = (1..k).map(|j| phi[j] * r[k - j]).sum();
        let kappa = (r[k] - acc) / err;
        prev[1..k].copy_from_slice(&phi[1..k]);
        for j in 1..k {
            phi[j] = prev[j] - kappa * prev[k - j];
        }
        phi[k] = kappa;
        err *= 1.0 - kappa * kappa;
        if !(err > 0.0) {
            return None;
        }
        log_det += err.ln();
    }
    Some(log_det)
}

/// Per-symbol cross-entropy (1/n)·h_α(Xⁿ; Yⁿ) from Toeplitz log-determinants.
///
/// `+inf` when Bⁿ is not positive definite (possible only for α < 1). The
/// Shannon marker uses `½ ln 2π + [ln|Σ_Y| + tr(Σ_Y⁻¹Σ_X)]/(2n)` through a
/// dense Cholesky factorization, which is O(n³).
pub fn rate_finite_n(
    x: &StationaryGaussianSpec,
    y: &StationaryGaussianSpec,
    alpha: AlphaOrder,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let ry: Vec<f64> = (0..n).map(|k| y.r(k)).collect();
    let ld_y = toeplitz_log_det(&ry).ok_or(Error::NotPositiveDefinite)?;
    let nf = n as f64;
    let a = match alpha.kind() {
        AlphaKind::Finite(a) => a,
        AlphaKind::One => {
            let sy = toeplitz_cov(y, n)?;
            let sx = DMatrix::from_fn(n, n, |i, j| x.r(i.abs_diff(j)));
            let chol = sy.cholesky().ok_or(Error::NotPositiveDefinite)?;
            let trace = chol.solve(&sx).trace();
            return Ok(0.5 * LN_2PI + (ld_y + trace) / (2.0 * nf));
        }
        AlphaKind::Infinity => {
            return Err(Error::UnsupportedAlpha {
                alpha: alpha.to_string(),
                operation: "rate_finite_n",
            })
        }
    };
    let rb: Vec<f64> = (0..n).map(|k| y.r(k) + (a - 1.0) * x.r(k)).collect();
    let Some(ld_b) = toeplitz_log_det(&rb) else {
        return Ok(f64::INFINITY);
    };
    Ok(0.5 * LN_2PI + ((2.0 - a) * ld_y - ld_b) / (2.0 * nf * (1.0 - a)))
}
