//! Exponential-family distributions in natural-parameter form.
//!
//! Every density is written as `b(x)·exp(η·T(x) + A(η))` on its support, with
//! `A(η) = ln c(θ)` the log-normalizer (note the sign: `exp(-A(η))` is the
//! integral of `b·exp(η·T)`). The factorization per family is fixed here:
//!
//! | family      | T(x)                 | η                      | b(x)              |
//! |-------------|----------------------|------------------------|-------------------|
//! | Beta        | (ln x, ln(1-x))      | (a-1, b-1)             | 1                 |
//! | Chi-squared | ln x                 | ν/2 - 1                | exp(-x/2)         |
//! | Exponential | x                    | -λ                     | 1                 |
//! | Gamma       | (ln x, x)            | (k-1, -1/θ)            | 1                 |
//! | Gaussian    | (x, x²)              | (μ/σ², -1/(2σ²))       | (2π)^{-1/2}       |
//! | Laplace     | \|x-μ\| (μ fixed)    | -1/b                   | 1                 |
//! | MVN, mean 0 | x xᵀ                 | -Σ⁻¹/2                 | (2π)^{-n/2}       |
//!
//! Chi-squared is the only family with a non-constant base measure, so it is
//! the only one where `E_h = E_{f_h}[b(X)^{α-1}]` is not simply `b^{α-1}`.

use nalgebra::DMatrix;
use statrs::function::beta::ln_beta;
use statrs::function::gamma::ln_gamma;

use crate::alpha::{AlphaKind, AlphaOrder};
use crate::error::{Error, Result};
use crate::support::SupportSpec;

pub(crate) const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Family tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Beta,
    ChiSquared,
    Exponential,
    Gamma,
    Gaussian,
    LaplaceEqualMean,
    MultivariateGaussianZeroMean,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Beta => "beta",
            Family::ChiSquared => "chi-squared",
            Family::Exponential => "exponential",
            Family::Gamma => "gamma",
            Family::Gaussian => "gaussian",
            Family::LaplaceEqualMean => "laplace",
            Family::MultivariateGaussianZeroMean => "mvn-zero-mean",
        }
    }
}

/// A distribution in classical parameterization.
///
/// The chi-squared degrees of freedom may be any positive real; the density
/// formula never uses integrality.
#[derive(Debug, Clone, PartialEq)]
pub enum ExpFamilyDistribution {
    Beta { a: f64, b: f64 },
    ChiSquared { nu: f64 },
    Exponential { rate: f64 },
    Gamma { shape: f64, scale: f64 },
    Gaussian { mean: f64, var: f64 },
    Laplace { location: f64, scale: f64 },
    MvnZeroMean { cov: DMatrix<f64> },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {v}")))
    }
}

/// ln det of a symmetric positive definite matrix via Cholesky, or `None`.
pub(crate) fn spd_log_det(m: &DMatrix<f64>) -> Option<f64> {
    let chol = m.clone().cholesky()?;
    let l = chol.l_dirty();
    Some(2.0 * (0..m.nrows()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

fn validate_cov(cov: &DMatrix<f64>) -> Result<()> {
    if cov.nrows() == 0 || cov.nrows() != cov.ncols() {
        return Err(Error::DimensionMismatch(cov.nrows(), cov.ncols()));
    }
    let scale = cov.amax().max(f64::MIN_POSITIVE);
    for i in 0..cov.nrows() {
        for j in 0..i {
            if (cov[(i, j)] - cov[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::InvalidParameter("covariance must be symmetric".into()));
            }
        }
    }
    if cov.iter().any(|v| !v.is_finite()) || spd_log_det(cov).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

impl ExpFamilyDistribution {
    pub fn beta(a: f64, b: f64) -> Result<Self> {
        let d = Self::Beta { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn chi_squared(nu: f64) -> Result<Self> {
        let d = Self::ChiSquared { nu };
        d.validate()?;
        Ok(d)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        let d = Self::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        let d = Self::Gamma { shape, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn gaussian(mean: f64, var: f64) -> Result<Self> {
        let d = Self::Gaussian { mean, var };
        d.validate()?;
        Ok(d)
    }

    pub fn laplace(location: f64, scale: f64) -> Result<Self> {
        let d = Self::Laplace { location, scale };
        d.validate()?;
        Ok(d)
    }

    pub fn mvn_zero_mean(cov: DMatrix<f64>) -> Result<Self> {
        let d = Self::MvnZeroMean { cov };
        d.validate()?;
        Ok(d)
    }

    /// Checks the parameter constraints of the family.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Beta { a, b } => positive("a", *a).and(positive("b", *b)),
            Self::ChiSquared { nu } => positive("nu", *nu),
            Self::Exponential { rate } => positive("rate", *rate),
            Self::Gamma { shape, scale } => positive("shape", *shape).and(positive("scale", *scale)),
            Self::Gaussian { mean, var } => finite("mean", *mean).and(positive("variance", *var)),
            Self::Laplace { location, scale } => {
                finite("location", *location).and(positive("scale", *scale))
            }
            Self::MvnZeroMean { cov } => validate_cov(cov),
        }
    }

    pub fn family(&self) -> Family {
        match self {
            Self::Beta { .. } => Family::Beta,
            Self::ChiSquared { .. } => Family::ChiSquared,
            Self::Exponential { .. } => Family::Exponential,
            Self::Gamma { .. } => Family::Gamma,
            Self::Gaussian { .. } => Family::Gaussian,
            Self::Laplace { .. } => Family::LaplaceEqualMean,
            Self::MvnZeroMean { .. } => Family::MultivariateGaussianZeroMean,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::MvnZeroMean { cov } => cov.nrows(),
            _ => 1,
        }
    }

    pub fn support(&self) -> SupportSpec {
        match self {
            Self::Beta { .. } => SupportSpec::UNIT_INTERVAL,
            Self::ChiSquared { .. } | Self::Exponential { .. } | Self::Gamma { .. } => {
                SupportSpec::POSITIVE_REALS
            }
            Self::Gaussian { .. } | Self::Laplace { .. } => SupportSpec::ALL_REALS,
            Self::MvnZeroMean { cov } => SupportSpec::real_vector_space(cov.nrows())
                .unwrap_or(SupportSpec::ALL_REALS),
        }
    }

    /// Log-density of a univariate distribution in its classical form.
    /// Points outside the support give `-inf`. For a multivariate Gaussian
    /// this is only defined when `n = 1`; otherwise it returns NaN.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        if let Self::MvnZeroMean { cov } = self {
            return if cov.nrows() == 1 {
                self.ln_pdf_vec(&[x])
            } else {
                f64::NAN
            };
        }
        if !self.support().contains(x) {
            return f64::NEG_INFINITY;
        }
        match *self {
            Self::Beta { a, b } => (a - 1.0) * x.ln() + (b - 1.0) * (1.0 - x).ln() - ln_beta(a, b),
            Self::ChiSquared { nu } => {
                let k = 0.5 * nu;
                (k - 1.0) * x.ln() - 0.5 * x - k * std::f64::consts::LN_2 - ln_gamma(k)
            }
            Self::Exponential { rate } => rate.ln() - rate * x,
            Self::Gamma { shape, scale } => {
                (shape - 1.0) * x.ln() - x / scale - shape * scale.ln() - ln_gamma(shape)
            }
            Self::Gaussian { mean, var } => {
                -0.5 * (LN_2PI + var.ln()) - 0.5 * (x - mean) * (x - mean) / var
            }
            Self::Laplace { location, scale } => -(2.0 * scale).ln() - (x - location).abs() / scale,
            Self::MvnZeroMean { .. } => unreachable!(),
        }
    }

    /// Density per the classical formula; zero outside the support.
    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    /// Log-density at a point of any dimension.
    pub fn ln_pdf_vec(&self, x: &[f64]) -> f64 {
        match self {
            Self::MvnZeroMean { cov } => {
                let n = cov.nrows();
                if x.len() != n {
                    return f64::NAN;
                }
                let Some(chol) = cov.clone().cholesky() else {
                    return f64::NAN;
                };
                let v = nalgebra::DVector::from_column_slice(x);
                let z = chol.l().solve_lower_triangular(&v).unwrap_or(v);
                let log_det = 2.0 * (0..n).map(|i| chol.l_dirty()[(i, i)].ln()).sum::<f64>();
                -0.5 * (n as f64 * LN_2PI + log_det + z.norm_squared())
            }
            _ if x.len() == 1 => self.ln_pdf(x[0]),
            _ => f64::NAN,
        }
    }

    /// Natural parameter η with `pdf = b·exp(η·T + A(η))`.
    pub fn to_natural(&self) -> Result<NaturalParam> {
        self.validate()?;
        let (components, location) = match self {
            Self::Beta { a, b } => (vec![a - 1.0, b - 1.0], 0.0),
            Self::ChiSquared { nu } => (vec![0.5 * nu - 1.0], 0.0),
            Self::Exponential { rate } => (vec![-rate], 0.0),
            Self::Gamma { shape, scale } => (vec![shape - 1.0, -1.0 / scale], 0.0),
            Self::Gaussian { mean, var } => (vec![mean / var, -0.5 / var], 0.0),
            Self::Laplace { location, scale } => (vec![-1.0 / scale], *location),
            Self::MvnZeroMean { cov } => {
                let inv = cov
                    .clone()
                    .cholesky()
                    .ok_or(Error::NotPositiveDefinite)?
                    .inverse();
                ((inv * -0.5).as_slice().to_vec(), 0.0)
            }
        };
        Ok(NaturalParam {
            family: self.family(),
            components,
            location,
            dim: self.dim(),
        })
    }
}

/// A natural parameter η together with its family.
///
/// `location` carries the fixed location of the Laplace family (the only
/// parameter that is not part of η); it is zero for every other family.
/// Multivariate components are stored column-major as an n×n matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalParam {
    pub family: Family,
    pub components: Vec<f64>,
    pub location: f64,
    pub dim: usize,
}

impl NaturalParam {
    fn domain_error(&self, detail: impl Into<String>) -> Error {
        Error::OutOfDomain {
            family: self.family.name(),
            detail: detail.into(),
        }
    }

    fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_column_slice(self.dim, self.dim, &self.components)
    }

    /// Checks that η lies where `∫ b·exp(η·T)` is finite.
    pub fn check_domain(&self) -> Result<()> {
        let c = &self.components;
        if c.iter().any(|v| !v.is_finite()) {
            return Err(self.domain_error("non-finite component"));
        }
        let ok = match self.family {
            Family::Exponential | Family::LaplaceEqualMean => c[0] < 0.0,
            Family::Gaussian => c[1] < 0.0,
            Family::Beta => c[0] > -1.0 && c[1] > -1.0,
            Family::Gamma => c[0] > -1.0 && c[1] < 0.0,
            Family::ChiSquared => c[0] > -1.0,
            Family::MultivariateGaussianZeroMean => spd_log_det(&(self.matrix() * -2.0)).is_some(),
        };
        if ok {
            Ok(())
        } else {
            Err(self.domain_error(format!("eta = {:?}", self.components)))
        }
    }

    pub fn in_domain(&self) -> bool {
        self.check_domain().is_ok()
    }

    /// Log-partition A(η), finite exactly on the natural domain.
    pub fn log_partition(&self) -> Result<f64> {
        self.check_domain()?;
        let c = &self.components;
        Ok(match self.family {
            Family::Exponential => (-c[0]).ln(),
            Family::LaplaceEqualMean => (-0.5 * c[0]).ln(),
            Family::Gaussian => c[0] * c[0] / (4.0 * c[1]) + 0.5 * (-2.0 * c[1]).ln(),
            Family::Beta => -ln_beta(c[0] + 1.0, c[1] + 1.0),
            Family::Gamma => -ln_gamma(c[0] + 1.0) + (c[0] + 1.0) * (-c[1]).ln(),
            Family::ChiSquared => -(c[0] + 1.0) * std::f64::consts::LN_2 - ln_gamma(c[0] + 1.0),
            Family::MultivariateGaussianZeroMean => {
                0.5 * spd_log_det(&(self.matrix() * -2.0)).ok_or(Error::NotPositiveDefinite)?
            }
        })
    }

    /// ln b(x) at a point; `None` when the base measure is not constant.
    pub fn constant_log_base(&self) -> Option<f64> {
        match self.family {
            Family::Gaussian => Some(-0.5 * LN_2PI),
            Family::MultivariateGaussianZeroMean => Some(-0.5 * self.dim as f64 * LN_2PI),
            Family::ChiSquared => None,
            _ => Some(0.0),
        }
    }

    /// ln b(x) at a point of the support.
    pub fn log_base(&self, x: &[f64]) -> f64 {
        match self.family {
            Family::ChiSquared => -0.5 * x[0],
            _ => self.constant_log_base().unwrap_or(f64::NAN),
        }
    }

    /// T(x) laid out like `components`.
    pub fn sufficient_statistic(&self, x: &[f64]) -> Vec<f64> {
        match self.family {
            Family::Beta => vec![x[0].ln(), (1.0 - x[0]).ln()],
            Family::ChiSquared => vec![x[0].ln()],
            Family::Exponential => vec![x[0]],
            Family::Gamma => vec![x[0].ln(), x[0]],
            Family::Gaussian => vec![x[0], x[0] * x[0]],
            Family::LaplaceEqualMean => vec![(x[0] - self.location).abs()],
            Family::MultivariateGaussianZeroMean => {
                let n = self.dim;
                let mut t = vec![0.0; n * n];
                for j in 0..n {
                    for i in 0..n {
                        t[j * n + i] = x[i] * x[j];
                    }
                }
                t
            }
        }
    }

    /// ln b(x) + η·T(x) + A(η), the density rebuilt from its natural form.
    pub fn ln_pdf_natural(&self, x: &[f64]) -> Result<f64> {
        let a = self.log_partition()?;
        let dot: f64 = self
            .components
            .iter()
            .zip(self.sufficient_statistic(x))
            .map(|(e, t)| e * t)
            .sum();
        Ok(self.log_base(x) + dot + a)
    }

    /// Back to the classical parameterization.
    pub fn to_distribution(&self) -> Result<ExpFamilyDistribution> {
        self.check_domain()?;
        let c = &self.components;
        let d = match self.family {
            Family::Beta => ExpFamilyDistribution::Beta {
                a: c[0] + 1.0,
                b: c[1] + 1.0,
            },
            Family::ChiSquared => ExpFamilyDistribution::ChiSquared {
                nu: 2.0 * (c[0] + 1.0),
            },
            Family::Exponential => ExpFamilyDistribution::Exponential { rate: -c[0] },
            Family::Gamma => ExpFamilyDistribution::Gamma {
                shape: c[0] + 1.0,
                scale: -1.0 / c[1],
            },
            Family::Gaussian => {
                let var = -0.5 / c[1];
                ExpFamilyDistribution::Gaussian {
                    mean: c[0] * var,
                    var,
                }
            }
            Family::LaplaceEqualMean => ExpFamilyDistribution::Laplace {
                location: self.location,
                scale: -1.0 / c[0],
            },
            Family::MultivariateGaussianZeroMean => {
                let prec = self.matrix() * -2.0;
                let cov = prec.cholesky().ok_or(Error::NotPositiveDefinite)?.inverse();
                ExpFamilyDistribution::MvnZeroMean { cov }
            }
        };
        d.validate()?;
        Ok(d)
    }
}

/// η_h = η1 + (α−1)·η2, checked against the natural domain.
///
/// An out-of-domain result means the cross-entropy integral diverges. With the
/// Shannon marker the combination is η1 itself.
pub fn combine_natural(eta1: &NaturalParam, eta2: &NaturalParam, alpha: AlphaOrder) -> Result<NaturalParam> {
    if eta1.family != eta2.family {
        return Err(Error::FamilyMismatch(eta1.family.name(), eta2.family.name()));
    }
    if eta1.components.len() != eta2.components.len() || eta1.dim != eta2.dim {
        return Err(Error::DimensionMismatch(eta1.dim, eta2.dim));
    }
    if eta1.family == Family::LaplaceEqualMean && eta1.location != eta2.location {
        return Err(Error::InvalidParameter(format!(
            "laplace locations must agree ({} vs {})",
            eta1.location, eta2.location
        )));
    }
    let w = match alpha.kind() {
        AlphaKind::One => return Ok(eta1.clone()),
        AlphaKind::Finite(a) => a - 1.0,
        AlphaKind::Infinity => {
            return Err(Error::UnsupportedAlpha {
                alpha: alpha.to_string(),
                operation: "combine_natural",
            })
        }
    };
    let eta_h = NaturalParam {
        components: eta1
            .components
            .iter()
            .zip(&eta2.components)
            .map(|(a, b)| a + w * b)
            .collect(),
        ..eta1.clone()
    };
    eta_h.check_domain()?;
    Ok(eta_h)
}

/// ln E_h = ln ∫ b(x)^{α−1} f_h(x) dx.
///
/// For a constant base measure this is `(α−1)·ln b`. For chi-squared,
/// `b(x) = exp(-x/2)`, so E_h is the chi-squared MGF with ν_h = 2(η_h+1)
/// degrees of freedom at t = −(α−1)/2, i.e. `α^{−(η_h+1)}`.
pub fn log_base_expectation(eta_h: &NaturalParam, alpha: AlphaOrder) -> Result<f64> {
    eta_h.check_domain()?;
    let a = match alpha.kind() {
        AlphaKind::One => return Ok(0.0),
        AlphaKind::Finite(a) => a,
        AlphaKind::Infinity => {
            return Err(Error::UnsupportedAlpha {
                alpha: alpha.to_string(),
                operation: "log_base_expectation",
            })
        }
    };
    match eta_h.constant_log_base() {
        Some(ln_b) => Ok((a - 1.0) * ln_b),
        None => match eta_h.family {
            Family::ChiSquared => Ok(-(eta_h.components[0] + 1.0) * a.ln()),
            _ => unreachable!("only chi-squared has a non-constant base measure"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{integrate, mgf_numeric, MgfTransform, QuadratureSettings};
    use approx::assert_relative_eq;

    fn all_univariate() -> Vec<ExpFamilyDistribution> {
        vec![
            ExpFamilyDistribution::beta(2.0, 3.0).unwrap(),
            ExpFamilyDistribution::beta(0.7, 1.4).unwrap(),
            ExpFamilyDistribution::chi_squared(2.0).unwrap(),
            ExpFamilyDistribution::chi_squared(5.5).unwrap(),
            ExpFamilyDistribution::exponential(1.0).unwrap(),
            ExpFamilyDistribution::exponential(0.3).unwrap(),
            ExpFamilyDistribution::gamma(2.5, 1.5).unwrap(),
            ExpFamilyDistribution::gamma(0.8, 0.5).unwrap(),
            ExpFamilyDistribution::gaussian(0.0, 1.0).unwrap(),
            ExpFamilyDistribution::gaussian(-1.5, 0.2).unwrap(),
            ExpFamilyDistribution::laplace(0.0, 1.0).unwrap(),
            ExpFamilyDistribution::laplace(2.0, 0.4).unwrap(),
        ]
    }

    fn grid_points(d: &ExpFamilyDistribution) -> Vec<f64> {
        match d.support().bounds().unwrap() {
            (0.0, 1.0) => (1..20).map(|i| i as f64 / 20.0).collect(),
            (0.0, _) => (1..40).map(|i| i as f64 * 0.25).collect(),
            _ => (-20..=20).map(|i| i as f64 * 0.3).collect(),
        }
    }

    #[test]
    fn to_natural_examples() {
        let e = ExpFamilyDistribution::exponential(1.0).unwrap().to_natural().unwrap();
        assert_eq!(e.components, vec![-1.0]);
        let g = ExpFamilyDistribution::gaussian(0.0, 1.0).unwrap().to_natural().unwrap();
        assert_eq!(g.components, vec![0.0, -0.5]);
        let b = ExpFamilyDistribution::beta(2.0, 3.0).unwrap();
        let eta = b.to_natural().unwrap();
        assert_eq!(eta.components, vec![1.0, 2.0]);
        // 1/B(2,3) = 12, so pdf(0.5) = 12 · 0.5 · 0.25 = 1.5
        assert_relative_eq!(b.pdf(0.5), 1.5, max_relative = 1e-13);
        assert_relative_eq!(eta.ln_pdf_natural(&[0.5]).unwrap().exp(), 1.5, max_relative = 1e-13);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(ExpFamilyDistribution::beta(0.0, 1.0).is_err());
        assert!(ExpFamilyDistribution::exponential(-1.0).is_err());
        assert!(ExpFamilyDistribution::gaussian(0.0, 0.0).is_err());
        assert!(ExpFamilyDistribution::gamma(1.0, f64::INFINITY).is_err());
        assert!(ExpFamilyDistribution::laplace(f64::NAN, 1.0).is_err());
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(ExpFamilyDistribution::mvn_zero_mean(bad), Err(Error::NotPositiveDefinite));
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.2, 1.0]);
        assert!(ExpFamilyDistribution::mvn_zero_mean(asym).is_err());
        assert!(ExpFamilyDistribution::Exponential { rate: 0.0 }.to_natural().is_err());
    }

    #[test]
    fn pdf_examples() {
        assert_relative_eq!(ExpFamilyDistribution::exponential(2.0).unwrap().pdf(1e-300), 2.0);
        assert_eq!(ExpFamilyDistribution::exponential(2.0).unwrap().pdf(-1.0), 0.0);
        assert_relative_eq!(
            ExpFamilyDistribution::gaussian(0.0, 1.0).unwrap().pdf(0.0),
            0.398_942_280_401_432_7,
            max_relative = 1e-14
        );
        assert_relative_eq!(ExpFamilyDistribution::beta(2.0, 2.0).unwrap().pdf(0.5), 1.5, max_relative = 1e-14);
    }

    #[test]
    fn log_partition_examples() {
        let e = ExpFamilyDistribution::exponential(1.0).unwrap().to_natural().unwrap();
        assert_eq!(e.log_partition().unwrap(), 0.0);

        let s = QuadratureSettings::default();
        let g = ExpFamilyDistribution::gaussian(0.0, 1.0).unwrap().to_natural().unwrap();
        let base = (-0.5 * LN_2PI).exp();
        let z = integrate(|x| base * (-0.5 * x * x).exp(), &SupportSpec::ALL_REALS, &s).unwrap();
        assert_relative_eq!((-g.log_partition().unwrap()).exp(), z.value, max_relative = 1e-10);

        // ν = 2: c = 1/(2Γ(1)) = 1/2
        let c = ExpFamilyDistribution::chi_squared(2.0).unwrap().to_natural().unwrap();
        assert_relative_eq!(c.log_partition().unwrap(), 0.5f64.ln(), max_relative = 1e-14);
        let z = integrate(|x| (-0.5 * x).exp(), &SupportSpec::POSITIVE_REALS, &s).unwrap();
        assert_relative_eq!((-c.log_partition().unwrap()).exp(), z.value, max_relative = 1e-10);
    }

    #[test]
    fn log_partition_matches_quadrature_for_every_family() {
        let s = QuadratureSettings::default();
        for d in all_univariate() {
            let eta = d.to_natural().unwrap();
            let z = integrate(
                |x| {
                    if !d.support().contains(x) {
                        return 0.0;
                    }
                    let dot: f64 = eta.components.iter().zip(eta.sufficient_statistic(&[x])).map(|(e, t)| e * t).sum();
                    (eta.log_base(&[x]) + dot).exp()
                },
                &d.support(),
                &s,
            )
            .unwrap();
            assert_relative_eq!((-eta.log_partition().unwrap()).exp(), z.value, max_relative = 1e-8);
        }
    }

    #[test]
    fn round_trip_through_natural_form() {
        for d in all_univariate() {
            let eta = d.to_natural().unwrap();
            for x in grid_points(&d) {
                let direct = d.pdf(x);
                let rebuilt = eta.ln_pdf_natural(&[x]).unwrap().exp();
                assert_relative_eq!(direct, rebuilt, max_relative = 1e-12, epsilon = 1e-300);
            }
            assert_eq!(eta.to_distribution().unwrap(), d);
        }
    }

    #[test]
    fn normalization_by_quadrature() {
        let s = QuadratureSettings::default();
        for d in all_univariate() {
            let z = integrate(|x| d.pdf(x), &d.support(), &s).unwrap();
            assert!((z.value - 1.0).abs() < 1e-8, "{d:?}: {}", z.value);
        }
    }

    #[test]
    fn mvn_round_trip() {
        let cov = DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 0.5]);
        let d = ExpFamilyDistribution::mvn_zero_mean(cov.clone()).unwrap();
        let eta = d.to_natural().unwrap();
        for x in [[0.0, 0.0], [1.0, -0.5], [-2.0, 0.7]] {
            assert_relative_eq!(d.ln_pdf_vec(&x), eta.ln_pdf_natural(&x).unwrap(), max_relative = 1e-12);
        }
        match eta.to_distribution().unwrap() {
            ExpFamilyDistribution::MvnZeroMean { cov: back } => {
                assert!((back - cov).amax() < 1e-12);
            }
            _ => panic!(),
        }
        // A(η) = -½ ln|Σ|
        assert_relative_eq!(eta.log_partition().unwrap(), -0.5 * (2.0 * 0.5 - 0.09f64).ln(), max_relative = 1e-12);
    }

    #[test]
    fn combine_examples() {
        let two = AlphaOrder::new(2.0).unwrap();
        let half = AlphaOrder::new(0.5).unwrap();
        let e1 = ExpFamilyDistribution::exponential(1.0).unwrap().to_natural().unwrap();
        assert_eq!(combine_natural(&e1, &e1, two).unwrap().components, vec![-2.0]);
        assert_eq!(combine_natural(&e1, &e1, half).unwrap().components, vec![-0.5]);
        let g = ExpFamilyDistribution::gaussian(0.0, 1.0).unwrap().to_natural().unwrap();
        assert_eq!(combine_natural(&g, &g, two).unwrap().components, vec![0.0, -1.0]);

        // η1 = -0.1, η2 = -1, α = 0.5 → 0.4 > 0: ∫ e^{0.4x} diverges on ℝ⁺
        let slow = ExpFamilyDistribution::exponential(0.1).unwrap().to_natural().unwrap();
        let err = combine_natural(&slow, &e1, half).unwrap_err();
        assert!(matches!(err, Error::OutOfDomain { .. }));
        // the same statement through the oracle: E[e^{0.4X}] with X ~ Exp(1) is finite,
        // but ∫ e^{0.4x} dx is not
        let s = QuadratureSettings::default();
        let m = mgf_numeric(|x| -x, &SupportSpec::POSITIVE_REALS, MgfTransform::Identity, 0.4, &s).unwrap();
        assert_relative_eq!(m, 1.0 / 0.6, max_relative = 1e-9);
        let raw = crate::oracle::integrate_nonnegative(|x| (0.4 * x).exp(), &SupportSpec::POSITIVE_REALS, &s).unwrap();
        assert_eq!(raw, f64::INFINITY);
    }

    #[test]
    fn combine_at_one_is_identity() {
        for d in all_univariate() {
            let eta = d.to_natural().unwrap();
            let other = eta.clone();
            assert_eq!(combine_natural(&eta, &other, AlphaOrder::ONE).unwrap(), eta);
        }
    }

    #[test]
    fn combine_rejects_mismatch() {
        let e = ExpFamilyDistribution::exponential(1.0).unwrap().to_natural().unwrap();
        let g = ExpFamilyDistribution::gaussian(0.0, 1.0).unwrap().to_natural().unwrap();
        assert!(matches!(combine_natural(&e, &g, AlphaOrder::new(2.0).unwrap()), Err(Error::FamilyMismatch(..))));
        let l1 = ExpFamilyDistribution::laplace(0.0, 1.0).unwrap().to_natural().unwrap();
        let l2 = ExpFamilyDistribution::laplace(1.0, 1.0).unwrap().to_natural().unwrap();
        assert!(combine_natural(&l1, &l2, AlphaOrder::new(2.0).unwrap()).is_err());
    }

    #[test]
    fn domain_predicates_agree_with_quadrature_divergence() {
        // Gamma: ∫ x^{η1} e^{η2 x} is finite iff η1 > -1 and η2 < 0.
        let s = QuadratureSettings::default();
        for (e1, e2) in [(0.5, -1.0), (-0.5, -2.0), (-1.2, -1.0), (0.5, 0.3), (-1.0, -1.0)] {
            let eta = NaturalParam { family: Family::Gamma, components: vec![e1, e2], location: 0.0, dim: 1 };
            let integral = crate::oracle::integrate_nonnegative(
                |x| (e1 * x.ln() + e2 * x).exp(),
                &SupportSpec::POSITIVE_REALS,
                &s,
            )
            .unwrap();
            assert_eq!(eta.in_domain(), integral.is_finite(), "eta = ({e1}, {e2}), integral {integral}");
        }
        // Beta: ∫ x^{η1}(1-x)^{η2} on (0,1) is finite iff both > -1.
        for (e1, e2) in [(0.0, 0.0), (-0.5, 1.0), (-1.0, 0.0), (2.0, -1.5)] {
            let eta = NaturalParam { family: Family::Beta, components: vec![e1, e2], location: 0.0, dim: 1 };
            let integral = crate::oracle::integrate_nonnegative(
                |x| (e1 * x.ln() + e2 * (1.0 - x).ln()).exp(),
                &SupportSpec::UNIT_INTERVAL,
                &s,
            )
            .unwrap();
            assert_eq!(eta.in_domain(), integral.is_finite(), "eta = ({e1}, {e2}), integral {integral}");
        }
    }

    #[test]
    fn base_expectation_examples() {
        let two = AlphaOrder::new(2.0).unwrap();
        let e = ExpFamilyDistribution::exponential(3.0).unwrap().to_natural().unwrap();
        assert_eq!(log_base_expectation(&e, two).unwrap(), 0.0);

        let cov = DMatrix::<f64>::identity(2, 2);
        let m = ExpFamilyDistribution::mvn_zero_mean(cov).unwrap().to_natural().unwrap();
        assert_relative_eq!(log_base_expectation(&m, two).unwrap(), -LN_2PI, max_relative = 1e-15);

        // chi-squared: compare the analytic E_h with quadrature of b^{α-1} f_h.
        let s = QuadratureSettings::default();
        for (nu, alpha) in [(3.0, 2.0), (4.0, 0.5), (1.5, 3.0)] {
            let a = AlphaOrder::new(alpha).unwrap();
            let eta = ExpFamilyDistribution::chi_squared(nu).unwrap().to_natural().unwrap();
            let fh = eta.to_distribution().unwrap();
            let q = integrate(|x| (-(alpha - 1.0) * 0.5 * x + fh.ln_pdf(x)).exp(), &SupportSpec::POSITIVE_REALS, &s).unwrap();
            assert_relative_eq!(log_base_expectation(&eta, a).unwrap(), q.value.ln(), max_relative = 1e-9);
        }
    }
}
