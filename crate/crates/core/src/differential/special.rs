//! Cross-entropy when one side is uniform, exponential or Gaussian.
//!
//! For those `q` the factor `q^{α−1}` is an exponential in `x` or `x²`, so the
//! integral collapses to a moment generating function of `p`:
//!
//! - `q` uniform on 𝕊: `h_α = ln|𝕊|` for every `p` on 𝕊;
//! - `q` exponential(λ): `h_α = −ln λ + ln M_p(λ(1−α))/(1−α)`;
//! - `q` = N(μ, σ²): `h_α = ln(σ√(2π)) + ln M_Y((1−α)/(2σ²))/(1−α)` with
//!   `Y = (X−μ)²`, and `ln(σ√(π/2))` in place of the constant for a
//!   half-normal `q`;
//! - `p` uniform on 𝕊: `h_α = [ln ∫_𝕊 q^{α−1} − ln|𝕊|]/(1−α)`.

use std::fmt;
use std::sync::Arc;

use statrs::function::erf::erfc;

use super::{shannon_cross_entropy_closed, unsupported, CrossEntropyResult, Method};
use crate::alpha::{AlphaKind, AlphaOrder};
use crate::error::{Error, Result};
use crate::exponential_family::{ExpFamilyDistribution, LN_2PI};
use crate::oracle::{integrate, mgf_numeric, MgfTransform, QuadratureSettings};
use crate::support::SupportSpec;

type MgfFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A moment generating function `t ↦ E[exp(tY)]`.
///
/// The domain is an open interval `(lo, hi)` on which the MGF is finite;
/// `t = 0` is always accepted even when it is an endpoint (as for
/// nonnegative variables whose MGF blows up for every `t > 0`).
#[derive(Clone)]
pub struct MgfFunction {
    f: MgfFn,
    lo: f64,
    hi: f64,
    mean: Option<f64>,
}

impl fmt::Debug for MgfFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MgfFunction")
            .field("domain", &(self.lo, self.hi))
            .field("mean", &self.mean)
            .finish_non_exhaustive()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {v}")))
    }
}

/// e^{z²} erfc(z) for z ≥ 0, with the asymptotic series where erfc underflows.
fn erfcx(z: f64) -> f64 {
    if z < 20.0 {
        (z * z).exp() * erfc(z)
    } else {
        let r = 1.0 / (2.0 * z * z);
        let series = 1.0 - r + 3.0 * r * r - 15.0 * r * r * r + 105.0 * r.powi(4);
        series / (z * std::f64::consts::PI.sqrt())
    }
}

impl MgfFunction {
    /// Wraps an MGF. Checks `M(0) = 1` and log-convexity on three points.
    pub fn new<F>(f: F, lo: f64, hi: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(Arc::new(f), lo, hi, None)
    }

    fn build(f: MgfFn, lo: f64, hi: f64, mean: Option<f64>) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > 0.0 || hi < 0.0 || lo == hi {
            return Err(Error::InvalidParameter(format!(
                "MGF domain ({lo}, {hi}) must be an interval touching 0"
            )));
        }
        let m = MgfFunction { f, lo, hi, mean };
        let at0 = (m.f)(0.0);
        if (at0 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("MGF at 0 is {at0}, expected 1")));
        }
        let pts = m.spot_points();
        let g: Vec<f64> = pts.iter().map(|&t| (m.f)(t).ln()).collect();
        if g.iter().all(|v| v.is_finite()) {
            let slack = 1e-10 * (1.0 + g[0].abs() + g[2].abs());
            if g[1] > 0.5 * (g[0] + g[2]) + slack {
                return Err(Error::InvalidParameter("MGF is not log-convex".into()));
            }
        }
        Ok(m)
    }

    fn spot_points(&self) -> [f64; 3] {
        let room_lo = (-self.lo).min(1.0);
        let room_hi = self.hi.min(1.0);
        if room_lo > 0.0 && room_hi > 0.0 {
            let d = 0.5 * room_lo.min(room_hi);
            [-d, 0.0, d]
        } else if room_lo > 0.0 {
            let d = 0.25 * room_lo;
            [-2.0 * d, -d, 0.0]
        } else {
            let d = 0.25 * room_hi;
            [0.0, d, 2.0 * d]
        }
    }

    /// MGF of Exponential(rate): λ/(λ − t) on (−∞, λ).
    pub fn exponential(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Self::build(Arc::new(move |t| rate / (rate - t)), f64::NEG_INFINITY, rate, Some(1.0 / rate))
    }

    /// MGF of Gamma(shape k, scale θ): (1 − θt)^{−k} on (−∞, 1/θ).
    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        positive("shape", shape)?;
        positive("scale", scale)?;
        Self::build(
            Arc::new(move |t| (-shape * (-scale * t).ln_1p()).exp()),
            f64::NEG_INFINITY,
            1.0 / scale,
            Some(shape * scale),
        )
    }

    /// MGF of a chi-squared variable with ν degrees of freedom.
    pub fn chi_squared(nu: f64) -> Result<Self> {
        positive("nu", nu)?;
        Self::gamma(nu / 2.0, 2.0)
    }

    /// MGF of Uniform(lo, hi), finite everywhere.
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidParameter(format!("uniform bounds ({lo}, {hi})")));
        }
        let w = hi - lo;
        Self::build(
            Arc::new(move |t: f64| {
                if t == 0.0 {
                    1.0
                } else {
                    (t * lo).exp() * (t * w).exp_m1() / (t * w)
                }
            }),
            f64::NEG_INFINITY,
            f64::INFINITY,
            Some(0.5 * (lo + hi)),
        )
    }

    /// MGF of N(mean, var): exp(μt + σ²t²/2).
    pub fn gaussian(mean: f64, var: f64) -> Result<Self> {
        positive("var", var)?;
        if !mean.is_finite() {
            return Err(Error::InvalidParameter("mean must be finite".into()));
        }
        Self::build(
            Arc::new(move |t| (mean * t + 0.5 * var * t * t).exp()),
            f64::NEG_INFINITY,
            f64::INFINITY,
            Some(mean),
        )
    }

    /// MGF of Y = (X − c)² for X ~ N(mean, var):
    /// exp(δ²t/(1 − 2σ²t))/√(1 − 2σ²t) with δ = mean − c, on (−∞, 1/(2σ²)).
    pub fn gaussian_centered_square(mean: f64, var: f64, center: f64) -> Result<Self> {
        positive("var", var)?;
        if !(mean.is_finite() && center.is_finite()) {
            return Err(Error::InvalidParameter("mean and center must be finite".into()));
        }
        let d2 = (mean - center) * (mean - center);
        Self::build(
            Arc::new(move |t| {
                let s = 1.0 - 2.0 * var * t;
                (d2 * t / s - 0.5 * s.ln()).exp()
            }),
            f64::NEG_INFINITY,
            1.0 / (2.0 * var),
            Some(var + d2),
        )
    }

    /// MGF of X² for a half-normal X with scale parameter σ²: (1 − 2σ²t)^{−1/2}.
    pub fn half_normal_square(var: f64) -> Result<Self> {
        Self::gaussian_centered_square(0.0, var, 0.0)
    }

    /// MGF of X² for X ~ Exponential(rate), finite only for t ≤ 0:
    /// λ·√π/(2√a)·e^{z²}erfc(z) with a = −t, z = λ/(2√a).
    pub fn exponential_square(rate: f64) -> Result<Self> {
        positive("rate", rate)?;
        Self::build(
            Arc::new(move |t: f64| {
                if t == 0.0 {
                    return 1.0;
                }
                if t > 0.0 {
                    return f64::INFINITY;
                }
                let ra = (-t).sqrt();
                rate * std::f64::consts::PI.sqrt() / (2.0 * ra) * erfcx(rate / (2.0 * ra))
            }),
            f64::NEG_INFINITY,
            0.0,
            Some(2.0 / (rate * rate)),
        )
    }

    /// MGF computed by quadrature against the log-density `ln_p` on `supp`.
    /// The mean E[Y] is integrated directly rather than differentiated.
    /// Quadrature failures surface as NaN from [`MgfFunction::evaluate`].
    pub fn numeric<P>(
        ln_p: P,
        supp: SupportSpec,
        transform: MgfTransform,
        domain: (f64, f64),
        settings: QuadratureSettings,
    ) -> Result<Self>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        settings.validate()?;
        let y = move |x: f64| match transform {
            MgfTransform::Identity => x,
            MgfTransform::CenteredSquare(mu) => (x - mu) * (x - mu),
        };
        let mean = integrate(
            |x| {
                let lp = ln_p(x);
                if lp == f64::NEG_INFINITY {
                    0.0
                } else {
                    lp.exp() * y(x)
                }
            },
            &supp,
            &settings,
        )
        .map(|i| i.value)
        .ok()
        .filter(|m| m.is_finite());
        Self::build(
            Arc::new(move |t| mgf_numeric(&ln_p, &supp, transform, t, &settings).unwrap_or(f64::NAN)),
            domain.0,
            domain.1,
            mean,
        )
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    /// M(t), `+inf` outside the domain.
    pub fn evaluate(&self, t: f64) -> f64 {
        if t == 0.0 {
            1.0
        } else if t > self.lo && t < self.hi {
            (self.f)(t)
        } else {
            f64::INFINITY
        }
    }

    /// ln M(t), with an error outside the domain.
    pub fn ln_evaluate(&self, t: f64) -> Result<f64> {
        if t != 0.0 && !(t > self.lo && t < self.hi) {
            return Err(Error::MgfDomain {
                t,
                lo: self.lo,
                hi: self.hi,
            });
        }
        let v = self.evaluate(t);
        if v.is_nan() || v <= 0.0 {
            return Err(Error::Degenerate("MGF evaluation failed"));
        }
        Ok(v.ln())
    }

    /// E[Y] = M'(0), exact for the built-in constructors and otherwise a
    /// Richardson-extrapolated finite difference of ln M.
    pub fn mean(&self) -> Result<f64> {
        if let Some(m) = self.mean {
            return Ok(m);
        }
        let g = |t: f64| self.ln_evaluate(t);
        let room_lo = (-self.lo).min(1.0);
        let room_hi = self.hi.min(1.0);
        if room_lo > 0.0 && room_hi > 0.0 {
            let h = 0.002 * room_lo.min(room_hi);
            Ok((8.0 * (g(h)? - g(-h)?) - (g(2.0 * h)? - g(-2.0 * h)?)) / (12.0 * h))
        } else if room_lo > 0.0 {
            let h = 0.002 * room_lo;
            Ok((-48.0 * g(-h)? + 36.0 * g(-2.0 * h)? - 16.0 * g(-3.0 * h)? + 3.0 * g(-4.0 * h)?) / (12.0 * h))
        } else {
            let h = 0.002 * room_hi;
            Ok((48.0 * g(h)? - 36.0 * g(2.0 * h)? + 16.0 * g(3.0 * h)? - 3.0 * g(4.0 * h)?) / (12.0 * h))
        }
    }
}

/// `ln|𝕊|`: the cross-entropy against a uniform `q` on a finite support,
/// whatever `p` and α are.
pub fn cross_entropy_q_uniform(supp: &SupportSpec) -> Result<f64> {
    supp.length().map(f64::ln).ok_or(Error::InfiniteSupport)
}

/// Cross-entropy of `p` against Exponential(λ), from the MGF of `p`.
pub fn cross_entropy_q_exponential(mgf_p: &MgfFunction, lambda: f64, alpha: AlphaOrder) -> Result<CrossEntropyResult> {
    positive("lambda", lambda)?;
    let value = match alpha.kind() {
        AlphaKind::One => -lambda.ln() + lambda * mgf_p.mean()?,
        AlphaKind::Finite(a) => -lambda.ln() + mgf_p.ln_evaluate(lambda * (1.0 - a))? / (1.0 - a),
        AlphaKind::Infinity => return Err(unsupported(alpha, "cross_entropy_q_exponential")),
    };
    Ok(CrossEntropyResult::new(value, Method::SpecialCase))
}

/// Cross-entropy of `p` against N(μ, σ²) (or a half-normal with scale σ² when
/// `half_normal`), from the MGF of `Y = (X − μ)²` under `p`.
pub fn cross_entropy_q_gaussian(
    mgf_y: &MgfFunction,
    mu: f64,
    var: f64,
    alpha: AlphaOrder,
    half_normal: bool,
) -> Result<CrossEntropyResult> {
    positive("var", var)?;
    if !mu.is_finite() {
        return Err(Error::InvalidParameter("mean must be finite".into()));
    }
    if half_normal && mu != 0.0 {
        return Err(Error::InvalidParameter("a half-normal q is centred at 0".into()));
    }
    let c = if half_normal {
        0.5 * (std::f64::consts::FRAC_PI_2 * var).ln()
    } else {
        0.5 * (LN_2PI + var.ln())
    };
    let value = match alpha.kind() {
        AlphaKind::One => c + mgf_y.mean()? / (2.0 * var),
        AlphaKind::Finite(a) => c + mgf_y.ln_evaluate((1.0 - a) / (2.0 * var))? / (1.0 - a),
        AlphaKind::Infinity => return Err(unsupported(alpha, "cross_entropy_q_gaussian")),
    };
    Ok(CrossEntropyResult::new(value, Method::SpecialCase))
}

/// Cross-entropy of the uniform density on `supp` against `q`:
/// `[ln ∫_𝕊 q^{α−1} − ln|𝕊|]/(1−α)`.
///
/// `∫ q^β` is evaluated in natural parameters as
/// `β·A(η) − A(βη) + ln E_{βη}[b^{β−1}]`; it diverges when βη leaves the
/// natural domain.
pub fn cross_entropy_p_uniform(
    supp: &SupportSpec,
    q: &ExpFamilyDistribution,
    alpha: AlphaOrder,
) -> Result<CrossEntropyResult> {
    let len = supp.length().ok_or(Error::InfiniteSupport)?;
    if q.support() != *supp {
        return Err(Error::SupportMismatch(format!(
            "q is supported on {:?}, not {:?}",
            q.support().kind(),
            supp.kind()
        )));
    }
    let a = match alpha.kind() {
        AlphaKind::Finite(a) => a,
        AlphaKind::One => {
            // Only the unit interval reaches here: Beta is the one bounded family.
            let mut r = shannon_cross_entropy_closed(&ExpFamilyDistribution::beta(1.0, 1.0)?, q)?;
            r.method = Method::SpecialCase;
            return Ok(r);
        }
        AlphaKind::Infinity => return Err(unsupported(alpha, "cross_entropy_p_uniform")),
    };
    let beta = a - 1.0;
    let eta = q.to_natural()?;
    let mut eta_b = eta.clone();
    eta_b.components.iter_mut().for_each(|c| *c *= beta);
    if !eta_b.in_domain() {
        return Ok(CrossEntropyResult::divergent(a, Method::SpecialCase));
    }
    let ln_b = eta
        .constant_log_base()
        .ok_or_else(|| Error::SupportMismatch("bounded families have a constant base measure".into()))?;
    let ln_int = beta * eta.log_partition()? - eta_b.log_partition()? + (beta - 1.0) * ln_b;
    Ok(CrossEntropyResult::new((ln_int - len.ln()) / (1.0 - a), Method::SpecialCase))
}
