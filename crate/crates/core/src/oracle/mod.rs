//! Numerical ground truth.
//!
//! Adaptive Gauss–Kronrod quadrature over the supports used by the library,
//! with compactifying maps for infinite ranges, a divergence test for
//! nonnegative integrands, and direct numerical versions of the quantities the
//! closed forms compute. Nothing here calls into the closed-form modules, so
//! the two can arbitrate each other.
//!
//! Node placement is deterministic: the same settings always evaluate the
//! integrand at the same points.

mod gauss_kronrod;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::alpha::{AlphaKind, AlphaOrder};
use crate::error::{Error, Result};
use crate::support::SupportSpec;

use gauss_kronrod::{qk21, Panel, WGK, XGK};

/// Environment variable overriding the default relative tolerance.
pub const TOLERANCE_ENV: &str = "XENT_QUAD_TOL";

/// Change of variables used to compactify a half-line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfiniteTransform {
    /// x = a + tan(πt/2), t ∈ [0, 1).
    TangentMap,
    /// x = a − ln(1 − t), t ∈ [0, 1).
    ExponentialMap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
    pub infinite_domain_transform: InfiniteTransform,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            absolute_tolerance: 1e-12,
            max_subdivisions: 2000,
            infinite_domain_transform: InfiniteTransform::TangentMap,
        }
    }
}

impl QuadratureSettings {
    /// Defaults, with the relative tolerance taken from `XENT_QUAD_TOL` when set.
    pub fn from_env() -> Result<Self> {
        let mut s = Self::default();
        if let Ok(raw) = std::env::var(TOLERANCE_ENV) {
            s.relative_tolerance = raw
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("{TOLERANCE_ENV}='{raw}' is not a number")))?;
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let tol_ok = |t: f64| t.is_finite() && t > 0.0;
        if !tol_ok(self.relative_tolerance) || !tol_ok(self.absolute_tolerance) {
            return Err(Error::InvalidParameter("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::InvalidParameter("max_subdivisions must be at least 10".into()));
        }
        Ok(())
    }

    fn relaxed(&self) -> Self {
        Self {
            relative_tolerance: self.relative_tolerance.max(1e-7),
            absolute_tolerance: self.absolute_tolerance.max(1e-14),
            ..*self
        }
    }
}

/// Result of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
}

struct ByError(Panel);

impl PartialEq for ByError {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for ByError {}
impl PartialOrd for ByError {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for ByError {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.error.total_cmp(&other.0.error)
    }
}

/// Globally adaptive bisection on a finite interval, starting from
/// `initial_pieces` equal panels.
fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, initial_pieces: usize, s: &QuadratureSettings) -> Result<Integral> {
    let mut heap = BinaryHeap::new();
    let width = (b - a) / initial_pieces as f64;
    let mut total = 0.0;
    let mut total_err = 0.0;
    for i in 0..initial_pieces {
        let lo = a + width * i as f64;
        let hi = if i + 1 == initial_pieces { b } else { lo + width };
        let p = qk21(f, lo, hi);
        total += p.value;
        total_err += p.error;
        heap.push(ByError(p));
    }
    let mut subdivisions = initial_pieces;
    // Panels too narrow to split further; their error is accepted as is.
    let mut frozen_err = 0.0;

    loop {
        if !total.is_finite() || total_err.is_nan() {
            return Ok(Integral {
                value: total,
                error_estimate: f64::INFINITY,
            });
        }
        let target = s.absolute_tolerance.max(s.relative_tolerance * total.abs());
        // Frozen error cannot be reduced; stop once the rest meets the target.
        if total_err <= target || total_err - frozen_err <= target {
            break;
        }
        if subdivisions >= s.max_subdivisions {
            return Err(Error::NonConvergence {
                subdivisions,
                value: total,
                error: total_err,
            });
        }
        let Some(ByError(worst)) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b || (worst.b - worst.a) <= 1e3 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) {
            frozen_err += worst.error;
            heap.push(ByError(Panel { error: 0.0, ..worst }));
            if heap.iter().all(|p| p.0.error == 0.0) {
                break;
            }
            continue;
        }
        let left = qk21(f, worst.a, mid);
        let right = qk21(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
        subdivisions += 1;
    }

    // Re-sum to shed the drift of the running totals.
    let (value, error_estimate) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.0.value, e + p.0.error));
    Ok(Integral {
        value,
        error_estimate: error_estimate + frozen_err,
    })
}

fn guarded(v: f64, jac: f64) -> f64 {
    if v == 0.0 || !jac.is_finite() {
        0.0
    } else {
        v * jac
    }
}

/// ∫ f over [a, ∞) through the configured compactifying map.
fn half_line<F: Fn(f64) -> f64>(f: &F, a: f64, s: &QuadratureSettings) -> Result<Integral> {
    match s.infinite_domain_transform {
        InfiniteTransform::TangentMap => {
            let g = |t: f64| {
                let th = FRAC_PI_2 * t;
                let c = th.cos();
                guarded(f(a + th.tan()), FRAC_PI_2 / (c * c))
            };
            adaptive(&g, 0.0, 1.0, 64, s)
        }
        InfiniteTransform::ExponentialMap => {
            let g = |t: f64| {
                let u = 1.0 - t;
                guarded(f(a - u.ln()), 1.0 / u)
            };
            adaptive(&g, 0.0, 1.0, 64, s)
        }
    }
}

/// ∫ f over (a, b) where either endpoint may be infinite.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, s: &QuadratureSettings) -> Result<Integral> {
    s.validate()?;
    if a.is_nan() || b.is_nan() || a >= b {
        return Err(Error::InvalidParameter(format!("bad integration range ({a}, {b})")));
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive(&f, a, b, 8, s),
        (true, false) => half_line(&f, a, s),
        (false, true) => half_line(&|u: f64| f(b - u), 0.0, s),
        (false, false) => {
            let folded = |x: f64| f(x) + f(-x);
            half_line(&folded, 0.0, s)
        }
    }
}

/// ∫ f over a one-dimensional support.
pub fn integrate<F: Fn(f64) -> f64>(f: F, supp: &SupportSpec, s: &QuadratureSettings) -> Result<Integral> {
    let (lo, hi) = supp
        .bounds()
        .ok_or_else(|| Error::InvalidParameter("one-dimensional support required".into()))?;
    integrate_interval(f, lo, hi, s)
}

/// Nested windows exhausting (lo, hi): window k+1 contains window k.
fn window(lo: f64, hi: f64, k: i32) -> (f64, f64) {
    let two_k = 2f64.powi(k);
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let inset = (hi - lo) / (4.0 * two_k);
            (lo + inset, hi - inset)
        }
        (true, false) => (lo + 0.5 / two_k, lo + 2.0 * two_k),
        (false, true) => (hi - 2.0 * two_k, hi - 0.5 / two_k),
        (false, false) => (-two_k, two_k),
    }
}

const DIVERGENCE_WINDOWS: i32 = 48;
const DIVERGENCE_GROWTH: f64 = 1.01;
const DIVERGENCE_RUN: usize = 5;

/// Window-doubling divergence test for a nonnegative integrand.
///
/// Partial integrals over nested windows are accumulated shell by shell; the
/// integral is declared divergent when the partial integral grows by more than
/// 1% on each of the last five doublings, or overflows.
fn diverges<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, s: &QuadratureSettings) -> Result<bool> {
    let loose = s.relaxed();
    let (mut wl, mut wh) = window(lo, hi, 0);
    let mut partial = adaptive(f, wl, wh, 8, &loose)?.value;
    let mut run = 0;
    for k in 1..=DIVERGENCE_WINDOWS {
        let (nl, nh) = window(lo, hi, k);
        let mut shell = 0.0;
        if nl < wl {
            shell += adaptive(f, nl, wl, 8, &loose)?.value;
        }
        if nh > wh {
            shell += adaptive(f, wh, nh, 8, &loose)?.value;
        }
        let next = partial + shell;
        if !next.is_finite() {
            return Ok(true);
        }
        let grew = if partial > 0.0 {
            next / partial > DIVERGENCE_GROWTH
        } else {
            next > 0.0
        };
        run = if grew { run + 1 } else { 0 };
        partial = next;
        wl = nl;
        wh = nh;
    }
    Ok(run >= DIVERGENCE_RUN)
}

/// ∫ f for a nonnegative integrand, returning `+inf` when the integral diverges.
pub fn integrate_nonnegative<F: Fn(f64) -> f64>(f: F, supp: &SupportSpec, s: &QuadratureSettings) -> Result<f64> {
    s.validate()?;
    let (lo, hi) = supp
        .bounds()
        .ok_or_else(|| Error::InvalidParameter("one-dimensional support required".into()))?;
    if diverges(&f, lo, hi, s)? {
        return Ok(f64::INFINITY);
    }
    let v = integrate_interval(&f, lo, hi, s)?.value;
    Ok(if v.is_nan() { f64::INFINITY } else { v.max(0.0) })
}

/// exp(ln p + (α−1) ln q) with the zero conventions of the cross-entropy:
/// zero wherever p vanishes, and q = 0 < p gives +inf for α < 1, 0 for α > 1.
pub(crate) fn weighted_density(lp: f64, lq: f64, exponent: f64) -> f64 {
    if lp == f64::NEG_INFINITY || lp.is_nan() {
        return 0.0;
    }
    if lq == f64::NEG_INFINITY {
        return if exponent < 0.0 { f64::INFINITY } else { 0.0 };
    }
    (lp + exponent * lq).exp()
}

/// −∫ p ln q, the Shannon differential cross-entropy.
pub fn shannon_cross_entropy_numeric<P, Q>(ln_p: P, ln_q: Q, supp: &SupportSpec, s: &QuadratureSettings) -> Result<f64>
where
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    let integrand = |x: f64| {
        let lp = ln_p(x);
        if lp == f64::NEG_INFINITY {
            return 0.0;
        }
        let lq = ln_q(x);
        if lq == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        -lp.exp() * lq
    };
    Ok(integrate(integrand, supp, s)?.value)
}

/// (1/(1−α)) ln ∫ p q^{α−1}, with α = 1 giving −∫ p ln q.
///
/// Densities are passed as log-density closures. The result is ±inf when the
/// integral diverges or vanishes.
pub fn cross_entropy_numeric<P, Q>(ln_p: P, ln_q: Q, supp: &SupportSpec, alpha: AlphaOrder, s: &QuadratureSettings) -> Result<f64>
where
    P: Fn(f64) -> f64,
    Q: Fn(f64) -> f64,
{
    match alpha.kind() {
        AlphaKind::One => shannon_cross_entropy_numeric(ln_p, ln_q, supp, s),
        AlphaKind::Infinity => Err(Error::UnsupportedAlpha {
            alpha: alpha.to_string(),
            operation: "cross_entropy_numeric",
        }),
        AlphaKind::Finite(a) => {
            let integral = integrate_nonnegative(|x| weighted_density(ln_p(x), ln_q(x), a - 1.0), supp, s)?;
            Ok(integral.ln() / (1.0 - a))
        }
    }
}

/// (1/(1−α)) ln ∫ p^α; Shannon differential entropy at α = 1.
pub fn renyi_entropy_numeric<P: Fn(f64) -> f64>(ln_p: P, supp: &SupportSpec, alpha: AlphaOrder, s: &QuadratureSettings) -> Result<f64> {
    cross_entropy_numeric(&ln_p, &ln_p, supp, alpha, s)
}

/// The random variable whose MGF is taken.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MgfTransform {
    /// X itself.
    Identity,
    /// (X − μ)².
    CenteredSquare(f64),
}

/// E_p[exp(t·g(X))], `+inf` when the expectation diverges.
pub fn mgf_numeric<P: Fn(f64) -> f64>(ln_p: P, supp: &SupportSpec, transform: MgfTransform, t: f64, s: &QuadratureSettings) -> Result<f64> {
    if t == 0.0 {
        return Ok(1.0);
    }
    let g = |x: f64| match transform {
        MgfTransform::Identity => x,
        MgfTransform::CenteredSquare(mu) => (x - mu) * (x - mu),
    };
    integrate_nonnegative(
        |x| {
            let lp = ln_p(x);
            if lp == f64::NEG_INFINITY {
                0.0
            } else {
                (lp + t * g(x)).exp()
            }
        },
        supp,
        s,
    )
}

/// Tensor-product composite 21-point Kronrod rule on a rectangle, with
/// `panels` equal panels per axis. Used for truncated two-dimensional checks.
pub fn integrate_2d_grid<F: Fn(f64, f64) -> f64>(f: F, x_range: (f64, f64), y_range: (f64, f64), panels: usize) -> f64 {
    let nodes = |(lo, hi): (f64, f64)| -> Vec<(f64, f64)> {
        let w = (hi - lo) / panels as f64;
        let mut out = Vec::with_capacity(panels * 21);
        for i in 0..panels {
            let c = lo + w * (i as f64 + 0.5);
            let h = 0.5 * w;
            out.push((c, WGK[10] * h));
            for j in 0..10 {
                out.push((c - h * XGK[j], WGK[j] * h));
                out.push((c + h * XGK[j], WGK[j] * h));
            }
        }
        out
    };
    let xs = nodes(x_range);
    let ys = nodes(y_range);
    xs.iter()
        .map(|&(x, wx)| wx * ys.iter().map(|&(y, wy)| wy * f(x, y)).sum::<f64>())
        .sum()
}

/// Numerical ln E_h for a one-dimensional family, by quadrature of
/// b(x)^{α−1} f_h(x). Serves as the fallback and cross-check of
/// [`crate::exponential_family::log_base_expectation`].
pub fn log_base_expectation_numeric(
    eta_h: &crate::exponential_family::NaturalParam,
    alpha: f64,
    s: &QuadratureSettings,
) -> Result<f64> {
    let fh = eta_h.to_distribution()?;
    let supp = fh.support();
    let integral = integrate_nonnegative(
        |x| {
            let lp = fh.ln_pdf(x);
            if lp == f64::NEG_INFINITY {
                0.0
            } else {
                ((alpha - 1.0) * eta_h.log_base(&[x]) + lp).exp()
            }
        },
        &supp,
        s,
    )?;
    Ok(integral.ln())
}
