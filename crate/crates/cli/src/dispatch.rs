//! Evaluation of a parsed job against the library.

use std::f64::consts::{LN_2, PI};

use renyi_xent::differential::{
    cross_entropy_closed, cross_entropy_natural, cross_entropy_p_uniform, cross_entropy_q_exponential,
    cross_entropy_q_gaussian, cross_entropy_q_uniform, cross_entropy_quadrature, CrossEntropyResult, MgfFunction,
};
use renyi_xent::discrete::{renyi_cross_entropy, DiscreteDistribution};
use renyi_xent::oracle::{cross_entropy_numeric, MgfTransform, QuadratureSettings};
use renyi_xent::{gaussian_process, markov, AlphaKind, AlphaOrder, Error, ExpFamilyDistribution, SupportSpec};

use crate::output::{render_single, render_sweep};
use crate::{AlphaSpec, CliError, Inputs, JobSpec, SpecialCase, EXIT_DIVERGED, EXIT_ERROR, EXIT_OK};

/// One evaluated order: the library value and, on request, the oracle value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub alpha: AlphaOrder,
    pub value: f64,
    pub oracle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn in_module(module: &'static str) -> impl Fn(Error) -> CliError {
    move |source| CliError::Library { module, source }
}

fn oracle_settings() -> Result<QuadratureSettings, CliError> {
    QuadratureSettings::from_env().map_err(in_module("oracle"))
}

/// Σ p q^{α−1} summed term by term, without the log-sum-exp used by the library.
fn discrete_direct(p: &DiscreteDistribution, q: &DiscreteDistribution, alpha: AlphaOrder) -> f64 {
    let pairs = p.probs().iter().zip(q.probs()).filter(|(pi, _)| **pi > 0.0);
    match alpha.kind() {
        AlphaKind::One => -pairs.map(|(pi, qi)| pi * qi.ln()).sum::<f64>(),
        AlphaKind::Infinity => -pairs.map(|(_, qi)| *qi).fold(0.0, f64::max).ln(),
        AlphaKind::Finite(a) => pairs.map(|(pi, qi)| pi * qi.powf(a - 1.0)).sum::<f64>().ln() / (1.0 - a),
    }
}

/// A special-case MGF outside its domain means the defining integral is
/// infinite; report it the way the closed forms do.
fn divergent_on_mgf_domain(r: Result<CrossEntropyResult, Error>, alpha: AlphaOrder) -> Result<f64, Error> {
    match r {
        Ok(r) => Ok(r.value),
        Err(Error::MgfDomain { .. }) => Ok(if alpha.as_f64() < 1.0 { f64::INFINITY } else { f64::NEG_INFINITY }),
        Err(e) => Err(e),
    }
}

fn nonnegative_support(p: &ExpFamilyDistribution) -> Result<(), CliError> {
    match p.support().bounds() {
        Some((lo, _)) if lo >= 0.0 => Ok(()),
        _ => Err(CliError::Library {
            module: "differential",
            source: Error::SupportMismatch(format!("p ({}) must live on [0, inf) for this q", p.family().name())),
        }),
    }
}

/// MGF of (X − center)² under p: closed where available, quadrature otherwise.
fn square_mgf(p: &ExpFamilyDistribution, center: f64) -> Result<MgfFunction, Error> {
    match *p {
        ExpFamilyDistribution::Gaussian { mean, var } => MgfFunction::gaussian_centered_square(mean, var, center),
        ExpFamilyDistribution::Exponential { rate } if center == 0.0 => MgfFunction::exponential_square(rate),
        _ => numeric_mgf(p, MgfTransform::CenteredSquare(center)),
    }
}

fn identity_mgf(p: &ExpFamilyDistribution) -> Result<MgfFunction, Error> {
    match *p {
        ExpFamilyDistribution::Exponential { rate } => MgfFunction::exponential(rate),
        ExpFamilyDistribution::Gamma { shape, scale } => MgfFunction::gamma(shape, scale),
        ExpFamilyDistribution::ChiSquared { nu } => MgfFunction::chi_squared(nu),
        _ => numeric_mgf(p, MgfTransform::Identity),
    }
}

fn numeric_mgf(p: &ExpFamilyDistribution, transform: MgfTransform) -> Result<MgfFunction, Error> {
    let supp = p.support();
    let bounded = supp.length().is_some();
    let domain = match (bounded, transform, p) {
        (true, _, _) => (f64::NEG_INFINITY, f64::INFINITY),
        (false, MgfTransform::Identity, ExpFamilyDistribution::Laplace { scale, .. }) => (-1.0 / scale, 1.0 / scale),
        _ => (f64::NEG_INFINITY, 0.0),
    };
    let d = p.clone();
    MgfFunction::numeric(move |x| d.ln_pdf(x), supp, transform, domain, QuadratureSettings::from_env()?)
}

fn special_value(case: &SpecialCase, alpha: AlphaOrder) -> Result<f64, CliError> {
    let diff = in_module("differential");
    match case {
        SpecialCase::QUniform { support, .. } => cross_entropy_q_uniform(support).map_err(diff),
        SpecialCase::PUniform { support, q } => cross_entropy_p_uniform(support, q, alpha).map(|r| r.value).map_err(diff),
        SpecialCase::QExponential { p, lambda } => {
            nonnegative_support(p)?;
            let mgf = identity_mgf(p).map_err(&diff)?;
            divergent_on_mgf_domain(cross_entropy_q_exponential(&mgf, *lambda, alpha), alpha).map_err(diff)
        }
        SpecialCase::QGaussian { p, mu, var } => {
            let mgf = square_mgf(p, *mu).map_err(&diff)?;
            divergent_on_mgf_domain(cross_entropy_q_gaussian(&mgf, *mu, *var, alpha, false), alpha).map_err(diff)
        }
        SpecialCase::QHalfNormal { p, var } => {
            nonnegative_support(p)?;
            let mgf = square_mgf(p, 0.0).map_err(&diff)?;
            divergent_on_mgf_domain(cross_entropy_q_gaussian(&mgf, 0.0, *var, alpha, true), alpha).map_err(diff)
        }
    }
}

/// Quadrature of the defining integral with the special `q` written out.
fn special_oracle(case: &SpecialCase, alpha: AlphaOrder) -> Result<f64, CliError> {
    let s = oracle_settings()?;
    let num = |ln_p: &dyn Fn(f64) -> f64, ln_q: &dyn Fn(f64) -> f64, supp: &SupportSpec| {
        cross_entropy_numeric(ln_p, ln_q, supp, alpha, &s).map_err(in_module("oracle"))
    };
    match case {
        SpecialCase::QUniform { support, p } => {
            let p = p.as_ref().ok_or_else(|| {
                CliError::Usage("--case q-uniform --oracle needs --family and --p for the p side".into())
            })?;
            if p.support() != *support {
                return Err(CliError::Library {
                    module: "differential",
                    source: Error::SupportMismatch("p must be supported on --support".into()),
                });
            }
            let ln_len = support.length().unwrap_or(f64::INFINITY).ln();
            num(&|x| p.ln_pdf(x), &|_| -ln_len, support)
        }
        SpecialCase::PUniform { support, q } => {
            let ln_len = support.length().unwrap_or(f64::INFINITY).ln();
            num(&|_| -ln_len, &|x| q.ln_pdf(x), support)
        }
        SpecialCase::QExponential { p, lambda } => {
            num(&|x| p.ln_pdf(x), &|x| lambda.ln() - lambda * x, &p.support())
        }
        SpecialCase::QGaussian { p, mu, var } => {
            let c = -0.5 * (2.0 * PI * var).ln();
            num(&|x| p.ln_pdf(x), &|x| c - (x - mu).powi(2) / (2.0 * var), &p.support())
        }
        SpecialCase::QHalfNormal { p, var } => {
            let c = 0.5 * (2.0 / (PI * var)).ln();
            num(&|x| p.ln_pdf(x), &|x| c - x * x / (2.0 * var), &p.support())
        }
    }
}

fn evaluate_one(job: &JobSpec, alpha: AlphaOrder) -> Result<Evaluation, CliError> {
    let oracle = job.oracle_check;
    let (value, oracle) = match &job.inputs {
        Inputs::Discrete { p, q } => {
            let v = renyi_cross_entropy(p, q, alpha).map_err(in_module("discrete"))?;
            (v, oracle.then(|| discrete_direct(p, q, alpha)))
        }
        Inputs::ExpFam { p, q } => {
            let diff = in_module("differential");
            let v = cross_entropy_closed(p, q, alpha).map_err(&diff)?.value;
            let o = if !oracle {
                None
            } else if p.dim() > 1 {
                Some(cross_entropy_natural(p, q, alpha).map_err(&diff)?.value)
            } else {
                Some(cross_entropy_quadrature(p, q, alpha, &oracle_settings()?).map_err(&diff)?.value)
            };
            (v, o)
        }
        Inputs::Special(case) => {
            let v = special_value(case, alpha)?;
            (v, if oracle { Some(special_oracle(case, alpha)?) } else { None })
        }
        Inputs::Markov { p, q, finite_n } => {
            let m = in_module("markov");
            let v = markov::cross_entropy_rate(p, q, alpha).map_err(&m)?;
            let o = if oracle {
                Some(markov::finite_n_cross_entropy(p, q, alpha, *finite_n).map_err(&m)?)
            } else {
                None
            };
            (v, o)
        }
        Inputs::Gauss { p, q, finite_n } => {
            let g = in_module("gaussian_process");
            let v = gaussian_process::rate_spectral(p, q, alpha).map_err(&g)?;
            let o = if oracle {
                Some(gaussian_process::rate_finite_n(p, q, alpha, *finite_n).map_err(&g)?)
            } else {
                None
            };
            (v, o)
        }
    };
    let unit = if job.bits { LN_2 } else { 1.0 };
    Ok(Evaluation {
        alpha,
        value: value / unit,
        oracle: oracle.map(|o| o / unit),
    })
}

/// Evaluates every order of the job, in grid order.
pub fn evaluate(job: &JobSpec) -> Result<Vec<Evaluation>, CliError> {
    job.alpha.orders().iter().map(|&a| evaluate_one(job, a)).collect()
}

/// Runs a job to completion and returns what to print and the exit code.
pub fn run(job: &JobSpec) -> RunOutput {
    let rendered = evaluate(job).and_then(|results| {
        let diverged = results.iter().any(|e| e.value.is_infinite());
        let (text, warnings) = match job.alpha {
            AlphaSpec::Single(_) => (render_single(job, &results[0])?, Vec::new()),
            AlphaSpec::Grid(_) => render_sweep(job, &results)?,
        };
        Ok((text, warnings, diverged))
    });
    match rendered {
        Ok((stdout, warnings, diverged)) => RunOutput {
            exit_code: if diverged { EXIT_DIVERGED } else { EXIT_OK },
            stdout,
            stderr: warnings.iter().map(|w| format!("{w}\n")).collect(),
        },
        Err(e) => RunOutput {
            exit_code: EXIT_ERROR,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_args;

    fn job(s: &str) -> JobSpec {
        let argv: Vec<&str> = std::iter::once("renyi").chain(s.split_whitespace()).collect();
        parse_args(argv).unwrap()
    }

    #[test]
    fn gaussian_self_at_two() {
        let out = run(&job("xent expfam --family gaussian --p mu=0,var=1 --q mu=0,var=1 --alpha 2"));
        assert_eq!(out.stdout, "1.26551212348\n");
        assert_eq!(out.exit_code, EXIT_OK);
    }

    #[test]
    fn out_of_domain_is_divergence() {
        let out = run(&job("xent expfam --family exponential --p lambda=0.1 --q lambda=1 --alpha 0.5"));
        assert_eq!(out.stdout, "inf\n");
        assert_eq!(out.exit_code, EXIT_DIVERGED);
    }

    #[test]
    fn bits_divides_by_ln2() {
        let out = run(&job("xent discrete --p 0.5,0.5 --q 0.5,0.5 --alpha 3 --bits"));
        assert_eq!(out.stdout, "1.00000000000\n");
    }

    #[test]
    fn discrete_oracle_gap_is_tiny() {
        let e = evaluate(&job("xent discrete --p 0.2,0.3,0.5 --q 0.6,0.1,0.3 --alpha 0.7 --oracle")).unwrap();
        assert!((e[0].value - e[0].oracle.unwrap()).abs() < 1e-13);
    }

    #[test]
    fn library_errors_are_module_qualified() {
        let out = run(&job("xent expfam --family laplace --p mu=0,b=1 --q mu=1,b=1 --alpha 2"));
        assert_eq!(out.exit_code, EXIT_ERROR);
        assert!(out.stderr.starts_with("error: differential:"), "{}", out.stderr);
    }

    #[test]
    fn special_cases_match_their_oracles() {
        for s in [
            "xent special --case q-exponential --family gamma --p k=2,theta=0.5 --lambda 1.5 --alpha 2 --oracle",
            "xent special --case q-exponential --family beta --p a=2,b=3 --lambda 1 --alpha 0.5 --oracle",
            "xent special --case q-gaussian --family laplace --p mu=0.5,b=1 --mu 1 --var 2 --alpha 3 --oracle",
            "xent special --case q-gaussian --family gaussian --p mu=1,var=1 --mu 0 --var 1 --alpha 2 --oracle",
            "xent special --case q-half-normal --family exponential --p lambda=1 --var 1 --alpha 2 --oracle",
            "xent special --case q-half-normal --family gamma --p k=2,theta=1 --var 2 --alpha shannon --oracle",
            "xent special --case p-uniform --support 0:1 --family beta --q a=2,b=3 --alpha 3 --oracle",
            "xent special --case q-uniform --support 0:1 --family beta --p a=2,b=3 --alpha 4 --oracle",
        ] {
            let e = evaluate(&job(s)).unwrap()[0];
            let o = e.oracle.unwrap();
            assert!((e.value - o).abs() <= 1e-6 * (1.0 + o.abs()), "{s}: {} vs {o}", e.value);
        }
    }

    #[test]
    fn heavy_tail_against_exponential_q_diverges() {
        let out = run(&job("xent special --case q-exponential --family gamma --p k=2,theta=1 --lambda 2 --alpha 0.2"));
        assert_eq!(out.stdout, "inf\n");
        assert_eq!(out.exit_code, EXIT_DIVERGED);
    }

    #[test]
    fn gauss_rate_and_oracle() {
        let e = evaluate(&job("rate gauss --p ar1:0.5,1 --q white:2 --alpha 2 --oracle --finite-n 1024")).unwrap()[0];
        assert!((e.value - e.oracle.unwrap()).abs() < 2e-3);
    }

    #[test]
    fn sweep_is_in_grid_order() {
        let j = job("sweep expfam --family gaussian --p mu=0,var=1 --q mu=0,var=1 --alphas 2,3,5 --format csv");
        let out = run(&j);
        let lines: Vec<&str> = out.stdout.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "alpha,value");
        let vals: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        for (v, a) in vals.iter().zip([2.0f64, 3.0, 5.0]) {
            let expected = 0.5 * ((2.0 * PI).ln() + a.ln() / (a - 1.0));
            assert!((v - expected).abs() < 1e-11);
        }
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
        assert!(out.stderr.is_empty());
    }
}
