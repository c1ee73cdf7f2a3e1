//! Number formatting and the plain/JSON/CSV renderings.

use renyi_xent::AlphaOrder;
use serde_json::{json, Value};

use crate::dispatch::Evaluation;
use crate::{CliError, JobSpec, OutputFormat};

const SIG_DIGITS: usize = 12;
/// Relative slack before a rising sweep value is reported.
const MONOTONE_SLACK: f64 = 1e-9;

/// 12 significant digits, trailing zeros kept; `inf`/`-inf` for divergence.
/// Very large or small magnitudes switch to scientific notation.
pub fn format_sig(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if (-5..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

fn format_alpha(a: AlphaOrder) -> String {
    a.to_string()
}

fn alpha_json(a: AlphaOrder) -> Value {
    if a.is_infinite() {
        json!("inf")
    } else {
        json!(a.as_f64())
    }
}

/// Printed precision, as a JSON number; infinities become strings.
fn number_json(v: f64) -> Value {
    let s = format_sig(v);
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => json!(x),
        _ => json!(s),
    }
}

fn gap(value: f64, oracle: f64) -> f64 {
    if value == oracle {
        0.0
    } else {
        (value - oracle).abs()
    }
}

fn row_fields(e: &Evaluation) -> Vec<String> {
    let mut f = vec![format_alpha(e.alpha), format_sig(e.value)];
    if let Some(o) = e.oracle {
        f.push(format_sig(o));
        f.push(format_sig(gap(e.value, o)));
    }
    f
}

fn json_object(job: &JobSpec, e: &Evaluation) -> Value {
    json!({
        "command": job.name,
        "alpha": alpha_json(e.alpha),
        "value": number_json(e.value),
        "oracle": e.oracle.map_or(Value::Null, number_json),
        "gap": e.oracle.map_or(Value::Null, |o| number_json(gap(e.value, o))),
    })
}

fn csv_text(results: &[Evaluation], with_oracle: bool) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["alpha", "value"];
    if with_oracle {
        header.extend(["oracle", "gap"]);
    }
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e));
    w.write_record(&header).map_err(io)?;
    for e in results {
        w.write_record(row_fields(e)).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// CSV for a sweep plus any monotonicity warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCsv {
    pub text: String,
    pub warnings: Vec<String>,
}

/// Header `alpha,value` (plus `oracle,gap` with an oracle check) and one row
/// per order. Cross-entropy is non-increasing in α, so a rising value is
/// reported as a warning.
pub fn emit_sweep(job: &JobSpec, results: &[Evaluation]) -> Result<SweepCsv, CliError> {
    if results.is_empty() {
        return Err(CliError::EmptySweep);
    }
    let warnings = results
        .windows(2)
        .filter(|w| {
            let (a, b) = (w[0].value, w[1].value);
            !a.is_nan() && !b.is_nan() && a != b && b > a + MONOTONE_SLACK * (1.0 + a.abs().min(b.abs()))
        })
        .map(|w| {
            format!(
                "warning: {}: value rises from {} at alpha={} to {} at alpha={}",
                job.name,
                format_sig(w[0].value),
                w[0].alpha,
                format_sig(w[1].value),
                w[1].alpha
            )
        })
        .collect();
    Ok(SweepCsv {
        text: csv_text(results, job.oracle_check)?,
        warnings,
    })
}

/// Renders single-order results: the value on the first line, then
/// `oracle` and `gap` lines when checked.
pub(crate) fn render_single(job: &JobSpec, e: &Evaluation) -> Result<String, CliError> {
    Ok(match job.output_format {
        OutputFormat::Plain => {
            let mut s = format_sig(e.value) + "\n";
            if let Some(o) = e.oracle {
                s += &format!("oracle {}\ngap {}\n", format_sig(o), format_sig(gap(e.value, o)));
            }
            s
        }
        OutputFormat::Json => json_object(job, e).to_string() + "\n",
        OutputFormat::Csv => csv_text(std::slice::from_ref(e), job.oracle_check)?,
    })
}

/// Sweep output in the requested format; plain is whitespace-separated rows.
pub(crate) fn render_sweep(job: &JobSpec, results: &[Evaluation]) -> Result<(String, Vec<String>), CliError> {
    let sweep = emit_sweep(job, results)?;
    let text = match job.output_format {
        OutputFormat::Csv => sweep.text,
        OutputFormat::Json => Value::Array(results.iter().map(|e| json_object(job, e)).collect()).to_string() + "\n",
        OutputFormat::Plain => results.iter().map(|e| row_fields(e).join(" ") + "\n").collect(),
    };
    Ok((text, sweep.warnings))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_sig(0.5 * (4.0 * std::f64::consts::PI).ln()), "1.26551212348");
        assert_eq!(format_sig(std::f64::consts::LN_2), "0.693147180560");
        assert_eq!(format_sig(-0.0603911), "-0.0603911000000");
        assert_eq!(format_sig(0.0), "0.00000000000");
        assert_eq!(format_sig(9.9999999999996), "10.0000000000");
        assert_eq!(format_sig(1.5e-9), "1.50000000000e-9");
        assert_eq!(format_sig(f64::INFINITY), "inf");
        assert_eq!(format_sig(f64::NEG_INFINITY), "-inf");
    }

    fn sweep_job() -> JobSpec {
        crate::parse_args(["renyi", "sweep", "discrete", "--p", "0.5,0.5", "--q", "0.5,0.5", "--alphas", "2,3,4"]).unwrap()
    }

    fn ev(a: f64, value: f64) -> Evaluation {
        Evaluation {
            alpha: AlphaOrder::new(a).unwrap(),
            value,
            oracle: None,
        }
    }

    #[test]
    fn sweep_csv_shape() {
        let out = emit_sweep(&sweep_job(), &[ev(2.0, 1.5), ev(3.0, 1.25), ev(4.0, 1.0)]).unwrap();
        assert_eq!(out.text, "alpha,value\n2,1.50000000000\n3,1.25000000000\n4,1.00000000000\n");
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn rising_sweep_warns_but_succeeds() {
        let out = emit_sweep(&sweep_job(), &[ev(2.0, 1.0), ev(3.0, 1.1)]).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].contains("alpha=3"));
    }

    #[test]
    fn empty_sweep_is_an_error() {
        assert!(matches!(emit_sweep(&sweep_job(), &[]), Err(CliError::EmptySweep)));
    }
}
