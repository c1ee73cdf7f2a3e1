//! Parameter strings and CSV inputs.

use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use renyi_xent::discrete::DiscreteDistribution;
use renyi_xent::gaussian_process::StationaryGaussianSpec;
use renyi_xent::{AlphaOrder, ExpFamilyDistribution, SupportSpec};

use crate::CliError;

/// AR(1) autocovariances are truncated once ρ^k drops below this.
const AR1_TAIL: f64 = 1e-17;
const AR1_MAX_LAG: usize = 20_000;

fn malformed(msg: impl Into<String>) -> CliError {
    CliError::MalformedParameter(msg.into())
}

fn lib(module: &'static str) -> impl FnOnce(renyi_xent::Error) -> CliError {
    move |source| CliError::Library { module, source }
}

pub(crate) fn parse_f64(name: &str, raw: &str) -> Result<f64, CliError> {
    raw.trim()
        .parse()
        .map_err(|_| malformed(format!("{name}: '{raw}' is not a number")))
}

/// `1`, `one` and `shannon` all mean the α → 1 marker on the command line.
pub(crate) fn parse_alpha(raw: &str) -> Result<AlphaOrder, CliError> {
    if raw.trim().parse::<f64>() == Ok(1.0) {
        return Ok(AlphaOrder::ONE);
    }
    raw.parse::<AlphaOrder>()
        .map_err(|e| malformed(format!("--alpha: {e}")))
}

/// `start:stop:step` ranges and single orders, comma separated.
///
/// Range points that land on 1 use the α → 1 marker. The result must be
/// finite and strictly increasing.
pub(crate) fn parse_alpha_grid(raw: &str) -> Result<Vec<AlphaOrder>, CliError> {
    let mut out = Vec::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_alpha(single)?),
            [start, stop, step] => {
                let (start, stop, step) = (
                    parse_f64("--alphas start", start)?,
                    parse_f64("--alphas stop", stop)?,
                    parse_f64("--alphas step", step)?,
                );
                if !(step > 0.0 && step.is_finite() && start.is_finite() && stop.is_finite() && stop >= start) {
                    return Err(malformed(format!(
                        "--alphas: '{item}' needs a finite start <= stop and a positive step"
                    )));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                if count > 100_000 {
                    return Err(malformed(format!("--alphas: '{item}' has {count} points")));
                }
                for i in 0..count {
                    // snap to 12 decimals so 0.1-steps print cleanly
                    let a = ((start + i as f64 * step) * 1e12).round() / 1e12;
                    out.push(if a == 1.0 {
                        AlphaOrder::ONE
                    } else {
                        AlphaOrder::new(a).map_err(|e| malformed(format!("--alphas: {e}")))?
                    });
                }
            }
            _ => return Err(malformed(format!("--alphas: cannot read '{item}' (expected start:stop:step)"))),
        }
    }
    if out.is_empty() {
        return Err(malformed("--alphas: empty grid"));
    }
    if out.iter().any(|a| a.is_infinite()) {
        return Err(malformed("--alphas: sweep grids must be finite"));
    }
    if out.windows(2).any(|w| w[0].as_f64() >= w[1].as_f64()) {
        return Err(malformed("--alphas: grid must be strictly increasing"));
    }
    Ok(out)
}

fn existing(path: &str) -> Result<PathBuf, CliError> {
    let p = PathBuf::from(path);
    if p.is_file() {
        Ok(p)
    } else {
        Err(CliError::MissingFile(p))
    }
}

fn read_records(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let csv_err = |msg: String| CliError::Csv {
        path: path.to_path_buf(),
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| csv_err(e.to_string()))?;
    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(e.to_string()))?;
        let row = rec
            .iter()
            .filter(|f| !f.is_empty())
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|_| csv_err(format!("record {}: '{f}' is not a number", line + 1)))
            })
            .collect::<Result<Vec<f64>, _>>()?;
        if !row.is_empty() {
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return Err(csv_err("no data".into()));
    }
    Ok(rows)
}

/// K lines of K comma-separated values.
pub(crate) fn read_matrix(path: &str) -> Result<DMatrix<f64>, CliError> {
    let path = existing(path)?;
    let rows = read_records(&path)?;
    let k = rows.len();
    if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != k) {
        return Err(CliError::Csv {
            path,
            msg: format!("row {} has {} entries; a {k}x{k} matrix was expected", i + 1, r.len()),
        });
    }
    Ok(DMatrix::from_fn(k, k, |i, j| rows[i][j]))
}

/// One value per line, starting at lag 0.
pub(crate) fn read_column(path: &str) -> Result<Vec<f64>, CliError> {
    let path = existing(path)?;
    let rows = read_records(&path)?;
    if let Some(i) = rows.iter().position(|r| r.len() != 1) {
        return Err(CliError::Csv {
            path,
            msg: format!("line {} must hold a single value", i + 1),
        });
    }
    Ok(rows.into_iter().map(|r| r[0]).collect())
}

/// Inline `0.2,0.3,0.5` or a file holding one such line.
pub(crate) fn parse_distribution(name: &str, raw: &str) -> Result<DiscreteDistribution, CliError> {
    let inline: Result<Vec<f64>, _> = raw.split(',').map(|s| s.trim().parse::<f64>()).collect();
    let masses = match inline {
        Ok(v) => v,
        Err(_) => {
            let path = existing(raw)?;
            let mut rows = read_records(&path)?;
            if rows.len() != 1 {
                return Err(CliError::Csv {
                    path,
                    msg: format!("expected one line of masses, found {}", rows.len()),
                });
            }
            rows.pop().unwrap_or_default()
        }
    };
    DiscreteDistribution::new(masses).map_err(|e| malformed(format!("{name}: {e}")))
}

/// `key=value` pairs separated by commas.
fn key_values(name: &str, raw: &str) -> Result<Vec<(String, f64)>, CliError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| malformed(format!("{name}: expected key=value, got '{kv}'")))?;
            Ok((k.trim().to_ascii_lowercase(), parse_f64(&format!("{name} {k}"), v)?))
        })
        .collect()
}

/// Picks the parameters named in `keys` (each with its aliases) in order.
fn take(name: &str, family: &str, pairs: &[(String, f64)], keys: &[&[&str]]) -> Result<Vec<f64>, CliError> {
    for (k, _) in pairs {
        if !keys.iter().any(|aliases| aliases.contains(&k.as_str())) {
            let expected: Vec<&str> = keys.iter().map(|a| a[0]).collect();
            return Err(malformed(format!(
                "{name}: unknown {family} parameter '{k}' (expected {})",
                expected.join(", ")
            )));
        }
    }
    keys.iter()
        .map(|aliases| {
            pairs
                .iter()
                .find(|(k, _)| aliases.contains(&k.as_str()))
                .map(|(_, v)| *v)
                .ok_or_else(|| malformed(format!("{name}: missing {family} parameter '{}'", aliases[0])))
        })
        .collect()
}

/// Builds a distribution from a family name and its parameter string.
/// `mvn` takes a covariance matrix file instead of key=value pairs.
pub(crate) fn parse_expfam(name: &str, family: &str, raw: &str) -> Result<ExpFamilyDistribution, CliError> {
    let fam = family.trim().to_ascii_lowercase();
    if matches!(fam.as_str(), "mvn" | "multivariate-gaussian") {
        let cov = read_matrix(raw)?;
        return ExpFamilyDistribution::mvn_zero_mean(cov).map_err(lib("exponential_family"));
    }
    let pairs = key_values(name, raw)?;
    let p = |keys: &[&[&str]]| take(name, &fam, &pairs, keys);
    let d = match fam.as_str() {
        "beta" => {
            let v = p(&[&["a", "alpha"], &["b", "beta"]])?;
            ExpFamilyDistribution::beta(v[0], v[1])
        }
        "chi-squared" | "chisquared" | "chi2" => {
            let v = p(&[&["nu", "k", "df"]])?;
            ExpFamilyDistribution::chi_squared(v[0])
        }
        "exponential" => {
            let v = p(&[&["lambda", "rate"]])?;
            ExpFamilyDistribution::exponential(v[0])
        }
        "gamma" => {
            let v = p(&[&["k", "shape"], &["theta", "scale"]])?;
            ExpFamilyDistribution::gamma(v[0], v[1])
        }
        "gaussian" | "normal" => {
            let v = p(&[&["mu", "mean"], &["var", "sigma2"]])?;
            ExpFamilyDistribution::gaussian(v[0], v[1])
        }
        "laplace" => {
            let v = p(&[&["mu", "location"], &["b", "scale"]])?;
            ExpFamilyDistribution::laplace(v[0], v[1])
        }
        other => {
            return Err(CliError::UnknownFamily(other.to_string()));
        }
    };
    d.map_err(|e| malformed(format!("{name}: {e}")))
}

/// `lo:hi`.
pub(crate) fn parse_support(raw: &str) -> Result<SupportSpec, CliError> {
    let (lo, hi) = raw
        .split_once(':')
        .ok_or_else(|| malformed(format!("--support: expected lo:hi, got '{raw}'")))?;
    SupportSpec::interval(parse_f64("--support lo", lo)?, parse_f64("--support hi", hi)?)
        .map_err(|e| malformed(format!("--support: {e}")))
}

/// `white:VAR`, `ar1:RHO,VAR`, or an autocovariance file.
pub(crate) fn parse_process(name: &str, raw: &str) -> Result<StationaryGaussianSpec, CliError> {
    let bad = |e: renyi_xent::Error| malformed(format!("{name}: {e}"));
    if let Some(rest) = raw.strip_prefix("white:") {
        return StationaryGaussianSpec::white_noise(parse_f64(name, rest)?).map_err(bad);
    }
    if let Some(rest) = raw.strip_prefix("ar1:") {
        let (rho, var) = rest
            .split_once(',')
            .ok_or_else(|| malformed(format!("{name}: expected ar1:RHO,VAR, got '{raw}'")))?;
        let rho = parse_f64(name, rho)?;
        let var = parse_f64(name, var)?;
        let m = if rho == 0.0 {
            0
        } else {
            ((AR1_TAIL.ln() / rho.abs().ln()).ceil().max(1.0) as usize).min(AR1_MAX_LAG)
        };
        return StationaryGaussianSpec::ar1(rho, var, m).map_err(bad);
    }
    StationaryGaussianSpec::from_autocovariance(read_column(raw)?).map_err(bad)
}
