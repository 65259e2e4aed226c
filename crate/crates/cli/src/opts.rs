//! Flag definitions, `--config` merging and the value-list syntax.
//!
//! Lists are comma-separated items; an item is a number or an inclusive
//! range `lo:hi:step` (`lo:hi` for integers, step 1).

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "logconvex", version, about = "Log-convexity of weighted area integral means")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print M_{p,alpha}(f, r) over a list or grid of radii.
    Mean(Opts),
    /// Sample the log-log second difference of a mean and classify it.
    Profile(Opts),
    /// Classify every (p, alpha, k) combination and write one CSV row each.
    Scan(Opts),
    /// Run the reproduction battery.
    Reproduce(Opts),
    /// Check the proof claims for one (lambda, alpha).
    Verify(Opts),
}

impl Command {
    pub fn opts(&self) -> &Opts {
        match self {
            Command::Mean(o) | Command::Profile(o) | Command::Scan(o) | Command::Reproduce(o) | Command::Verify(o) => o,
        }
    }
}

/// Every flag is kept as text until `--config` has been merged in.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Exponent p (list for scan). Default 2.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Weight exponent alpha (list for scan).
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Monomial degree k (list for scan).
    #[arg(long, value_name = "K")]
    pub monomial: Option<String>,
    /// Coefficient file: one `re im` pair per line, line index = power.
    #[arg(long, value_name = "PATH")]
    pub coeffs: Option<String>,
    /// Radius or list of radii.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// Radius grid lo:hi:step. Default 0.02:0.98:0.02.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Numerical tolerance.
    #[arg(long)]
    pub tol: Option<String>,
    /// Classification band around zero.
    #[arg(long)]
    pub band: Option<String>,
    /// Write CSV here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
    /// key=value file; flags given on the command line win.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Run a single reproduction item.
    #[arg(long, value_name = "ID")]
    pub only: Option<String>,
    /// Seed for randomized batteries.
    #[arg(long, value_name = "N")]
    pub seed: Option<String>,
    /// Exponent lambda for verify.
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
}

const KEYS: [&str; 12] = [
    "p", "alpha", "monomial", "coeffs", "r", "grid", "tol", "band", "out", "only", "seed", "lambda",
];

impl Opts {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "p" => &mut self.p,
            "alpha" => &mut self.alpha,
            "monomial" => &mut self.monomial,
            "coeffs" => &mut self.coeffs,
            "r" => &mut self.r,
            "grid" => &mut self.grid,
            "tol" => &mut self.tol,
            "band" => &mut self.band,
            "out" => &mut self.out,
            "only" => &mut self.only,
            "seed" => &mut self.seed,
            "lambda" => &mut self.lambda,
            _ => return None,
        })
    }

    /// Fills unset flags from the `--config` file, if one was given.
    pub fn merged(&self) -> Result<Opts, CliError> {
        let mut out = self.clone();
        let Some(path) = &self.config else {
            return Ok(out);
        };
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        for (key, value) in parse_config(&text)? {
            let slot = out.slot(&key).ok_or_else(|| {
                CliError::Usage(format!("{}: unknown key `{key}` (expected one of {})", path.display(), KEYS.join(", ")))
            })?;
            if slot.is_none() {
                *slot = Some(value);
            }
        }
        Ok(out)
    }
}

/// `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", i + 1)))?;
        let key = k.trim().trim_start_matches("--").to_string();
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(CliError::Usage(format!("config line {}: duplicate key `{key}`", i + 1)));
        }
    }
    Ok(map)
}

fn number(flag: &str, s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: `{s}` is not a number")))?;
    if !v.is_finite() {
        return Err(CliError::Usage(format!("--{flag}: `{s}` is not finite")));
    }
    Ok(v)
}

fn decimals(s: &str) -> usize {
    let s = s.trim();
    if s.contains(['e', 'E']) {
        return 17;
    }
    s.split_once('.').map_or(0, |(_, frac)| frac.len())
}

/// `lo:hi:step`, inclusive, with points rounded to the inputs' decimals so
/// that `0.02:0.98:0.02` yields `0.06` rather than `0.06000000000000001`.
pub fn float_range(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Usage(format!("--{flag}: `{text}` is not lo:hi:step")));
    }
    let (lo, hi, step) = (number(flag, parts[0])?, number(flag, parts[1])?, number(flag, parts[2])?);
    if !(step > 0.0) || hi < lo {
        return Err(CliError::Usage(format!("--{flag}: `{text}` needs step > 0 and lo <= hi")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(CliError::Usage(format!("--{flag}: `{text}` has too many points")));
    }
    let places = decimals(parts[0]).max(decimals(parts[2])) as i32;
    Ok((0..=n).map(|i| round_to(lo + step * i as f64, places)).collect())
}

fn round_to(v: f64, places: i32) -> f64 {
    if places >= 15 {
        return v;
    }
    let scale = 10f64.powi(places);
    let r = (v * scale).round() / scale;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

pub fn float_list(flag: &str, text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        if item.contains(':') {
            out.extend(float_range(flag, item)?);
        } else {
            out.push(number(flag, item)?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage(format!("--{flag}: empty list")));
    }
    Ok(out)
}

pub fn single_float(flag: &str, text: &str) -> Result<f64, CliError> {
    match float_list(flag, text)?.as_slice() {
        [v] => Ok(*v),
        _ => Err(CliError::Usage(format!("--{flag}: expected a single value, got `{text}`"))),
    }
}

fn index(flag: &str, s: &str) -> Result<usize, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: `{s}` is not a nonnegative integer")))
}

pub fn int_list(flag: &str, text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [v] => out.push(index(flag, v)?),
            [lo, hi] | [lo, hi, _] => {
                let (lo, hi) = (index(flag, lo)?, index(flag, hi)?);
                let step = if parts.len() == 3 { index(flag, parts[2])? } else { 1 };
                if step == 0 || hi < lo {
                    return Err(CliError::Usage(format!("--{flag}: `{item}` needs step > 0 and lo <= hi")));
                }
                out.extend((lo..=hi).step_by(step));
            }
            _ => return Err(CliError::Usage(format!("--{flag}: cannot parse `{item}`"))),
        }
    }
    Ok(out)
}

/// Sorted, deduplicated copy.
pub fn sorted_unique(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}
