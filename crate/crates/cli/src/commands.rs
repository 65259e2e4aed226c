//! `mean`, `profile`, `scan` and `verify`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use logconvex::convexity::{loglog_profile, DEFAULT_FD_STEP};
use logconvex::diagnostics::verify_claims;
use logconvex::kernels::DEFAULT_TOL;
use logconvex::means::{monomial_mean, monomial_mean_x, quad_mean, series_mean_p2, series_mean_p2_x};
use logconvex::{Classification, ConvexityProfile64, KernelOptions64, TaylorCoefficients64};

use crate::opts::{float_list, float_range, int_list, single_float, sorted_unique, Opts};
use crate::{CliError, Streams};

pub const CSV_HEADER: &str = "p,alpha,k,x,value,classification";
pub const DEFAULT_R_GRID: &str = "0.02:0.98:0.02";
const EXPLORATORY: &str = "note: rows with p != 2 are exploratory; no proven ground truth exists for them";

/// What the mean is taken of.
#[derive(Debug, Clone, PartialEq)]
pub enum Subject {
    Monomial(usize),
    /// Coefficients read from a file; `id` is the file stem.
    Series { id: String, coeffs: TaylorCoefficients64 },
}

impl Subject {
    /// Text of the CSV `k` column.
    pub fn id(&self) -> String {
        match self {
            Subject::Monomial(k) => k.to_string(),
            Subject::Series { id, .. } => id.clone(),
        }
    }

    /// `M_{p,α}(f, r)`: series for `p = 2` with coefficients, quadrature for
    /// other `p`, the kernel ratio for monomials.
    pub fn mean_r(&self, p: f64, alpha: f64, r: f64, tol: f64) -> logconvex::Result<f64> {
        match self {
            Subject::Monomial(k) => monomial_mean(p, alpha, *k, r),
            Subject::Series { coeffs, .. } if p == 2.0 => series_mean_p2(coeffs, alpha, r),
            Subject::Series { coeffs, .. } => quad_mean(coeffs, p, alpha, r, tol),
        }
    }

    /// The same mean as a function of `x = r²`.
    pub fn mean_x(&self, p: f64, alpha: f64, x: f64, tol: f64) -> logconvex::Result<f64> {
        let opts = KernelOptions64::with_tol(tol);
        match self {
            Subject::Monomial(k) => monomial_mean_x(p, alpha, *k, x, &opts),
            Subject::Series { coeffs, .. } if p == 2.0 => series_mean_p2_x(coeffs, alpha, x, &opts),
            Subject::Series { coeffs, .. } => quad_mean(coeffs, p, alpha, x.sqrt(), tol),
        }
    }
}

/// One row of a region scan.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanRecord {
    pub p: f64,
    pub alpha: f64,
    pub subject: String,
    pub classification: Classification,
    pub witness_x: Option<f64>,
    pub argmin_x: Option<f64>,
    pub min_d: f64,
    pub max_d: f64,
}

impl ScanRecord {
    pub fn from_profile(p: f64, alpha: f64, subject: String, prof: &ConvexityProfile64) -> Self {
        Self {
            p,
            alpha,
            subject,
            classification: prof.classification,
            witness_x: prof.witness(),
            argmin_x: prof.argmin(),
            min_d: prof.min_d(),
            max_d: prof.max_d(),
        }
    }

    /// CSV row: `x` is the witness when there is one, else the argmin.
    pub fn csv_row(&self) -> String {
        let x = self.witness_x.or(self.argmin_x).unwrap_or(f64::NAN);
        csv_row(self.p, self.alpha, &self.subject, x, self.min_d, self.classification.as_str())
    }
}

/// Shortest round-trip decimal form.
pub fn fmt_f(v: f64) -> String {
    format!("{v}")
}

pub fn csv_row(p: f64, alpha: f64, k: &str, x: f64, value: f64, class: &str) -> String {
    format!("{},{},{},{},{},{}\n", fmt_f(p), fmt_f(alpha), k, fmt_f(x), fmt_f(value), class)
}

fn emit(io: &mut Streams<'_>, out_path: Option<&str>, text: &str) -> Result<(), CliError> {
    match out_path {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{path}: {e}"))),
        None => io.out.write_all(text.as_bytes()).map_err(CliError::from),
    }
}

fn tol(o: &Opts) -> Result<f64, CliError> {
    let t = o.tol.as_deref().map_or(Ok(DEFAULT_TOL), |s| single_float("tol", s))?;
    if !(t > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
    }
    Ok(t)
}

fn band(o: &Opts) -> Result<Option<f64>, CliError> {
    let Some(s) = o.band.as_deref() else { return Ok(None) };
    let b = single_float("band", s)?;
    if b < 0.0 {
        return Err(CliError::Usage(format!("--band must be nonnegative, got {b}")));
    }
    Ok(Some(b))
}

fn check_p(p: f64) -> Result<f64, CliError> {
    if !(p > 0.0) {
        return Err(CliError::Usage(format!("--p must be positive, got {p}")));
    }
    Ok(p)
}

fn single_p(o: &Opts) -> Result<f64, CliError> {
    check_p(o.p.as_deref().map_or(Ok(2.0), |s| single_float("p", s))?)
}

fn required<'a>(value: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    value.as_deref().ok_or_else(|| CliError::Usage(format!("--{flag} is required")))
}

fn check_r(r: f64, flag: &str) -> Result<f64, CliError> {
    if !(r > 0.0 && r < 1.0) {
        return Err(CliError::Usage(format!("--{flag}: radius {r} is outside (0, 1)")));
    }
    Ok(r)
}

/// Radii from `--grid`, default `0.02:0.98:0.02`; sorted and deduplicated.
pub fn r_grid(o: &Opts) -> Result<Vec<f64>, CliError> {
    let text = o.grid.as_deref().unwrap_or(DEFAULT_R_GRID);
    let g = sorted_unique(float_range("grid", text)?);
    g.into_iter().map(|r| check_r(r, "grid")).collect()
}

/// Radii from `--r`, else the grid.
fn r_values(o: &Opts) -> Result<Vec<f64>, CliError> {
    match o.r.as_deref() {
        Some(s) => float_list("r", s)?.into_iter().map(|r| check_r(r, "r")).collect(),
        None => r_grid(o),
    }
}

pub fn x_grid(radii: &[f64]) -> Vec<f64> {
    radii.iter().map(|r| r * r).collect()
}

/// Reads a coefficient file; its stem becomes the subject id.
pub fn load_coeffs(path: &str) -> Result<Subject, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let coeffs = TaylorCoefficients64::parse(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))?;
    let id = Path::new(path)
        .file_stem()
        .map_or_else(|| path.to_string(), |s| s.to_string_lossy().into_owned());
    if id.contains([',', '\n', '"']) {
        return Err(CliError::Usage(format!("{path}: file stem cannot appear in a CSV field")));
    }
    Ok(Subject::Series { id, coeffs })
}

fn single_subject(o: &Opts) -> Result<Subject, CliError> {
    match (o.monomial.as_deref(), o.coeffs.as_deref()) {
        (Some(k), None) => match int_list("monomial", k)?.as_slice() {
            [k] => Ok(Subject::Monomial(*k)),
            _ => Err(CliError::Usage(format!("--monomial: expected a single degree, got `{k}`"))),
        },
        (None, Some(path)) => load_coeffs(path),
        _ => Err(CliError::Usage("give exactly one of --monomial or --coeffs".into())),
    }
}

/// Monomials in ascending degree, then coefficient files in the order given.
fn subjects(o: &Opts) -> Result<Vec<Subject>, CliError> {
    let mut out = Vec::new();
    if let Some(k) = o.monomial.as_deref() {
        let mut ks = int_list("monomial", k)?;
        ks.sort_unstable();
        ks.dedup();
        out.extend(ks.into_iter().map(Subject::Monomial));
    }
    if let Some(paths) = o.coeffs.as_deref() {
        for path in paths.split(',') {
            out.push(load_coeffs(path.trim())?);
        }
    }
    if out.is_empty() {
        return Err(CliError::Usage("give --monomial and/or --coeffs".into()));
    }
    Ok(out)
}

pub fn cmd_mean(o: &Opts, io: &mut Streams<'_>) -> Result<(), CliError> {
    let p = single_p(o)?;
    let alpha = single_float("alpha", required(&o.alpha, "alpha")?)?;
    let subject = single_subject(o)?;
    let tol = tol(o)?;
    let mut text = String::from("r,mean\n");
    for r in r_values(o)? {
        let m = subject.mean_r(p, alpha, r, tol)?;
        let _ = writeln!(text, "{},{}", fmt_f(r), fmt_f(m));
    }
    emit(io, o.out.as_deref(), &text)
}

/// Profile of `subject` on `x`-grid `xs`.
pub fn profile(subject: &Subject, p: f64, alpha: f64, xs: &[f64], band: Option<f64>, tol: f64) -> Result<ConvexityProfile64, CliError> {
    Ok(loglog_profile(|x| subject.mean_x(p, alpha, x, tol), xs, band, DEFAULT_FD_STEP)?)
}

pub fn cmd_profile(o: &Opts, io: &mut Streams<'_>) -> Result<(), CliError> {
    let p = single_p(o)?;
    let alpha = single_float("alpha", required(&o.alpha, "alpha")?)?;
    let subject = single_subject(o)?;
    let xs = x_grid(&r_grid(o)?);
    let prof = profile(&subject, p, alpha, &xs, band(o)?, tol(o)?)?;

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let class = prof.classification.as_str();
    for (x, d) in prof.grid.iter().zip(&prof.dvals) {
        csv.push_str(&csv_row(p, alpha, &subject.id(), *x, *d, class));
    }
    emit(io, o.out.as_deref(), &csv)?;

    let mut summary = String::new();
    if p != 2.0 {
        let _ = writeln!(summary, "{EXPLORATORY}");
    }
    let _ = writeln!(summary, "classification: {class}");
    let _ = writeln!(summary, "band: {}", fmt_f(prof.band));
    let _ = writeln!(summary, "min_d: {} at x={}", fmt_f(prof.min_d()), fmt_f(prof.argmin().unwrap_or(f64::NAN)));
    let _ = writeln!(summary, "max_d: {}", fmt_f(prof.max_d()));
    let _ = writeln!(summary, "sign_changes: {}", prof.sign_changes.len());
    for s in &prof.sign_changes {
        let dir = if s.rising { "rising" } else { "falling" };
        let _ = writeln!(summary, "sign_change: x={} in [{}, {}] {dir}", fmt_f(s.root), fmt_f(s.lo), fmt_f(s.hi));
    }
    // the summary goes to stdout only when stdout is not carrying the CSV
    let sink: &mut dyn Write = if o.out.is_some() { io.out } else { io.err };
    sink.write_all(summary.as_bytes())?;
    Ok(())
}

/// One record per `(p, α, subject)` in that nesting order, each list ascending.
pub fn scan_records(ps: &[f64], alphas: &[f64], subjects: &[Subject], xs: &[f64], band: Option<f64>, tol: f64) -> Result<Vec<ScanRecord>, CliError> {
    let mut rows = Vec::with_capacity(ps.len() * alphas.len() * subjects.len());
    for &p in ps {
        for &alpha in alphas {
            for s in subjects {
                let prof = profile(s, p, alpha, xs, band, tol)?;
                rows.push(ScanRecord::from_profile(p, alpha, s.id(), &prof));
            }
        }
    }
    Ok(rows)
}

pub fn scan_csv(rows: &[ScanRecord]) -> String {
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in rows {
        csv.push_str(&r.csv_row());
    }
    csv
}

pub fn cmd_scan(o: &Opts, io: &mut Streams<'_>) -> Result<(), CliError> {
    let ps = sorted_unique(float_list("p", o.p.as_deref().unwrap_or("2"))?);
    for &p in &ps {
        check_p(p)?;
    }
    let alphas = sorted_unique(float_list("alpha", required(&o.alpha, "alpha")?)?);
    let subjects = subjects(o)?;
    let xs = x_grid(&r_grid(o)?);
    let rows = scan_records(&ps, &alphas, &subjects, &xs, band(o)?, tol(o)?)?;
    if ps.iter().any(|&p| p != 2.0) {
        let sink: &mut dyn Write = if o.out.is_some() { io.out } else { io.err };
        writeln!(sink, "{EXPLORATORY}")?;
    }
    emit(io, o.out.as_deref(), &scan_csv(&rows))
}

pub fn cmd_verify(o: &Opts, io: &mut Streams<'_>) -> Result<(), CliError> {
    let lambda = single_float("lambda", required(&o.lambda, "lambda")?)?;
    if lambda < 0.0 {
        return Err(CliError::Usage(format!("--lambda must be nonnegative, got {lambda}")));
    }
    let alpha = single_float("alpha", required(&o.alpha, "alpha")?)?;
    let xs = x_grid(&r_grid(o)?);
    let reports = verify_claims(lambda, alpha, &xs, tol(o)?)?;

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let k = fmt_f(lambda);
    for r in &reports {
        let class = format!("{}:{}", r.claim_id, r.status);
        csv.push_str(&csv_row(2.0, alpha, &k, r.witness_x.unwrap_or(f64::NAN), r.worst_violation, &class));
    }
    emit(io, o.out.as_deref(), &csv)?;

    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed() && !r.skipped()).map(|r| r.claim_id).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("claims failed: {}", failed.join(", "))))
    }
}
