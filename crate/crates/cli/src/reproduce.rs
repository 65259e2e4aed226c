//! The reproduction battery behind `logconvex reproduce`.
//!
//! Every item prints one `PASS`/`FAIL` line with the measured quantity.
//! Randomized items draw from ChaCha8 seeded per item; `--seed` replaces
//! every item's seed.

use std::fmt::Write as _;

use logconvex::convexity::{
    aggregation_sides, d_functional_closed, d_functional_fd, delta, delta_dlambda, extrapolate_delta_x1, find_sign_change,
    limit_delta_x1, linspace, loglog_profile, DEFAULT_FD_STEP,
};
use logconvex::diagnostics::{
    d1, d2, delta1_family, delta3, delta_small, delta_split, e2, positive_alpha_split, find_negative_delta_near_one, limit_first_x1,
    locate_x_star, verify_claims,
};
use logconvex::kernels::lambda0;
use logconvex::means::{monomial_mean, quad_mean, series_mean_p2, series_mean_p2_x};
use logconvex::{Classification, ClaimStatus, Complex64, KernelOptions64, TaylorCoefficients64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::{scan_csv, scan_records, x_grid, Subject};
use crate::opts::{float_range, Opts};
use crate::{CliError, Streams};

/// Outcome of one item.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemResult {
    pub id: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(&Ctx) -> Result<(bool, String), CliError>;

pub struct Ctx {
    seed: Option<u64>,
}

impl Ctx {
    pub fn new(seed: Option<u64>) -> Self {
        Self { seed }
    }

    fn rng(&self, default: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed.unwrap_or(default))
    }
}

const ITEMS: [(&str, Check); 32] = [
    ("closed-form-1", closed_form_1),
    ("closed-form-2", closed_form_2),
    ("mean-examples", mean_examples),
    ("d-closed-forms", d_closed_forms),
    ("quartic-endpoints", quartic_endpoints),
    ("cubic-endpoints", cubic_endpoints),
    ("quartic-profile", quartic_profile),
    ("cubic-profile", cubic_profile),
    ("monomial-profile", monomial_profile),
    ("log-convex-range", log_convex_range),
    ("sharpness-above", sharpness_above),
    ("sharpness-below", sharpness_below),
    ("delta-zero", delta_zero),
    ("delta-lambda0", delta_lambda0),
    ("ddelta-dlambda", ddelta_dlambda),
    ("oracle-equivalence", oracle_equivalence),
    ("proof-battery", proof_battery),
    ("aggregation", aggregation),
    ("e2-endpoints", e2_endpoints),
    ("d1-d2-origin", d1_d2_origin),
    ("d2-negative", d2_negative),
    ("d2-sign-change", d2_sign_change),
    ("delta-small", delta_small_item),
    ("delta1-chain", delta1_chain),
    ("delta3", delta3_item),
    ("split-limits", split_limits),
    ("term5-limit", term5_limit),
    ("verify-regimes", verify_regimes),
    ("scan-convex-range", scan_convex_range),
    ("scan-above", scan_above),
    ("scan-below", scan_below),
    ("scan-determinism", scan_determinism),
];

pub fn item_ids() -> Vec<&'static str> {
    ITEMS.iter().map(|(id, _)| *id).collect()
}

/// Runs every item, or only `only` when given.
pub fn run_battery(only: Option<&str>, seed: Option<u64>) -> Result<Vec<ItemResult>, CliError> {
    let ctx = Ctx::new(seed);
    let selected: Vec<&(&str, Check)> = match only {
        Some(id) => {
            let found: Vec<_> = ITEMS.iter().filter(|(i, _)| *i == id).collect();
            if found.is_empty() {
                return Err(CliError::Usage(format!("--only: unknown item `{id}` (known: {})", item_ids().join(", "))));
            }
            found
        }
        None => ITEMS.iter().collect(),
    };
    let mut out = Vec::with_capacity(selected.len());
    for (id, check) in selected {
        let (passed, detail) = match check(&ctx) {
            Ok(v) => v,
            // a numeric failure inside an item fails that item only
            Err(CliError::Numeric(e)) => (false, format!("numeric failure: {e}")),
            Err(e) => return Err(e),
        };
        out.push(ItemResult { id, passed, detail });
    }
    Ok(out)
}

pub fn cmd_reproduce(o: &Opts, io: &mut Streams<'_>) -> Result<(), CliError> {
    let seed = match o.seed.as_deref() {
        Some(s) => Some(
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Usage(format!("--seed: `{s}` is not a nonnegative integer")))?,
        ),
        None => None,
    };
    let results = run_battery(o.only.as_deref(), seed)?;
    let mut text = String::new();
    for r in &results {
        let _ = writeln!(text, "{} {:<20} {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.detail);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    let _ = writeln!(text, "{passed}/{} items passed", results.len());
    io.out.write_all(text.as_bytes())?;
    if passed == results.len() {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{} item(s) failed", results.len() - passed)))
    }
}

fn one_plus_z() -> TaylorCoefficients64 {
    TaylorCoefficients64::from_real(&[1.0, 1.0]).expect("nonempty")
}

fn sqrt2_z() -> TaylorCoefficients64 {
    TaylorCoefficients64::from_real(&[0.0, 2f64.sqrt()]).expect("nonempty")
}

fn quartic(x: f64) -> f64 {
    9.0 - 24.0 * x + 18.0 * x * x - 6.0 * x.powi(3) + x.powi(4)
}

fn cubic(x: f64) -> f64 {
    18.0 - 36.0 * x + 21.0 * x * x - 4.0 * x.powi(3)
}

fn r_steps() -> Vec<f64> {
    (1..=19).map(|i| 0.05 * i as f64).collect()
}

fn default_x_grid() -> Vec<f64> {
    x_grid(&float_range("grid", crate::commands::DEFAULT_R_GRID).expect("valid default grid"))
}

fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> TaylorCoefficients64 {
    let degree = rng.gen_range(0..=max_degree);
    let coeffs = (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    TaylorCoefficients64::new(coeffs).expect("nonempty")
}

fn closed_form_1(_: &Ctx) -> Result<(bool, String), CliError> {
    let f = one_plus_z();
    let mut worst: f64 = 0.0;
    for r in r_steps() {
        let want = 2.0 * (3.0 - r.powi(4)) / (3.0 * (2.0 - r * r));
        worst = worst.max((series_mean_p2(&f, 1.0, r)? - want).abs());
    }
    Ok((worst <= 1e-10, format!("max abs error {worst:e} (tol 1e-10)")))
}

fn closed_form_2(_: &Ctx) -> Result<(bool, String), CliError> {
    let f = sqrt2_z();
    let mut worst: f64 = 0.0;
    for r in r_steps() {
        let r2 = r * r;
        let want = (3.0 * r2 - r2 * r2) / (3.0 - 3.0 * r2 + r2 * r2);
        worst = worst.max((series_mean_p2(&f, -4.0, r)? - want).abs());
    }
    Ok((worst <= 1e-10, format!("max abs error {worst:e} (tol 1e-10)")))
}

fn mean_examples(_: &Ctx) -> Result<(bool, String), CliError> {
    let a: f64 = monomial_mean(2.0, 0.0, 1, 0.5)?;
    let b: f64 = series_mean_p2(&one_plus_z(), 1.0, 0.8)?;
    let c: f64 = monomial_mean(2.0, -4.0, 1, 0.5)?;
    let wb = 2.0 * (3.0 - 0.8f64.powi(4)) / (3.0 * (2.0 - 0.64));
    let wc = (3.0 * 0.25 - 0.0625) / (2.0 * (3.0 - 0.75 + 0.0625));
    let err = (a - 0.125).abs().max((b - wb).abs()).max((c - wc).abs());
    Ok((err <= 1e-12, format!("M(z,0,0.5)={a} M(1+z,1,0.8)={b} M(z,-4,0.5)={c}; max error {err:e}")))
}

fn d_closed_forms(_: &Ctx) -> Result<(bool, String), CliError> {
    let (mut worst, mut fd_worst): (f64, f64) = (0.0, 0.0);
    for x in [0.1f64, 0.3, 0.5, 0.7, 0.9] {
        let g = 3.0 - x * x;
        let d = d_functional_closed(g, -2.0 * x, -2.0, x)?;
        worst = worst.max((d + 12.0 * x / (g * g)).abs());
        // the finite-difference form is x·D
        let fd = d_functional_fd(|y| Ok(3.0 - y * y), x, DEFAULT_FD_STEP)?;
        fd_worst = fd_worst.max((fd - x * d).abs());
        let g = 2.0 - x;
        let d = d_functional_closed(g, -1.0, 0.0, x)?;
        worst = worst.max((d + 2.0 / (g * g)).abs());
        let fd = d_functional_fd(|y| Ok(2.0 - y), x, DEFAULT_FD_STEP)?;
        fd_worst = fd_worst.max((fd - x * d).abs());
    }
    Ok((
        worst <= 1e-12 && fd_worst <= 1e-6,
        format!("max deviation from -12x/(3-x^2)^2 and -2/(2-x)^2 {worst:e}; finite difference {fd_worst:e}"),
    ))
}

fn quartic_endpoints(_: &Ctx) -> Result<(bool, String), CliError> {
    let (a, b) = (quartic(0.0), quartic(1.0));
    Ok((a == 9.0 && b == -2.0, format!("g(0)={a} g(1)={b}")))
}

fn cubic_endpoints(_: &Ctx) -> Result<(bool, String), CliError> {
    let (a, b) = (cubic(0.0), cubic(1.0));
    Ok((a == 18.0 && b == -1.0, format!("g(0)={a} g(1)={b}")))
}

fn example_profile(f: &TaylorCoefficients64, alpha: f64, g: fn(f64) -> f64) -> Result<(bool, String), CliError> {
    let opts = KernelOptions64::default();
    let grid = linspace(0.01, 0.99, 99);
    let prof = loglog_profile(|x| series_mean_p2_x(f, alpha, x, &opts), &grid, None, DEFAULT_FD_STEP)?;
    let oracle = find_sign_change(|x| Ok(g(x)), 0.0, 1.0, 1e-14)?;
    let root = prof.sign_changes.first().map_or(f64::NAN, |s| s.root);
    let ok = prof.classification == Classification::Neither && prof.sign_changes.len() == 1 && (root - oracle).abs() < 0.01;
    Ok((
        ok,
        format!(
            "classification {}, {} sign change(s), root {root:.6} vs endpoint-polynomial root {oracle:.6}",
            prof.classification,
            prof.sign_changes.len()
        ),
    ))
}

fn quartic_profile(_: &Ctx) -> Result<(bool, String), CliError> {
    example_profile(&one_plus_z(), 1.0, quartic)
}

fn cubic_profile(_: &Ctx) -> Result<(bool, String), CliError> {
    example_profile(&sqrt2_z(), -4.0, cubic)
}

fn monomial_profile(_: &Ctx) -> Result<(bool, String), CliError> {
    let rows = scan_records(&[2.0], &[-1.0], &[Subject::Monomial(1)], &default_x_grid(), None, 1e-10)?;
    let c = rows[0].classification;
    Ok((c == Classification::Convex, format!("z, alpha=-1: {c} (min d {:e})", rows[0].min_d)))
}

fn log_convex_range(ctx: &Ctx) -> Result<(bool, String), CliError> {
    let grid = linspace(0.01, 0.99, 200);
    let opts = KernelOptions64::default();
    let mut rng = ctx.rng(0x7e08);
    let mut worst = f64::INFINITY;
    for a in [-3.0, -2.5, -2.0, -1.5, -1.0, -0.5, 0.0] {
        for _ in 0..20 {
            let f = random_polynomial(&mut rng, 8);
            for &x in &grid {
                worst = worst.min(d_functional_fd(|y| series_mean_p2_x(&f, a, y, &opts), x, DEFAULT_FD_STEP)?);
            }
        }
    }
    Ok((worst >= -1e-6, format!("140 polynomials x 200 points, min second difference {worst:e} (floor -1e-6)")))
}

fn sharpness_above(_: &Ctx) -> Result<(bool, String), CliError> {
    let mut ok = true;
    let mut parts = Vec::new();
    for a in [0.5, 1.0, 2.0] {
        match find_negative_delta_near_one(1.0, a)? {
            Some(x) => parts.push(format!("alpha={a}: delta({x})={:.4e}", delta(1.0, a, x)?)),
            None => {
                ok = false;
                parts.push(format!("alpha={a}: no negative value"));
            }
        }
    }
    Ok((ok, parts.join("; ")))
}

fn sharpness_below(_: &Ctx) -> Result<(bool, String), CliError> {
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for a in [-3.5f64, -4.0, -5.0] {
        let ext = extrapolate_delta_x1(1.0, a)?;
        let want = limit_delta_x1(1.0, a)?;
        worst = worst.max((ext - want).abs());
        parts.push(format!("alpha={a}: {ext:.6} vs {want:.6}"));
    }
    let at4: f64 = limit_delta_x1(1.0, -4.0)?;
    let ok = worst <= 1e-3 && (at4 + 0.75).abs() < 1e-12;
    Ok((ok, format!("{}; max error {worst:e}", parts.join("; "))))
}

fn delta_zero(ctx: &Ctx) -> Result<(bool, String), CliError> {
    let mut rng = ctx.rng(0xde17a0);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let a: f64 = rng.gen_range(-6.0..4.0);
        let x = rng.gen_range(1e-3..0.999);
        worst = worst.max(delta(0.0, a, x)?.abs());
    }
    Ok((worst <= 1e-12, format!("max |delta(0, alpha, x)| over 100 draws {worst:e}")))
}

fn delta_lambda0(_: &Ctx) -> Result<(bool, String), CliError> {
    let mut worst = f64::INFINITY;
    for a in [-2.9, -2.5, -2.1] {
        for x in linspace(0.01, 0.99, 99) {
            worst = worst.min(delta(lambda0(a), a, x)?);
            worst = worst.min(delta3(a, x));
        }
    }
    Ok((worst > 0.0, format!("min of delta(lambda0, x) and delta3 {worst:e}")))
}

fn ddelta_dlambda(_: &Ctx) -> Result<(bool, String), CliError> {
    let a = delta_dlambda(1.0, -1.0, 0.5)?;
    let b = delta_dlambda(1.0, -2.2, 0.5)?;
    Ok((a > 0.0 && b > 0.0, format!("alpha=-1: {a:e}; alpha=-2.2: {b:e}")))
}

fn oracle_equivalence(ctx: &Ctx) -> Result<(bool, String), CliError> {
    let mut rng = ctx.rng(0x5eed_0008);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let f = random_polynomial(&mut rng, 8);
        let a = rng.gen_range(-4.0..2.0);
        let r = rng.gen_range(0.1..0.95);
        let s = series_mean_p2(&f, a, r)?;
        let q = quad_mean(&f, 2.0, a, r, 1e-9)?;
        worst = worst.max((q - s).abs() / s.abs());
    }
    Ok((worst <= 1e-6, format!("50 cases, max relative gap {worst:e} (tol 1e-6)")))
}

fn proof_battery(ctx: &Ctx) -> Result<(bool, String), CliError> {
    let grid = linspace(0.01, 0.99, 100);
    let mut rng = ctx.rng(0xd1a9);
    let (mut min_d1, mut min_d3, mut min_dl, mut min_mono) = (f64::INFINITY, f64::INFINITY, f64::INFINITY, f64::INFINITY);
    for _ in 0..100 {
        let l = 10.0 * (1.0 - rng.gen::<f64>());
        let a = rng.gen_range(-2.0..0.0);
        for &x in &grid {
            min_d1 = min_d1.min(d1(l, a, x)?);
            min_d3 = min_d3.min(delta1_family(l, a, x)?.d3);
            min_dl = min_dl.min(delta_dlambda(l, a, x)?);
            let (lo, hi) = (delta(0.5 * l, a, x)?, delta(l, a, x)?);
            min_mono = min_mono.min((hi - lo) / hi.abs().max(1.0));
        }
    }
    let mut rng = ctx.rng(0xd1a5);
    let (mut min_delta3, mut max_d2) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..50 {
        let a = rng.gen_range(-3.0..-2.0);
        let l = lambda0(a) + rng.gen_range(0.01..8.0);
        for &x in &grid {
            min_delta3 = min_delta3.min(delta3(a, x));
            max_d2 = max_d2.max(d2(l, a, x)?);
        }
    }
    let ok = min_d1 >= -1e-10 && min_d3 > 0.0 && min_dl > 1e-12 && min_mono >= -1e-12 && min_delta3 > 0.0 && max_d2 < 0.0;
    Ok((
        ok,
        format!(
            "min d1 {min_d1:e}, min delta1''' {min_d3:e}, min dDelta/dlambda {min_dl:e}, min monotone step {min_mono:e}, min delta3 {min_delta3:e}, max d2 {max_d2:e}"
        ),
    ))
}

fn aggregation(ctx: &Ctx) -> Result<(bool, String), CliError> {
    let opts = KernelOptions64::default();
    let mut rng = ctx.rng(0xa66e);
    let mut worst = f64::INFINITY;
    for _ in 0..20 {
        let f = random_polynomial(&mut rng, 10);
        let a = rng.gen_range(-4.0..2.0);
        for x in linspace(0.01, 0.99, 100) {
            let (lhs, rhs) = aggregation_sides(&f, a, x, &opts)?;
            worst = worst.min((lhs - rhs) / lhs.abs().max(1.0));
        }
    }
    Ok((worst >= -1e-9, format!("20 series, min D(H) - sum h_k D(h_k)/H {worst:e} (floor -1e-9)")))
}

fn e2_endpoints(_: &Ctx) -> Result<(bool, String), CliError> {
    let mut worst: f64 = 0.0;
    for (l, a) in [(1.0f64, -1.0f64), (3.5, -0.2), (0.4, -1.9)] {
        worst = worst.max((e2(l, a, 0.0) + (l + 1.0) * (l + 1.0)).abs());
        worst = worst.max((e2(l, a, 1.0) + a * (2.0 + a)).abs());
    }
    let ok = worst <= 1e-12 && e2(1.0, -1.0, 0.0) < 0.0 && e2(1.0, -1.0, 1.0) >= 0.0;
    Ok((ok, format!("e2(0)=-(l+1)^2, e2(1)=-a(2+a); max error {worst:e}")))
}

fn d1_d2_origin(_: &Ctx) -> Result<(bool, String), CliError> {
    let a: f64 = d1(1.0, -1.0, 1e-8)?;
    let b: f64 = d2(1.0, -1.0, 1e-8)?;
    let mut min_d1 = f64::INFINITY;
    for x in linspace(0.01, 0.99, 99) {
        min_d1 = min_d1.min(d1(1.0, -1.0, x)?);
    }
    let ok = a.abs() < 1e-12 && b.abs() < 1e-12 && min_d1 >= 0.0;
    Ok((ok, format!("d1(1e-8)={a:e} d2(1e-8)={b:e} min d1 on (0,1) {min_d1:e}")))
}

fn d2_negative(_: &Ctx) -> Result<(bool, String), CliError> {
    let mut max = f64::NEG_INFINITY;
    for x in linspace(0.01, 0.99, 99) {
        max = max.max(d2(1.0, -3.0, x)?);
    }
    Ok((max < 0.0, format!("lambda=1, alpha=-3: max d2 {max:e}")))
}

fn d2_sign_change(_: &Ctx) -> Result<(bool, String), CliError> {
    let xs = locate_x_star(1.0, -0.5)?;
    let grid = linspace(0.001, 0.999, 999);
    let signs: Vec<bool> = grid.iter().map(|&x| d2(1.0, -0.5, x).map(|v| v > 0.0)).collect::<Result<_, _>>()?;
    let changes = signs.windows(2).filter(|w| w[0] != w[1]).count();
    let ok = changes == 1 && xs > 0.0 && xs <= 1.0 && !signs[0];
    Ok((ok, format!("lambda=1, alpha=-0.5: x*={xs:.6}, {changes} sign change(s) on a 999-point grid")))
}

fn delta_small_item(_: &Ctx) -> Result<(bool, String), CliError> {
    let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&x| delta_small(1.0, -1.0, x).map(|v| v / x))
        .collect::<Result<_, _>>()?;
    let v = delta_small(1.0, -1.0, 0.05)?;
    let ok = ratios[0] > ratios[1] && ratios[1] > ratios[2] && ratios[2] >= 0.0 && v > 0.0;
    Ok((ok, format!("delta(x)/x at 1e-2,1e-3,1e-4: {:e}, {:e}, {:e}; delta(0.05)={v:e}", ratios[0], ratios[1], ratios[2])))
}

fn delta1_chain(_: &Ctx) -> Result<(bool, String), CliError> {
    let near = delta1_family(1.0f64, -1.0, 1e-6)?;
    let origin = near.value.abs().max(near.d1.abs()).max(near.d2.abs());
    let mut min3 = f64::INFINITY;
    for (l, a) in [(1.0, -1.0), (2.0, -1.9), (1.0, -2.5), (0.6, -2.9)] {
        for x in linspace(0.01, 0.99, 99) {
            min3 = min3.min(delta1_family(l, a, x)?.d3);
        }
    }
    let ok = origin < 1e-4 && min3 > 0.0;
    Ok((ok, format!("max |delta1, delta1', delta1''| at 1e-6: {origin:e}; min delta1''' {min3:e}")))
}

fn delta3_item(_: &Ctx) -> Result<(bool, String), CliError> {
    let at0: f64 = delta3(-2.5, 1e-12);
    let mut min = f64::INFINITY;
    for a in [-2.9, -2.5, -2.1] {
        for x in linspace(0.01, 0.99, 99) {
            min = min.min(delta3(a, x));
        }
    }
    let ok = at0.abs() < 1e-9 && min > 0.0;
    Ok((ok, format!("delta3(0+)={at0:e}; min on (0,1) {min:e}")))
}

fn split_limits(_: &Ctx) -> Result<(bool, String), CliError> {
    let (l, a) = (1.0f64, -4.0f64);
    let near = delta_split(l, a, 1.0 - 1e-6)?;
    let lim = limit_first_x1(l, a);
    let q = l * (a + 1.0) / (a + 2.0);
    let err = (near.first - lim).abs();
    let ok = err < 1e-3 && (lim - q * (1.0 - q)).abs() < 1e-15 && near.t1.abs() < 1e-3;
    Ok((ok, format!("Delta1 near 1 {:.6} vs limit {lim:.6}; T1 near 1 {:e}", near.first, near.t1)))
}

fn term5_limit(_: &Ctx) -> Result<(bool, String), CliError> {
    let (t5, _) = positive_alpha_split(1.0f64, 1.0, 0.999)?;
    Ok((t5.abs() < 1e-2, format!("lambda=1, alpha=1: |term5(0.999)| = {:e} (tol 1e-2)", t5.abs())))
}

fn verify_regimes(_: &Ctx) -> Result<(bool, String), CliError> {
    let grid = linspace(0.01, 0.99, 100);
    let a = verify_claims(1.0, -1.0, &grid, 1e-10)?;
    let fails_a = a.iter().filter(|r| r.status == ClaimStatus::Fail).count();
    let passes_a = a.iter().filter(|r| r.passed()).count();
    let b = verify_claims(1.0, -2.5, &grid, 1e-10)?;
    let find = |rs: &[logconvex::DiagnosticReport64], id: &str| rs.iter().find(|r| r.claim_id == id).map(|r| r.status);
    let d3 = find(&b, "prop5.delta3_positive");
    let l0 = find(&b, "prop5.delta_lambda0_positive");
    let c = verify_claims(0.0, -1.0, &default_x_grid(), 1e-10)?;
    let dz = c.iter().find(|r| r.claim_id == "delta_zero");
    let dz_ok = dz.is_some_and(|r| r.passed() && r.worst_violation.abs() <= 1e-12);
    let ok = fails_a == 0 && passes_a > 0 && d3 == Some(ClaimStatus::Pass) && l0 == Some(ClaimStatus::Pass) && dz_ok;
    Ok((
        ok,
        format!(
            "(1,-1): {passes_a} pass, {fails_a} fail; (1,-2.5): delta3 {}, lambda0 {}; (0,-1): delta_zero {}",
            d3.map_or("missing", |s| s.as_str()),
            l0.map_or("missing", |s| s.as_str()),
            dz.map_or("missing", |r| r.status.as_str())
        ),
    ))
}

fn scan_convex_range(_: &Ctx) -> Result<(bool, String), CliError> {
    let alphas: Vec<f64> = (0..=6).map(|i| -3.0 + 0.5 * i as f64).collect();
    let subjects: Vec<Subject> = (0..=8).map(Subject::Monomial).collect();
    let rows = scan_records(&[2.0], &alphas, &subjects, &default_x_grid(), None, 1e-10)?;
    let convex = rows.iter().filter(|r| r.classification == Classification::Convex).count();
    Ok((convex == rows.len(), format!("{convex}/{} rows convex", rows.len())))
}

fn scan_above(_: &Ctx) -> Result<(bool, String), CliError> {
    let rows = scan_records(&[2.0], &[0.5, 1.0, 2.0], &[Subject::Monomial(1)], &default_x_grid(), None, 1e-10)?;
    let convex = rows.iter().filter(|r| r.classification == Classification::Convex).count();
    let classes: Vec<&str> = rows.iter().map(|r| r.classification.as_str()).collect();
    Ok((convex == 0, format!("alpha 0.5, 1, 2: {}", classes.join(", "))))
}

fn scan_below(_: &Ctx) -> Result<(bool, String), CliError> {
    let rows = scan_records(&[2.0], &[-4.0], &[Subject::Monomial(1)], &default_x_grid(), None, 1e-10)?;
    let r = &rows[0];
    Ok((r.classification != Classification::Convex, format!("alpha -4: {} (min d {:e})", r.classification, r.min_d)))
}

fn scan_determinism(_: &Ctx) -> Result<(bool, String), CliError> {
    let run = || -> Result<String, CliError> {
        let xs = default_x_grid();
        let mut rows = scan_records(&[2.0, 3.0], &[-4.0, -1.0, 1.0], &[Subject::Monomial(1), Subject::Monomial(3)], &xs, None, 1e-10)?;
        let series = Subject::Series { id: "one_plus_z".into(), coeffs: one_plus_z() };
        rows.extend(scan_records(&[2.0], &[-4.0, 1.0], &[series], &xs, None, 1e-10)?);
        Ok(scan_csv(&rows))
    };
    let (a, b) = (run()?, run()?);
    Ok((a == b, format!("two runs, {} bytes each, identical: {}", a.len(), a == b)))
}
