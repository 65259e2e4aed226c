//! Logarithmic convexity in `log x`.
//!
//! A positive `g` has `log g` convex in `log x` iff
//!
//! ```text
//! D(g)(x) = g′/g + x g″/g − x (g′/g)²  ≥ 0,
//! ```
//!
//! and `d²/dt² log g(e^t) = x · D(g)(x)` at `t = log x`. Since
//! `x ↦ x²` preserves convexity in the logarithmic variable, all analysis here
//! runs in `x = r²`.
//!
//! For the monomial means `f_λ/f_0` the quantity of interest is
//! `Δ(λ, x) = D(f_λ)(x) − D(f_0)(x)`, assembled from the closed-form `h′`,
//! `h″` and evaluated integrals rather than by differencing.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernels::{self, check_x, derivatives_unchecked, KernelOptions, KernelParams};
use crate::means::TaylorCoefficients;
use crate::scalar::Scalar;

/// Default finite-difference step in `t = log x`.
pub const DEFAULT_FD_STEP: f64 = 1e-4;
/// Relative width of the default classification band.
pub const DEFAULT_BAND_SCALE: f64 = 1e-7;
/// Nodes `x = 1 − 10^{−m}` used to extrapolate to `x = 1`.
pub const BOUNDARY_EXPONENTS: [i32; 3] = [3, 4, 5];
/// Closest approach to `x = 1` used by witness searches.
pub const BOUNDARY_CAP: f64 = 1.0 - 1e-6;

/// `D(g)(x)` from `g`, `g′`, `g″`.
pub fn d_functional_closed<T: Scalar>(g: T, g1: T, g2: T, x: T) -> Result<T> {
    if !(g > T::zero()) {
        return Err(Error::domain("g", g.as_f64(), "(0, inf)"));
    }
    let q = g1 / g;
    Ok(q + x * g2 / g - x * q * q)
}

/// Centered second difference of `log g(e^t)` at `t = log x`, with one level
/// of Richardson extrapolation (steps `step` and `step/2`).
///
/// Returns `d²/dt² log g`, which equals `x · D(g)(x)`.
pub fn d_functional_fd<T, G>(g: G, x: T, step: T) -> Result<T>
where
    T: Scalar,
    G: Fn(T) -> Result<T>,
{
    let coarse = second_difference(&g, x, step)?;
    let fine = second_difference(&g, x, step * T::lit(0.5))?;
    Ok((T::lit(4.0) * fine - coarse) / T::lit(3.0))
}

/// Plain centered second difference of `log g(e^t)`, no extrapolation.
pub fn second_difference<T, G>(g: &G, x: T, step: T) -> Result<T>
where
    T: Scalar,
    G: Fn(T) -> Result<T>,
{
    if !(step > T::zero()) {
        return Err(Error::domain("step", step.as_f64(), "(0, inf)"));
    }
    let up = x * step.exp();
    let down = x * (-step).exp();
    if !(down > T::zero()) || !(up < T::one()) {
        return Err(Error::domain("x", x.as_f64(), "(0, 1) with finite-difference nodes inside"));
    }
    let positive = |y: T| -> Result<T> {
        let v = g(y)?;
        if !(v > T::zero()) {
            return Err(Error::domain("g(x)", v.as_f64(), "(0, inf)"));
        }
        Ok(v)
    };
    let (gu, gc, gd) = (positive(up)?, positive(x)?, positive(down)?);
    // spacings from the rounded nodes, so node rounding does not enter as
    // an O(eps/step²) error; differences of nearby values are exact
    let hu = ((up - x) / x).ln_1p();
    let hd = ((down - x) / x).ln_1p();
    let lu = ((gu - gc) / gc).ln_1p();
    let ld = ((gd - gc) / gc).ln_1p();
    Ok((lu / hu - ld / hd) * T::lit(2.0) / (hu - hd))
}

/// `D(f_λ)(x)` from the closed-form derivatives and the evaluated integral.
pub fn d_kernel<T: Scalar>(params: KernelParams<T>, x: T, opts: &KernelOptions<T>) -> Result<T> {
    let h = kernels::f_lambda(params, x, opts)?;
    let (h1, h2, _) = derivatives_unchecked(params, x);
    d_functional_closed(h, h1, h2, x)
}

/// `Δ(λ, x) = D(f_λ)(x) − D(f_0)(x)`. Exactly zero at `λ = 0`.
pub fn delta<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<T> {
    delta_with(lambda, alpha, x, &KernelOptions::default())
}

pub fn delta_with<T: Scalar>(lambda: T, alpha: T, x: T, opts: &KernelOptions<T>) -> Result<T> {
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    Ok(d_kernel(params, x, opts)? - d_kernel(params.base(), x, opts)?)
}

/// `∂Δ/∂λ = h′/h + h⁻³ (h log x − ∂h/∂λ)(h h′ + x h h″ − 2x h′²)`.
pub fn delta_dlambda<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<T> {
    delta_dlambda_with(lambda, alpha, x, &KernelOptions::default())
}

pub fn delta_dlambda_with<T: Scalar>(lambda: T, alpha: T, x: T, opts: &KernelOptions<T>) -> Result<T> {
    if !(lambda > T::zero()) {
        return Err(Error::domain("lambda", lambda.as_f64(), "(0, inf)"));
    }
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let h = kernels::f_lambda(params, x, opts)?;
    let dh = kernels::dh_dlambda(params, x, opts)?;
    let (h1, h2, _) = derivatives_unchecked(params, x);
    let q1 = h1 / h;
    let q2 = h2 / h;
    let d1 = h * x.ln() - dh;
    let two = T::lit(2.0);
    Ok(q1 + d1 / h * (q1 + x * q2 - two * x * q1 * q1))
}

/// [`delta_dlambda`] cross-checked against a centered difference of
/// [`delta`] in `λ` (step `1e−5`, shortened near `λ = 0`). Fails with
/// [`Error::Consistency`] when the two differ by more than `1e−4` relative,
/// above a noise floor proportional to the size of the `D` terms.
pub fn delta_dlambda_validated<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<T> {
    let opts = KernelOptions::default();
    let analytic = delta_dlambda_with(lambda, alpha, x, &opts)?;
    let step = T::lit(1e-5).min(lambda * T::lit(0.5));
    let plus = delta_with(lambda + step, alpha, x, &opts)?;
    let minus = delta_with(lambda - step, alpha, x, &opts)?;
    let fd = (plus - minus) / (step + step);

    let params = KernelParams::new(lambda, alpha)?;
    let h = kernels::f_lambda(params, x, &opts)?;
    let (h1, h2, _) = derivatives_unchecked(params, x);
    let scale = (h1 / h).abs() + (x * h2 / h).abs() + x * (h1 / h) * (h1 / h);
    let floor = T::lit(1e-16) * scale * T::lit(1e3) / step;
    let allowed = T::lit(1e-4) * analytic.abs().max(fd.abs()) + floor;
    if (analytic - fd).abs() > allowed {
        return Err(Error::Consistency(format!(
            "d delta / d lambda at (lambda={lambda}, alpha={alpha}, x={x}): formula {analytic} vs difference {fd}"
        )));
    }
    Ok(analytic)
}

/// `lim_{x→1} Δ(λ, x) = λ(α+1)(λ+2+α) / ((α+2)²(α+3))`, valid for `α < −3`.
pub fn limit_delta_x1<T: Scalar>(lambda: T, alpha: T) -> Result<T> {
    if !(alpha < T::lit(-3.0)) {
        return Err(Error::domain("alpha", alpha.as_f64(), "(-inf, -3)"));
    }
    if !(lambda >= T::zero()) {
        return Err(Error::domain("lambda", lambda.as_f64(), "[0, inf)"));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let a2 = alpha + two;
    Ok(lambda * (alpha + one) * (lambda + two + alpha) / (a2 * a2 * (alpha + T::lit(3.0))))
}

/// Extrapolates `func(1 − ε)` to `ε = 0` from `ε = 10⁻³, 10⁻⁴, 10⁻⁵`.
///
/// The fit basis is `{1, ε, ε²}` unless `correction` names a leading
/// non-integer power `γ`, in which case it is `{1, ε^γ, ε}`.
pub fn extrapolate_x1<T, F>(func: F, correction: Option<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    let eps: Vec<T> = BOUNDARY_EXPONENTS.iter().map(|&m| T::lit(10f64.powi(-m))).collect();
    let mut vals = Vec::with_capacity(3);
    for &e in &eps {
        vals.push(func(T::one() - e)?);
    }
    let near_int = |g: T| (g - g.round()).abs() < T::lit(1e-9) && g.round() >= T::one() && g.round() <= T::lit(2.0);
    let powers: [T; 3] = match correction {
        Some(g) if g > T::zero() && !near_int(g) => [T::zero(), g, T::one()],
        _ => [T::zero(), T::one(), T::lit(2.0)],
    };
    let mut m = [[T::zero(); 4]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = if powers[j] == T::zero() { T::one() } else { eps[i].powf(powers[j]) };
        }
        m[i][3] = vals[i];
    }
    Ok(solve3(m)[0])
}

/// Gaussian elimination with partial pivoting on an augmented 3×4 system.
fn solve3<T: Scalar>(mut m: [[T; 4]; 3]) -> [T; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        m.swap(col, pivot);
        let lead = m[col];
        for row in m.iter_mut().skip(col + 1) {
            let factor = row[col] / lead[col];
            for (v, &l) in row.iter_mut().zip(lead.iter()).skip(col) {
                *v = *v - factor * l;
            }
        }
    }
    let mut out = [T::zero(); 3];
    for row in (0..3).rev() {
        let mut acc = m[row][3];
        for k in (row + 1)..3 {
            acc = acc - m[row][k] * out[k];
        }
        out[row] = acc / m[row][row];
    }
    out
}

/// Extrapolated `lim_{x→1} Δ(λ, x)`. For `α < −3` the leading correction
/// `(1−x)^{−α−3}` is fitted explicitly.
pub fn extrapolate_delta_x1<T: Scalar>(lambda: T, alpha: T) -> Result<T> {
    let correction = if alpha < T::lit(-3.0) {
        Some(-alpha - T::lit(3.0))
    } else {
        None
    };
    extrapolate_x1(|x| delta(lambda, alpha, x), correction)
}

/// Bisection for a sign change of `func` on `[lo, hi]`; the returned point is
/// the midpoint of a final bracket of width at most `tol`.
pub fn find_sign_change<T, F>(func: F, lo: T, hi: T, tol: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = func(a)?;
    let fb = func(b)?;
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if !(fa.signum() != fb.signum()) || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket {
            lo: a.as_f64(),
            hi: b.as_f64(),
            f_lo: fa.as_f64(),
            f_hi: fb.as_f64(),
        });
    }
    let tol = tol.max(T::epsilon() * a.abs().max(b.abs()));
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = a + (b - a) * T::lit(0.5);
        let fm = func(mid)?;
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(a + (b - a) * T::lit(0.5))
}

/// Verdict on a sampled `log`-`log` profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    Convex,
    Concave,
    Neither,
    Indeterminate,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Convex => "convex",
            Classification::Concave => "concave",
            Classification::Neither => "neither",
            Classification::Indeterminate => "indeterminate",
        }
    }

    /// Classifies values against a band around zero.
    ///
    /// Values within `band` count as zero; a profile that is flat to within
    /// the band is convex (log-linear functions are). `Indeterminate` is
    /// reserved for empty or non-finite input.
    pub fn from_values<T: Scalar>(values: &[T], band: T) -> Self {
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) || !band.is_finite() {
            return Classification::Indeterminate;
        }
        let pos = values.iter().any(|&v| v > band);
        let neg = values.iter().any(|&v| v < -band);
        match (pos, neg) {
            (_, false) => Classification::Convex,
            (false, true) => Classification::Concave,
            (true, true) => Classification::Neither,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Classification {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "convex" => Ok(Classification::Convex),
            "concave" => Ok(Classification::Concave),
            "neither" => Ok(Classification::Neither),
            "indeterminate" => Ok(Classification::Indeterminate),
            other => Err(format!("unknown classification `{other}`")),
        }
    }
}

/// A located sign change of the profile between two grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignChange<T> {
    pub lo: T,
    pub hi: T,
    pub root: T,
    /// True when the profile goes from negative to positive.
    pub rising: bool,
}

/// Sampled `d²/dt² log g` over a grid, with its verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityProfile<T> {
    pub grid: Vec<T>,
    pub dvals: Vec<T>,
    pub band: T,
    pub classification: Classification,
    pub sign_changes: Vec<SignChange<T>>,
}

impl<T: Scalar> ConvexityProfile<T> {
    pub fn min_d(&self) -> T {
        self.dvals.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_d(&self) -> T {
        self.dvals.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// Grid point of the smallest value.
    pub fn argmin(&self) -> Option<T> {
        self.grid
            .iter()
            .zip(&self.dvals)
            .min_by(|a, b| a.1.partial_cmp(b.1).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(x, _)| *x)
    }

    /// Grid point witnessing non-convexity, if any value falls below the band.
    pub fn witness(&self) -> Option<T> {
        if self.min_d() < -self.band {
            self.argmin()
        } else {
            None
        }
    }
}

/// `1e−7 · max(1, median |d|)`.
pub fn default_band<T: Scalar>(dvals: &[T]) -> T {
    let mut abs: Vec<T> = dvals.iter().map(|v| v.abs()).filter(|v| v.is_finite()).collect();
    if abs.is_empty() {
        return T::lit(DEFAULT_BAND_SCALE);
    }
    abs.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    let n = abs.len();
    let median = if n % 2 == 1 {
        abs[n / 2]
    } else {
        (abs[n / 2 - 1] + abs[n / 2]) * T::lit(0.5)
    };
    T::lit(DEFAULT_BAND_SCALE) * T::one().max(median)
}

/// Rounding noise of [`d_functional_fd`] at `step`: `16·eps/step²`.
///
/// Mean values carry a few ulps of rounding each, which the second
/// difference amplifies by `1/step²`; at the default step this is about
/// `3.6e−7`.
pub fn fd_noise_floor<T: Scalar>(step: T) -> T {
    T::lit(16.0) * T::epsilon() / (step * step)
}

/// Increasing grid `lo, lo+step, …` up to `hi` (inclusive within rounding).
pub fn linear_grid<T: Scalar>(lo: T, hi: T, step: T) -> Vec<T> {
    let n = ((hi - lo) / step + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    (0..=n).map(|i| lo + step * T::from_usize_lossy(i)).collect()
}

/// `n` equally spaced points from `lo` to `hi` inclusive.
pub fn linspace<T: Scalar>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let d = (hi - lo) / T::from_usize_lossy(n - 1);
            (0..n).map(|i| lo + d * T::from_usize_lossy(i)).collect()
        }
    }
}

/// Samples `d²/dt² log mean(e^t)` on `grid`, classifies the profile and
/// brackets every sign change that clears the band.
///
/// `band = None` selects [`default_band`], raised to [`fd_noise_floor`] when
/// that is larger. Sign changes are refined by bisection on the same
/// finite-difference quantity.
pub fn loglog_profile<T, G>(mean: G, grid: &[T], band: Option<T>, step: T) -> Result<ConvexityProfile<T>>
where
    T: Scalar,
    G: Fn(T) -> Result<T>,
{
    for w in grid.windows(2) {
        if !(w[0] < w[1]) {
            return Err(Error::domain("grid", w[1].as_f64(), "strictly increasing sequences"));
        }
    }
    if let Some(&x) = grid.iter().find(|&&x| !(x > T::zero() && x < T::one())) {
        return Err(Error::domain("grid point", x.as_f64(), "(0, 1)"));
    }
    let dvals = grid
        .iter()
        .map(|&x| d_functional_fd(&mean, x, step))
        .collect::<Result<Vec<T>>>()?;
    let band = match band {
        Some(b) if b >= T::zero() => b,
        Some(b) => return Err(Error::domain("band", b.as_f64(), "[0, inf)")),
        None => default_band(&dvals).max(fd_noise_floor(step)),
    };
    let classification = Classification::from_values(&dvals, band);

    let mut sign_changes = Vec::new();
    let mut last: Option<(T, bool)> = None;
    for (&x, &d) in grid.iter().zip(&dvals) {
        if d.abs() <= band {
            continue;
        }
        let positive = d > T::zero();
        if let Some((x_prev, prev_positive)) = last {
            if prev_positive != positive {
                let root = find_sign_change(|y| d_functional_fd(&mean, y, step), x_prev, x, T::lit(1e-10))?;
                sign_changes.push(SignChange {
                    lo: x_prev,
                    hi: x,
                    root,
                    rising: positive,
                });
            }
        }
        last = Some((x, positive));
    }

    Ok(ConvexityProfile {
        grid: grid.to_vec(),
        dvals,
        band,
        classification,
        sign_changes,
    })
}

/// Both sides of the series aggregation inequality at `x`.
///
/// With `H = Σ h_k`, `h_k = |a_k|² M_{2,α}(z^k, ·)`, returns
/// `(D(H)(x), Σ h_k D(h_k)(x) / H(x))`; the first is never smaller than the
/// second. Both are computed from closed-form derivatives.
pub fn aggregation_sides<T: Scalar>(f: &TaylorCoefficients<T>, alpha: T, x: T, opts: &KernelOptions<T>) -> Result<(T, T)> {
    check_x(x)?;
    let base = KernelParams::new(T::zero(), alpha)?;
    let d0 = d_kernel(base, x, opts)?;
    let (mut n, mut n1, mut n2, mut weighted) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (k, a) in f.coeffs().iter().enumerate() {
        let w = a.norm_sqr();
        if w == T::zero() {
            continue;
        }
        let params = KernelParams::new(T::from_usize_lossy(k), alpha)?;
        let fk = kernels::f_lambda(params, x, opts)?;
        let (h1, h2, _) = derivatives_unchecked(params, x);
        let dk = d_functional_closed(fk, h1, h2, x)?;
        n = n + w * fk;
        n1 = n1 + w * h1;
        n2 = n2 + w * h2;
        weighted = weighted + w * fk * (dk - d0);
    }
    let lhs = d_functional_closed(n, n1, n2, x)? - d0;
    Ok((lhs, weighted / n))
}

/// `D(M_{2,α}(f, ·))(x)` in closed form.
pub fn series_mean_d_functional<T: Scalar>(f: &TaylorCoefficients<T>, alpha: T, x: T, opts: &KernelOptions<T>) -> Result<T> {
    Ok(aggregation_sides(f, alpha, x, opts)?.0)
}
