//! Auxiliary functions behind the monomial convexity argument, and a batch
//! checker for the sign and limit claims made about them.
//!
//! Notation follows [`crate::convexity`]: `h = f_λ(x)`, primes are
//! `x`-derivatives, `f_0` is the `λ = 0` kernel.

use std::fmt;

use crate::convexity::{self, extrapolate_x1, find_sign_change, linspace, BOUNDARY_CAP};
use crate::error::{Error, Result};
use crate::kernels::{self, check_x, derivatives_unchecked, lambda0, KernelOptions, KernelParams};
use crate::scalar::Scalar;

/// `e₂(x) = −(λ+1)² + 2(λ²+2λ+1+λα)x − (λ+1+α)²x²`.
pub fn e2<T: Scalar>(lambda: T, alpha: T, x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let l1 = lambda + one;
    let c = lambda + one + alpha;
    -(l1 * l1) + two * (lambda * lambda + two * lambda + one + lambda * alpha) * x - c * c * x * x
}

/// `e₂′(x) = 2(λ²+2λ+1+λα) − 2(λ+1+α)²x`.
pub fn e2_prime<T: Scalar>(lambda: T, alpha: T, x: T) -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let c = lambda + one + alpha;
    two * (lambda * lambda + two * lambda + one + lambda * alpha) - two * c * c * x
}

fn positive_lambda<T: Scalar>(lambda: T) -> Result<()> {
    if lambda > T::zero() {
        Ok(())
    } else {
        Err(Error::domain("lambda", lambda.as_f64(), "(0, inf)"))
    }
}

/// `d₁(x) = h log x − ∂h/∂λ`; nonnegative on `(0, 1)`.
pub fn d1<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<T> {
    positive_lambda(lambda)?;
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let opts = KernelOptions::default();
    let h = kernels::f_lambda(params, x, &opts)?;
    let dh = kernels::dh_dlambda(params, x, &opts)?;
    Ok(h * x.ln() - dh)
}

fn d2_denominator<T: Scalar>(lambda: T, alpha: T, x: T) -> T {
    lambda + T::one() - (lambda + T::one() + alpha) * x
}

/// `d₂(x) = h − 2x^{λ+1}(1−x)^{α+1} / (λ+1−(λ+1+α)x)`.
pub fn d2<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<T> {
    positive_lambda(lambda)?;
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let den = d2_denominator(lambda, alpha, x);
    if !(den > T::zero()) {
        return Err(Error::Regime("lambda + 1 - (lambda + 1 + alpha) x > 0"));
    }
    let h = kernels::f_lambda(params, x, &KernelOptions::default())?;
    let one = T::one();
    Ok(h - T::lit(2.0) * x.powf(lambda + one) * (one - x).powf(alpha + one) / den)
}

/// Sign change of `d₂` on `(0, 1)`: the point where it turns positive, or
/// `1` when it stays negative up to [`BOUNDARY_CAP`].
pub fn locate_x_star<T: Scalar>(lambda: T, alpha: T) -> Result<T> {
    let scan = linspace(T::lit(1e-3), T::lit(BOUNDARY_CAP), 400);
    let mut prev = scan[0];
    for &x in &scan {
        if d2(lambda, alpha, x)? > T::zero() {
            if x == scan[0] {
                return Ok(x);
            }
            return find_sign_change(|y| d2(lambda, alpha, y), prev, x, T::lit(1e-12));
        }
        prev = x;
    }
    Ok(T::one())
}

/// `δ(x) = −h²h′/(hh′+xhh″−2xh′²) − h log x + ∂h/∂λ`, defined where the
/// denominator is negative (i.e. where `d₂ < 0`).
pub fn delta_small<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<T> {
    positive_lambda(lambda)?;
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let opts = KernelOptions::default();
    let h = kernels::f_lambda(params, x, &opts)?;
    let dh = kernels::dh_dlambda(params, x, &opts)?;
    let (h1, h2, _) = derivatives_unchecked(params, x);
    let den = h * h1 + x * h * h2 - T::lit(2.0) * x * h1 * h1;
    if !(den < T::zero()) {
        return Err(Error::Regime("h h' + x h h'' - 2x h'^2 < 0"));
    }
    Ok(-h * h * h1 / den - h * x.ln() + dh)
}

/// `δ₁` and its first three derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Delta1<T> {
    pub value: T,
    pub d1: T,
    pub d2: T,
    pub d3: T,
}

/// `δ₁ = P(x) h + x(1−x)(λ+1−(λ+1+α)x) h′` with
/// `P(x) = −(λ+1)² + (2λ²+4λ+2+2λα+α)x − (λ+1+α)²x²`, plus
///
/// ```text
/// δ₁′  = [2λ²+4λ+2+2λα+α − 2(λ+1+α)²x] h − 2(λ+1+α) x^{λ+1}(1−x)^{α+1}
/// δ₁″  = −2(λ+1+α)² h + [−α + 2(λ+1+α)x] x^λ (1−x)^α
/// δ₁‴ = −α(λ + (λ+2+α)x) x^{λ−1}(1−x)^{α−1}
/// ```
pub fn delta1_family<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<Delta1<T>> {
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let h = kernels::f_lambda(params, x, &KernelOptions::default())?;
    let (h1, _, _) = derivatives_unchecked(params, x);
    let one = T::one();
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    let c = lambda + one + alpha;
    let l1 = lambda + one;
    let lin = two * lambda * lambda + four * lambda + two + two * lambda * alpha + alpha;
    let y = one - x;

    let value = (-(l1 * l1) + lin * x - c * c * x * x) * h + x * y * (l1 - c * x) * h1;
    let first = (lin - two * c * c * x) * h - two * c * x * y * h1;
    let second = -two * c * c * h + (-alpha + two * c * x) * h1;
    let third = -alpha * (lambda + (lambda + two + alpha) * x) * x.powf(lambda - one) * y.powf(alpha - one);
    Ok(Delta1 {
        value,
        d1: first,
        d2: second,
        d3: third,
    })
}

/// `δ₃(x) = 1 − (1+x+αx)(1−x)^{α+1}`.
pub fn delta3<T: Scalar>(alpha: T, x: T) -> T {
    let one = T::one();
    one - (one + x + alpha * x) * (one - x).powf(alpha + one)
}

/// `δ₃′(x) = (α+1)(α+2) x (1−x)^α`.
pub fn delta3_prime<T: Scalar>(alpha: T, x: T) -> T {
    let one = T::one();
    (alpha + one) * (alpha + T::lit(2.0)) * x * (one - x).powf(alpha)
}

/// Decomposition of `Δ` used for `α < −3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaSplit<T> {
    /// `Δ₁ = u − x u²` with `u = h′/h − f₀′/f₀`.
    pub first: T,
    /// `Δ₂ = h″/h − 2h′f₀′/(hf₀) − f₀″/f₀ + 2(f₀′/f₀)²`.
    pub second: T,
    pub t1: T,
    pub t2: T,
    /// `(1−x)^{3(α+1)} / ((α+1) h f₀²)`, so that `Δ₂ = prefactor·(T₁+T₂)`.
    pub prefactor: T,
}

pub fn delta_split<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<DeltaSplit<T>> {
    if !(alpha < T::lit(-3.0)) {
        return Err(Error::domain("alpha", alpha.as_f64(), "(-inf, -3)"));
    }
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let opts = KernelOptions::default();
    let h = kernels::f_lambda(params, x, &opts)?;
    let f0 = kernels::f_lambda(params.base(), x, &opts)?;
    let (h1, h2, _) = derivatives_unchecked(params, x);
    let (g1, g2, _) = derivatives_unchecked(params.base(), x);
    let one = T::one();
    let two = T::lit(2.0);
    let y = one - x;

    let u = h1 / h - g1 / f0;
    let first = u - x * u * u;
    let second = h2 / h - two * h1 * g1 / (h * f0) - g2 / f0 + two * (g1 / f0) * (g1 / f0);

    let a1 = alpha + one;
    let a2 = alpha + two;
    let t1 = lambda * x.powf(lambda - one) / y.powf(a2) * f0 / y.powf(a1) + alpha / y.powf(a2) * (h - x.powf(lambda) * f0) / y.powf(a2);
    let t2 = (a2 * h - (lambda - lambda * x + alpha * x + two * x) * x.powf(lambda - one) * f0) / y.powf(alpha + T::lit(3.0));
    let prefactor = y.powf(T::lit(3.0) * a1) / (a1 * h * f0 * f0);
    Ok(DeltaSplit {
        first,
        second,
        t1,
        t2,
        prefactor,
    })
}

/// `lim_{x→1} Δ₁ = λ(α+1)/(α+2) · (1 − λ(α+1)/(α+2))`.
pub fn limit_first_x1<T: Scalar>(lambda: T, alpha: T) -> T {
    let q = lambda * (alpha + T::one()) / (alpha + T::lit(2.0));
    q * (T::one() - q)
}

/// `lim_{x→1} T₂ = −λ(λ−1) / ((α+1)(α+3))`.
pub fn limit_t2_x1<T: Scalar>(lambda: T, alpha: T) -> T {
    -lambda * (lambda - T::one()) / ((alpha + T::one()) * (alpha + T::lit(3.0)))
}

/// The two terms whose sum, times `(1−x)^{α−1}`, is `Δ` when `α > 0`.
pub fn positive_alpha_split<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<(T, T)> {
    if !(alpha > T::zero()) {
        return Err(Error::domain("alpha", alpha.as_f64(), "(0, inf)"));
    }
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let opts = KernelOptions::default();
    let h = kernels::f_lambda(params, x, &opts)?;
    let f0 = kernels::f_lambda(params.base(), x, &opts)?;
    let one = T::one();
    let y = one - x;
    let xl = x.powf(lambda);
    let term5 = y * (xl / h - one / f0) - x * y.powf(alpha + one) * (xl * xl / (h * h) - one / (f0 * f0));
    let bracket = positive_alpha_bracket_with(lambda, alpha, x, h, f0);
    let term6 = x / (h * f0) * bracket;
    Ok((term5, term6))
}

fn positive_alpha_bracket_with<T: Scalar>(lambda: T, alpha: T, x: T, h: T, f0: T) -> T {
    (lambda - lambda * x - alpha * x) * x.powf(lambda - T::one()) * f0 + alpha * h
}

/// `(λ−λx−αx)x^{λ−1}f₀ + αh`, which tends to `−α∫₀¹(1−t^λ)(1−t)^α dt < 0`.
pub fn positive_alpha_bracket<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<T> {
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let opts = KernelOptions::default();
    let h = kernels::f_lambda(params, x, &opts)?;
    let f0 = kernels::f_lambda(params.base(), x, &opts)?;
    Ok(positive_alpha_bracket_with(lambda, alpha, x, h, f0))
}

/// `((1−x)^{α+1}/h, (1−x)^{α+1}/f₀)`; both tend to `−(α+1)` when `α < −3`.
pub fn boundary_ratios<T: Scalar>(lambda: T, alpha: T, x: T) -> Result<(T, T)> {
    let params = KernelParams::new(lambda, alpha)?;
    check_x(x)?;
    let opts = KernelOptions::default();
    let h = kernels::f_lambda(params, x, &opts)?;
    let f0 = kernels::f_lambda(params.base(), x, &opts)?;
    let w = (T::one() - x).powf(alpha + T::one());
    Ok((w / h, w / f0))
}

/// Outcome of one claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimStatus {
    Pass,
    Fail,
    Skip,
}

impl ClaimStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClaimStatus::Pass => "pass",
            ClaimStatus::Fail => "fail",
            ClaimStatus::Skip => "skip",
        }
    }
}

impl fmt::Display for ClaimStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Result of checking one claim over a grid.
///
/// `worst_violation` is the smallest margin by which the claim held over the
/// grid: for `v ≥ 0` claims the minimum of `v`, for `v ≤ 0` claims the
/// minimum of `−v`, for limits `limit_tol − |error|`, and for existence claims
/// the depth of the best witness. The claim passes iff it is `≥ −tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticReport<T> {
    pub claim_id: &'static str,
    pub lambda: T,
    pub alpha: T,
    pub grid: Vec<T>,
    pub status: ClaimStatus,
    pub worst_violation: T,
    pub witness_x: Option<T>,
}

impl<T: Scalar> DiagnosticReport<T> {
    pub fn passed(&self) -> bool {
        self.status == ClaimStatus::Pass
    }

    pub fn skipped(&self) -> bool {
        self.status == ClaimStatus::Skip
    }
}

/// Every claim id [`verify_claims`] reports on, in report order.
pub const CLAIM_IDS: [&str; 20] = [
    "delta_zero",
    "prop4.d1_nonneg",
    "prop4.d2_sign_structure",
    "prop4.ddelta_dlambda_positive",
    "prop4.delta1_chain_positive",
    "prop4.delta_nonneg",
    "prop4.delta_small_positive",
    "prop4.e2_endpoints",
    "prop4.e2_increasing",
    "prop5.d2_negative",
    "prop5.ddelta_dlambda_positive",
    "prop5.delta1_third_positive",
    "prop5.delta3_positive",
    "prop5.delta_lambda0_positive",
    "prop5.delta_nonneg",
    "prop5.e2_negative",
    "prop6.boundary_ratio_limit",
    "prop6.delta_limit",
    "prop6.negative_near_one",
    "prop6.split_identity",
];

/// Tolerance on extrapolated boundary limits.
pub const LIMIT_TOL: f64 = 1e-3;

struct Margin<T> {
    value: T,
    at: Option<T>,
}

impl<T: Scalar> Margin<T> {
    fn new() -> Self {
        Self {
            value: T::infinity(),
            at: None,
        }
    }

    fn update(&mut self, v: T, x: T) {
        if v < self.value || v.is_nan() {
            self.value = v;
            self.at = Some(x);
        }
    }
}

fn min_over<T: Scalar>(grid: &[T], mut f: impl FnMut(T) -> Result<T>) -> Result<Margin<T>> {
    let mut m = Margin::new();
    for &x in grid {
        m.update(f(x)?, x);
    }
    Ok(m)
}

/// Checks every claim applicable to `(λ, α)` on `grid`.
///
/// Regimes follow the hypotheses as stated: `−2 ≤ α < 0` for the `prop4.*`
/// derivative claims (`prop4.delta_nonneg` also covers `α = 0`),
/// `−3 ≤ α < −2` for `prop5.*`, and `α ∉ [−3, 0]` for `prop6.*`. Inapplicable
/// claims come back with [`ClaimStatus::Skip`]. Reports are ordered by claim id.
pub fn verify_claims<T: Scalar>(lambda: T, alpha: T, grid: &[T], tol: T) -> Result<Vec<DiagnosticReport<T>>> {
    KernelParams::new(lambda, alpha)?;
    for &x in grid {
        check_x(x)?;
    }
    let zero = T::zero();
    let pos = lambda > zero;
    let upper = alpha >= T::lit(-2.0) && alpha < zero;
    let middle = alpha >= T::lit(-3.0) && alpha < T::lit(-2.0);
    let lam0 = lambda0(alpha);
    let above_lam0 = middle && lambda > lam0;
    let below_minus3 = alpha < T::lit(-3.0);

    let x_star = if pos && upper { Some(locate_x_star(lambda, alpha)?) } else { None };

    let mut reports = Vec::with_capacity(CLAIM_IDS.len());
    for &id in CLAIM_IDS.iter() {
        let margin: Option<Margin<T>> = match id {
            "delta_zero" if lambda == zero => Some(min_over(grid, |x| Ok(-convexity::delta(zero, alpha, x)?.abs()))?),
            "prop4.d1_nonneg" if pos => Some(min_over(grid, |x| d1(lambda, alpha, x))?),
            "prop4.e2_endpoints" if pos && upper => {
                let mut m = Margin::new();
                m.update(-e2(lambda, alpha, zero), zero);
                m.update(e2(lambda, alpha, T::one()), T::one());
                Some(m)
            }
            "prop4.e2_increasing" if pos && upper => Some(min_over(grid, |x| Ok(e2_prime(lambda, alpha, x)))?),
            "prop4.d2_sign_structure" if pos && upper => {
                let xs = x_star.unwrap_or(T::one());
                Some(min_over(grid, |x| {
                    let v = d2(lambda, alpha, x)?;
                    Ok(if x < xs { -v } else { v })
                })?)
            }
            "prop4.delta1_chain_positive" if pos && upper => Some(min_over(grid, |x| {
                let d = delta1_family(lambda, alpha, x)?;
                Ok(d.value.min(d.d1).min(d.d2).min(d.d3))
            })?),
            "prop4.delta_small_positive" if pos && upper => {
                let xs = x_star.unwrap_or(T::one());
                let inside: Vec<T> = grid.iter().copied().filter(|&x| x < xs).collect();
                let mut m = Margin::new();
                for x in inside {
                    match delta_small(lambda, alpha, x) {
                        Ok(v) => m.update(v, x),
                        Err(Error::Regime(_)) => continue,
                        Err(e) => return Err(e),
                    }
                }
                Some(m)
            }
            "prop4.ddelta_dlambda_positive" if pos && upper => {
                Some(min_over(grid, |x| convexity::delta_dlambda(lambda, alpha, x))?)
            }
            "prop4.delta_nonneg" if alpha >= T::lit(-2.0) && alpha <= zero => {
                Some(min_over(grid, |x| convexity::delta(lambda, alpha, x))?)
            }
            "prop5.delta3_positive" if middle => Some(min_over(grid, |x| Ok(delta3(alpha, x)))?),
            "prop5.delta_lambda0_positive" if middle => Some(min_over(grid, |x| convexity::delta(lam0, alpha, x))?),
            "prop5.e2_negative" if above_lam0 => Some(min_over(grid, |x| Ok(-e2(lambda, alpha, x)))?),
            "prop5.d2_negative" if above_lam0 => Some(min_over(grid, |x| Ok(-d2(lambda, alpha, x)?))?),
            "prop5.delta1_third_positive" if above_lam0 => Some(min_over(grid, |x| Ok(delta1_family(lambda, alpha, x)?.d3))?),
            "prop5.ddelta_dlambda_positive" if above_lam0 => {
                Some(min_over(grid, |x| convexity::delta_dlambda(lambda, alpha, x))?)
            }
            "prop5.delta_nonneg" if middle && lambda >= lam0 => Some(min_over(grid, |x| convexity::delta(lambda, alpha, x))?),
            "prop6.boundary_ratio_limit" if below_minus3 => {
                let target = -(alpha + T::one());
                let lim_h = extrapolate_x1(|x| Ok(boundary_ratios(lambda, alpha, x)?.0), None)?;
                let lim_f = extrapolate_x1(|x| Ok(boundary_ratios(lambda, alpha, x)?.1), None)?;
                let err = (lim_h - target).abs().max((lim_f - target).abs());
                Some(Margin {
                    value: T::lit(LIMIT_TOL) - err,
                    at: Some(T::one()),
                })
            }
            "prop6.delta_limit" if below_minus3 => {
                let err = (convexity::extrapolate_delta_x1(lambda, alpha)? - convexity::limit_delta_x1(lambda, alpha)?).abs();
                Some(Margin {
                    value: T::lit(LIMIT_TOL) - err,
                    at: Some(T::one()),
                })
            }
            "prop6.negative_near_one" if pos && (alpha > zero || (below_minus3 && convexity::limit_delta_x1(lambda, alpha)? < zero)) => {
                Some(negative_witness(lambda, alpha)?)
            }
            "prop6.split_identity" if below_minus3 => Some(min_over(grid, |x| {
                let d = convexity::delta(lambda, alpha, x)?;
                let s = delta_split(lambda, alpha, x)?;
                let err = (d - (s.first + x * s.second)).abs() / T::one().max(d.abs());
                let err_t = (s.second - s.prefactor * (s.t1 + s.t2)).abs() / T::one().max(s.second.abs());
                Ok(T::lit(1e-9) - err.max(err_t))
            })?),
            _ => None,
        };
        let report = match margin {
            None => DiagnosticReport {
                claim_id: id,
                lambda,
                alpha,
                grid: grid.to_vec(),
                status: ClaimStatus::Skip,
                worst_violation: T::nan(),
                witness_x: None,
            },
            Some(m) => {
                let ok = m.value >= -tol;
                DiagnosticReport {
                    claim_id: id,
                    lambda,
                    alpha,
                    grid: grid.to_vec(),
                    status: if ok { ClaimStatus::Pass } else { ClaimStatus::Fail },
                    worst_violation: m.value,
                    witness_x: m.at,
                }
            }
        };
        reports.push(report);
    }
    reports.sort_by(|a, b| a.claim_id.cmp(b.claim_id));
    Ok(reports)
}

/// Searches `x ∈ [0.99, 1 − 10⁻⁶]`, log-spaced in `1 − x`, for `Δ(λ, x) < 0`.
/// The margin is `−min Δ`, positive when a witness exists.
fn negative_witness<T: Scalar>(lambda: T, alpha: T) -> Result<Margin<T>> {
    let mut best = Margin::new();
    for i in 0..=40 {
        let e = T::lit(10f64.powf(-2.0 - 4.0 * i as f64 / 40.0));
        let x = T::one() - e;
        let d = convexity::delta(lambda, alpha, x)?;
        best.update(d, x);
    }
    best.value = -best.value;
    Ok(best)
}

/// Searches `[0.99, 1 − 10⁻⁶]` for a point where `Δ(λ, x) < 0`.
pub fn find_negative_delta_near_one<T: Scalar>(lambda: T, alpha: T) -> Result<Option<T>> {
    let m = negative_witness(lambda, alpha)?;
    Ok(if m.value > T::zero() { m.at } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn e2_examples() {
        assert_eq!(e2(1.3, -0.7, 0.0), -(2.3f64 * 2.3));
        assert_relative_eq!(e2(1.3, -0.7, 1.0), 0.7 * 1.3, max_relative = 1e-14);
        assert_relative_eq!(e2(1.0, -1.0, 0.5), -1.25, max_relative = 1e-15);
    }

    #[test]
    fn d1_example_alpha_zero() {
        assert_relative_eq!(d1(1.0, 0.0, 0.5).unwrap(), 0.0625, max_relative = 1e-13);
        assert!(d1(1.0f64, -1.0, 1e-9).unwrap().abs() < 1e-17);
        assert!(d1(0.0, -1.0, 0.5).is_err());
    }

    #[test]
    fn d2_regimes() {
        assert!(d2(1.0f64, -0.5, 1e-9).unwrap().abs() < 1e-15);
        for x in [0.05, 0.3, 0.7, 0.95, 0.999] {
            assert!(d2(1.0, -3.0, x).unwrap() < 0.0, "x = {x}");
        }
        let xs = locate_x_star(1.0, -0.5).unwrap();
        assert!(xs > 0.0 && xs < 1.0);
        assert!(d2(1.0, -0.5, xs * 0.9).unwrap() < 0.0);
        assert!(d2(1.0, -0.5, (xs + 1.0) / 2.0).unwrap() > 0.0);
        assert_eq!(locate_x_star(1.0, -2.0).unwrap(), 1.0);
        // denominator λ+1−(λ+1+α)x vanishes at x = 1 for α = 0
        assert!(matches!(d2(1.0, 1.0, 0.9), Err(Error::Regime(_))));
    }

    #[test]
    fn delta_small_decays_at_origin() {
        let ratios: Vec<f64> = [1e-2, 1e-3, 1e-4].iter().map(|&x| delta_small(1.0, -1.0, x).unwrap() / x).collect();
        assert!(ratios[0] > ratios[1] && ratios[1] > ratios[2], "{ratios:?}");
        assert!(ratios[2] < 1e-3);
        assert!(delta_small(1.0, -1.0, 0.05).unwrap() > 0.0);
        assert!(delta_small(2.0, -2.0, 0.1).unwrap() > 0.0);
    }

    #[test]
    fn delta3_examples() {
        assert!(delta3(-2.5, 1e-9) < 1e-15);
        assert_relative_eq!(delta3(-2.5, 0.5), 1.0 - 0.25 * 2f64.powf(1.5), max_relative = 1e-14);
        for x in [0.01, 0.5, 0.99] {
            assert!(delta3(-2.7, x) > 0.0);
        }
    }

    #[test]
    fn delta1_vanishes_at_origin() {
        let d = delta1_family(1.5f64, -1.0, 1e-6).unwrap();
        assert!(d.value.abs() < 1e-14 && d.d1.abs() < 1e-10 && d.d2.abs() < 1e-5, "{d:?}");
    }

    #[test]
    fn split_limits_at_lambda_one() {
        assert_eq!(limit_t2_x1(1.0, -4.0), 0.0);
        assert_relative_eq!(limit_first_x1(1.0, -4.0), 1.5 * (1.0 - 1.5), max_relative = 1e-15);
    }

    #[test]
    fn positive_alpha_split_domain() {
        assert!(positive_alpha_split(1.0, 0.0, 0.5).is_err());
        assert!(positive_alpha_split(1.0, 1.0, 0.5).is_ok());
    }

    #[test]
    fn verify_lambda_zero_only_checks_delta_zero() {
        let grid = linspace(0.01, 0.99, 20);
        let reports = verify_claims(0.0, -1.0, &grid, 1e-10).unwrap();
        assert_eq!(reports.len(), CLAIM_IDS.len());
        let dz = reports.iter().find(|r| r.claim_id == "delta_zero").unwrap();
        assert!(dz.passed());
        assert!(reports.iter().all(|r| r.passed() || r.skipped()));
        let ids: Vec<&str> = reports.iter().map(|r| r.claim_id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }
}
