//! Kernel integrals `f_λ(x) = ∫₀ˣ t^λ (1−t)^α dt` and their derivatives.
//!
//! Evaluation order:
//!
//! 1. closed forms (`α = 0`, `λ = 0`, and `λ = −(α+2) > 0`);
//! 2. the binomial series `x^{λ+1} Σ_j b_j x^j / (λ+1+j)` with
//!    `b_j = (−1)^j C(α, j)` for `x` up to the switch point;
//! 3. above the switch point, the series value at the switch point plus
//!    adaptive quadrature of the remainder in `u = 1 − t`, split at the
//!    geometric points `u = (1−x)·2^m` so every panel sees `u^α` vary by at
//!    most a factor `2^|α|`.
//!
//! The same scheme evaluates `∂f_λ/∂λ = ∫₀ˣ t^λ (1−t)^α log t dt`.

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::{tol_floor, Scalar};

/// Smallest admissible evaluation point.
pub const X_MIN: f64 = 1e-12;
/// Largest admissible evaluation point.
pub const X_MAX: f64 = 1.0 - 1e-12;

/// Default absolute-or-relative tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Default series/quadrature switch point.
pub const DEFAULT_SWITCH: f64 = 0.9;

/// Exponent pair of a kernel integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams<T> {
    lambda: T,
    alpha: T,
}

impl<T: Scalar> KernelParams<T> {
    pub fn new(lambda: T, alpha: T) -> Result<Self> {
        if !(lambda >= T::zero()) || !lambda.is_finite() {
            return Err(Error::domain("lambda", lambda.as_f64(), "[0, inf)"));
        }
        if !alpha.is_finite() {
            return Err(Error::domain("alpha", alpha.as_f64(), "finite reals"));
        }
        Ok(Self { lambda, alpha })
    }

    pub fn lambda(&self) -> T {
        self.lambda
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// The same weight with `λ = 0`, i.e. the normalising integral `f_0`.
    pub fn base(&self) -> Self {
        Self {
            lambda: T::zero(),
            alpha: self.alpha,
        }
    }

    /// True when `λ = −(α+2) > 0`, where `f_λ` is elementary.
    pub fn is_lambda0(&self) -> bool {
        let target = -(self.alpha + T::lit(2.0));
        target > T::zero()
            && (self.lambda - target).abs() <= T::lit(4.0) * T::epsilon() * T::one().max(self.alpha.abs())
    }
}

/// `λ₀ = −(α+2)`.
pub fn lambda0<T: Scalar>(alpha: T) -> T {
    -(alpha + T::lit(2.0))
}

/// `f_λ` and its derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelBundle<T> {
    pub x: T,
    pub h: T,
    pub h1: T,
    pub h2: T,
    pub h3: T,
    pub dh_dlambda: T,
}

/// Which evaluation path to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Closed form when one applies, otherwise series below the switch point
    /// and series-plus-quadrature above it.
    #[default]
    Auto,
    /// Binomial series only, at any `x`.
    Series,
    /// Adaptive quadrature from 0, no series and no closed forms.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelOptions<T> {
    pub tol: T,
    pub switch_point: T,
    pub max_terms: usize,
    pub max_intervals: usize,
    pub route: Route,
}

impl<T: Scalar> Default for KernelOptions<T> {
    fn default() -> Self {
        Self {
            tol: T::lit(DEFAULT_TOL),
            switch_point: T::lit(DEFAULT_SWITCH),
            max_terms: 200_000,
            max_intervals: 2000,
            route: Route::Auto,
        }
    }
}

impl<T: Scalar> KernelOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }

    pub fn switch_point(mut self, switch_point: T) -> Self {
        self.switch_point = switch_point;
        self
    }

    fn quad(&self) -> QuadOptions<T> {
        // half the budget is left for the series part
        QuadOptions {
            abs_tol: T::zero(),
            rel_tol: (self.tol * T::lit(0.5)).max(tol_floor::<T>()),
            max_intervals: self.max_intervals,
        }
    }
}

pub(crate) fn check_x<T: Scalar>(x: T) -> Result<()> {
    if x >= T::lit(X_MIN) && x <= T::lit(X_MAX) && x < T::one() {
        Ok(())
    } else {
        Err(Error::domain("x", x.as_f64(), "[1e-12, 1-1e-12]"))
    }
}

fn check_tol<T: Scalar>(tol: T) -> Result<()> {
    if tol > T::zero() && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("tol", tol.as_f64(), "(0, inf)"))
    }
}

/// `f_λ(x)` to the looser of `tol` absolute and `tol` relative.
pub fn eval_f_lambda<T: Scalar>(params: KernelParams<T>, x: T, tol: T) -> Result<T> {
    check_tol(tol)?;
    f_lambda(params, x, &KernelOptions::with_tol(tol))
}

/// `f_λ(x)` with explicit options.
///
/// Fails with [`Error::Range`] when the value over- or underflows.
pub fn f_lambda<T: Scalar>(params: KernelParams<T>, x: T, opts: &KernelOptions<T>) -> Result<T> {
    check_x(x)?;
    let v = match opts.route {
        Route::Auto => {
            if let Some(v) = closed_form(params, x) {
                return Error::positive_finite("f_lambda", v);
            }
            // heavy cancellation (large positive α) sends the value to quadrature
            let at = x.min(opts.switch_point);
            match series(params, at, opts.max_terms)?.f_within(opts.tol) {
                None => quadrature_from_zero(params, x, false, opts),
                Some(below) if x <= opts.switch_point => Ok(below),
                Some(below) => Ok(below + upper_integral(params, T::one() - x, T::one() - at, false, opts)?),
            }
        }
        Route::Series => Ok(series(params, x, opts.max_terms)?.f),
        Route::Quadrature => quadrature_from_zero(params, x, false, opts),
    }?;
    Error::positive_finite("f_lambda", v)
}

/// `f_λ(x)` evaluated twice, through the automatic route and by quadrature
/// from zero; fails if the two disagree by more than `10·tol` (absolute or
/// relative, whichever is looser).
pub fn eval_f_lambda_checked<T: Scalar>(params: KernelParams<T>, x: T, tol: T) -> Result<T> {
    check_tol(tol)?;
    let opts = KernelOptions::with_tol(tol);
    let auto = f_lambda(params, x, &opts)?;
    let quad = f_lambda(params, x, &opts.route(Route::Quadrature))?;
    let allowed = T::lit(10.0) * tol * T::one().max(auto.abs());
    if (auto - quad).abs() > allowed {
        return Err(Error::Consistency(format!(
            "f_lambda(lambda={}, alpha={}, x={}): series route {} vs quadrature {}",
            params.lambda, params.alpha, x, auto, quad
        )));
    }
    Ok(auto)
}

/// Elementary forms of `f_λ(x)` where they exist.
pub fn closed_form<T: Scalar>(params: KernelParams<T>, x: T) -> Option<T> {
    let KernelParams { lambda, alpha } = params;
    let one = T::one();
    if alpha == T::zero() {
        let e = lambda + one;
        return Some(x.powf(e) / e);
    }
    if lambda == T::zero() {
        let log1m = (-x).ln_1p();
        if alpha == -one {
            return Some(-log1m);
        }
        let e = alpha + one;
        // 1 − (1−x)^{α+1} without cancellation at small x
        return Some(-(e * log1m).exp_m1() / e);
    }
    if params.is_lambda0() {
        let e = alpha + one;
        return Some(-(one / e) * ((one - x) / x).powf(e));
    }
    None
}

/// Binomial series for `(f_λ(x), ∂f_λ/∂λ(x))`.
/// Sums of the binomial series for `f_λ` and `∂f_λ/∂λ`.
struct SeriesSums<T> {
    f: T,
    df: T,
    /// `Σ|term| / |Σ term|` for each sum; rounding loss is about this times eps.
    cancel_f: T,
    cancel_df: T,
}

impl<T: Scalar> SeriesSums<T> {
    fn f_within(&self, tol: T) -> Option<T> {
        (self.cancel_f * T::epsilon() <= tol).then_some(self.f)
    }

    fn df_within(&self, tol: T) -> Option<T> {
        (self.cancel_df * T::epsilon() <= tol).then_some(self.df)
    }
}

fn series<T: Scalar>(params: KernelParams<T>, x: T, max_terms: usize) -> Result<SeriesSums<T>> {
    let KernelParams { lambda, alpha } = params;
    let one = T::one();
    let eps = T::epsilon();
    let lead = lambda + one;
    // terms shrink monotonically once j exceeds |α|
    let settle = alpha.abs().ceil().to_usize().unwrap_or(0) + 2;
    let tail_factor = one / (one - x);

    let mut coeff = one; // b_j x^j
    let mut s1 = T::zero();
    let mut s2 = T::zero();
    let mut a1 = T::zero();
    let mut a2 = T::zero();
    let mut converged = false;
    for j in 0..max_terms {
        let jt = T::from_usize_lossy(j);
        let d = lead + jt;
        let t1 = coeff / d;
        let t2 = t1 / d;
        s1 = s1 + t1;
        s2 = s2 + t2;
        a1 = a1 + t1.abs();
        a2 = a2 + t2.abs();
        if coeff == T::zero() || (j >= settle && t1.abs() * tail_factor <= T::lit(0.5) * eps * s1.abs()) {
            converged = true;
            break;
        }
        coeff = coeff * (jt - alpha) / (jt + one) * x;
    }
    if !converged {
        return Err(Error::SeriesDivergence {
            terms: max_terms,
            partial: s1.as_f64(),
        });
    }
    let pre = x.powf(lead);
    let f = pre * s1;
    let df = x.ln() * f - pre * s2;
    // df mixes both sums; its loss is bounded through the larger absolute part
    let df_abs = (x.ln() * pre * a1).abs() + pre * a2;
    Ok(SeriesSums {
        f,
        df,
        cancel_f: a1 / s1.abs(),
        cancel_df: df_abs / df.abs(),
    })
}

/// `∫ t^λ(1−t)^α [log t] dt` over `t ∈ [1−u_hi, 1−u_lo]`, integrated in
/// `u = 1 − t` on geometric panels starting at `u_lo`.
fn upper_integral<T: Scalar>(
    params: KernelParams<T>,
    u_lo: T,
    u_hi: T,
    with_log: bool,
    opts: &KernelOptions<T>,
) -> Result<T> {
    let KernelParams { lambda, alpha } = params;
    let integrand = |u: T| {
        let base = (T::one() - u).powf(lambda) * u.powf(alpha);
        if with_log {
            base * (-u).ln_1p()
        } else {
            base
        }
    };
    let quad = opts.quad();
    let two = T::lit(2.0);
    let mut total = T::zero();
    let mut a = u_lo;
    while a < u_hi {
        let b = (a * two).min(u_hi);
        total = total + integrate(integrand, a, b, quad)?.value;
        a = b;
    }
    Ok(total)
}

fn quadrature_from_zero<T: Scalar>(params: KernelParams<T>, x: T, with_log: bool, opts: &KernelOptions<T>) -> Result<T> {
    let KernelParams { lambda, alpha } = params;
    let half = T::lit(0.5);
    let integrand = |t: T| {
        let base = t.powf(lambda) * (T::one() - t).powf(alpha);
        if with_log {
            base * t.ln()
        } else {
            base
        }
    };
    let split = x.min(half);
    let lower = integrate(integrand, T::zero(), split, opts.quad())?.value;
    if x <= half {
        return Ok(lower);
    }
    Ok(lower + upper_integral(params, T::one() - x, half, with_log, opts)?)
}

/// `(h′, h″, h‴)` from their closed forms.
pub fn eval_derivatives<T: Scalar>(params: KernelParams<T>, x: T) -> Result<(T, T, T)> {
    check_x(x)?;
    Ok(derivatives_unchecked(params, x))
}

pub(crate) fn derivatives_unchecked<T: Scalar>(params: KernelParams<T>, x: T) -> (T, T, T) {
    let KernelParams { lambda: l, alpha: a } = params;
    let one = T::one();
    let two = T::lit(2.0);
    let y = one - x;
    let h1 = x.powf(l) * y.powf(a);
    let h2 = (l - l * x - a * x) * x.powf(l - one) * y.powf(a - one);
    let quad = (-l + two * l * a - a + a * a + l * l) * x * x + (-two * l * a + two * l - two * l * l) * x + (l * l - l);
    let h3 = x.powf(l - two) * y.powf(a - two) * quad;
    (h1, h2, h3)
}

/// `∂f_λ/∂λ(x) = ∫₀ˣ t^λ (1−t)^α log t dt`.
pub fn eval_dh_dlambda<T: Scalar>(params: KernelParams<T>, x: T, tol: T) -> Result<T> {
    check_tol(tol)?;
    dh_dlambda(params, x, &KernelOptions::with_tol(tol))
}

pub fn dh_dlambda<T: Scalar>(params: KernelParams<T>, x: T, opts: &KernelOptions<T>) -> Result<T> {
    check_x(x)?;
    let KernelParams { lambda, alpha } = params;
    match opts.route {
        Route::Auto => {
            if alpha == T::zero() {
                let e = lambda + T::one();
                return Ok(x.powf(e) * (x.ln() / e - T::one() / (e * e)));
            }
            let at = x.min(opts.switch_point);
            match series(params, at, opts.max_terms)?.df_within(opts.tol) {
                None => quadrature_from_zero(params, x, true, opts),
                Some(below) if x <= opts.switch_point => Ok(below),
                Some(below) => Ok(below + upper_integral(params, T::one() - x, T::one() - at, true, opts)?),
            }
        }
        Route::Series => Ok(series(params, x, opts.max_terms)?.df),
        Route::Quadrature => quadrature_from_zero(params, x, true, opts),
    }
}

/// Everything about `f_λ` at one point.
pub fn eval_bundle<T: Scalar>(params: KernelParams<T>, x: T, tol: T) -> Result<KernelBundle<T>> {
    check_tol(tol)?;
    let opts = KernelOptions::with_tol(tol);
    let h = f_lambda(params, x, &opts)?;
    let (h1, h2, h3) = derivatives_unchecked(params, x);
    let dh = dh_dlambda(params, x, &opts)?;
    Ok(KernelBundle {
        x,
        h,
        h1,
        h2,
        h3,
        dh_dlambda: dh,
    })
}
