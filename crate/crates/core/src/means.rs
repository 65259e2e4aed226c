//! Weighted area integral means `M_{p,α}(f, r)`.
//!
//! In polar coordinates with `x = r²`,
//!
//! ```text
//! M_{p,α}(z^k, r) = f_{pk/2}(x) / f_0(x),
//! M_{2,α}(f, r)   = Σ_k |a_k|² M_{2,α}(z^k, r)     for f = Σ a_k z^k,
//! ```
//!
//! so means of monomials and of `p = 2` Taylor polynomials reduce to kernel
//! integrals. Everything else goes through [`quad_mean`].
//!
//! Functions taking `r` validate `0 < r < 1`; the `*_x` variants take
//! `x = r²` directly and are what the convexity analysis uses. The `r → 0`
//! limit `|a_0|^p` is not returned by any of them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::kernels::{self, check_x, KernelOptions, KernelParams};
use crate::quadrature::{integrate, QuadOptions};
use crate::scalar::{tol_floor, Scalar};

/// Taylor coefficients `a_0, …, a_K` of a polynomial `Σ a_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorCoefficients<T> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> TaylorCoefficients<T> {
    pub fn new(coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("coefficient count", 0.0, "at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::domain("coefficient", f64::NAN, "finite complex numbers"));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&re| Complex::new(re, T::zero())).collect())
    }

    /// `c · z^k`.
    pub fn monomial(k: usize, c: Complex<T>) -> Self {
        let mut coeffs = vec![Complex::new(T::zero(), T::zero()); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True when every coefficient past `a_0` vanishes.
    pub fn is_constant(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.norm_sqr() == T::zero())
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| *a * c).collect(),
        }
    }

    /// Horner evaluation at `z`.
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex::new(T::zero(), T::zero()), |acc, a| acc * z + *a)
    }

    /// Parses the plain-text coefficient format: one `re im` pair per line,
    /// line order giving the power of `z`. Blank lines and lines starting with
    /// `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut coeffs = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected `re im`, found {} fields", fields.len()),
                });
            }
            let mut parts = [0.0f64; 2];
            for (slot, field) in parts.iter_mut().zip(&fields) {
                *slot = field.parse::<f64>().map_err(|e| Error::Parse {
                    line: idx + 1,
                    message: format!("`{field}`: {e}"),
                })?;
            }
            coeffs.push(Complex::new(T::lit(parts[0]), T::lit(parts[1])));
        }
        if coeffs.is_empty() {
            return Err(Error::Parse {
                line: 0,
                message: "no coefficients".into(),
            });
        }
        Self::new(coeffs)
    }

    /// Inverse of [`parse`](Self::parse), shortest round-trip float formatting.
    pub fn to_text(&self) -> String {
        self.coeffs
            .iter()
            .map(|c| format!("{} {}\n", c.re, c.im))
            .collect()
    }
}

/// Parameters of a single mean evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanParams<T> {
    pub p: T,
    pub alpha: T,
    pub r: T,
}

impl<T: Scalar> MeanParams<T> {
    pub fn new(p: T, alpha: T, r: T) -> Result<Self> {
        check_p(p)?;
        check_r(r)?;
        if !alpha.is_finite() {
            return Err(Error::domain("alpha", alpha.as_f64(), "finite reals"));
        }
        Ok(Self { p, alpha, r })
    }

    pub fn x(&self) -> T {
        self.r * self.r
    }
}

fn check_p<T: Scalar>(p: T) -> Result<()> {
    if p > T::zero() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::domain("p", p.as_f64(), "(0, inf)"))
    }
}

fn check_r<T: Scalar>(r: T) -> Result<()> {
    if r > T::zero() && r < T::one() {
        Ok(())
    } else {
        Err(Error::domain("r", r.as_f64(), "(0, 1)"))
    }
}

/// Anything that can be evaluated on the closed disk of radius `r`.
pub trait DiskFunction<T> {
    fn eval_at(&self, z: Complex<T>) -> Complex<T>;
}

impl<T: Scalar> DiskFunction<T> for TaylorCoefficients<T> {
    fn eval_at(&self, z: Complex<T>) -> Complex<T> {
        self.eval(z)
    }
}

impl<T, F> DiskFunction<T> for F
where
    F: Fn(Complex<T>) -> Complex<T>,
{
    fn eval_at(&self, z: Complex<T>) -> Complex<T> {
        self(z)
    }
}

/// `M_{p,α}(z^k, r)`. Always in `(0, r^{pk}]`.
pub fn monomial_mean<T: Scalar>(p: T, alpha: T, k: usize, r: T) -> Result<T> {
    let params = MeanParams::new(p, alpha, r)?;
    monomial_mean_x(p, alpha, k, params.x(), &KernelOptions::default())
}

/// `M_{p,α}(z^k, ·)` as a function of `x = r²`.
pub fn monomial_mean_x<T: Scalar>(p: T, alpha: T, k: usize, x: T, opts: &KernelOptions<T>) -> Result<T> {
    check_p(p)?;
    check_x(x)?;
    if k == 0 {
        return Ok(T::one());
    }
    let lambda = p * T::from_usize_lossy(k) * T::lit(0.5);
    let num = kernels::f_lambda(KernelParams::new(lambda, alpha)?, x, opts)?;
    let den = kernels::f_lambda(KernelParams::new(T::zero(), alpha)?, x, opts)?;
    Error::positive_finite("mean", num / den)
}

/// `M_{2,α}(f, r) = Σ |a_k|² M_{2,α}(z^k, r)` over the given coefficients.
///
/// Callers truncating an infinite series at degree `K` incur an error of at
/// most `Σ_{k>K} |a_k|² r^{2k}`, since each monomial mean is bounded by `r^{2k}`.
pub fn series_mean_p2<T: Scalar>(f: &TaylorCoefficients<T>, alpha: T, r: T) -> Result<T> {
    check_r(r)?;
    series_mean_p2_x(f, alpha, r * r, &KernelOptions::default())
}

/// [`series_mean_p2`] as a function of `x = r²`.
pub fn series_mean_p2_x<T: Scalar>(f: &TaylorCoefficients<T>, alpha: T, x: T, opts: &KernelOptions<T>) -> Result<T> {
    check_x(x)?;
    let base = KernelParams::new(T::zero(), alpha)?;
    let f0 = kernels::f_lambda(base, x, opts)?;
    let mut terms = Vec::with_capacity(f.coeffs.len());
    for (k, a) in f.coeffs.iter().enumerate() {
        let w = a.norm_sqr();
        if w == T::zero() {
            continue;
        }
        let fk = if k == 0 {
            f0
        } else {
            kernels::f_lambda(KernelParams::new(T::from_usize_lossy(k), alpha)?, x, opts)?
        };
        terms.push(w * fk);
    }
    let num = terms.into_iter().fold(T::zero(), |acc, t| acc + t);
    let m = num / f0;
    if m.is_finite() {
        Ok(m)
    } else {
        Err(Error::Range { quantity: "mean", value: m.as_f64() })
    }
}

/// Hardy circle mean `M_2(f, r) = Σ |a_k|² r^{2k}`.
pub fn circle_mean_p2<T: Scalar>(f: &TaylorCoefficients<T>, r: T) -> Result<T> {
    check_r(r)?;
    let x = r * r;
    let mut pow = T::one();
    let mut total = T::zero();
    for a in &f.coeffs {
        total = total + a.norm_sqr() * pow;
        pow = pow * x;
    }
    Ok(total)
}

/// Angular mean `(1/2π) ∫ |f(ρ e^{iθ})|^p dθ` by the periodic trapezoid
/// rule, doubling the node count until two successive estimates agree.
pub fn angular_mean<T: Scalar, F: DiskFunction<T> + ?Sized>(f: &F, p: T, rho: T, tol: T) -> Result<T> {
    let two_pi = T::PI() + T::PI();
    let sample = |theta: T| f.eval_at(Complex::from_polar(rho, theta)).norm().powf(p);
    let mut n = 8usize;
    let mut sum = (0..n).fold(T::zero(), |acc, j| acc + sample(two_pi * T::from_usize_lossy(j) / T::from_usize_lossy(n)));
    let mut estimate = sum / T::from_usize_lossy(n);
    while n < 1 << 16 {
        // new nodes sit at the midpoints of the old ones
        let m = n;
        n *= 2;
        let add = (0..m).fold(T::zero(), |acc, j| {
            acc + sample(two_pi * (T::from_usize_lossy(2 * j + 1)) / T::from_usize_lossy(n))
        });
        sum = sum + add;
        let next = sum / T::from_usize_lossy(n);
        let diff = (next - estimate).abs();
        estimate = next;
        if diff <= tol * estimate.abs().max(T::min_positive_value()) {
            return Ok(estimate);
        }
    }
    Err(Error::Accuracy {
        estimate: estimate.as_f64(),
        error: f64::NAN,
        tol: tol.as_f64(),
    })
}

/// `M_{p,α}(f, r)` by nested angular (trapezoid) and radial (adaptive
/// Gauss-Kronrod) quadrature. The radial integral runs in `x = ρ²` with
/// geometric panels toward `x = r²`.
pub fn quad_mean<T: Scalar, F: DiskFunction<T> + ?Sized>(f: &F, p: T, alpha: T, r: T, tol: T) -> Result<T> {
    let params = MeanParams::new(p, alpha, r)?;
    if !(tol > T::zero()) {
        return Err(Error::domain("tol", tol.as_f64(), "(0, inf)"));
    }
    let big_x = params.x();
    check_x(big_x)?;
    let tol = tol.max(tol_floor::<T>());
    let inner_tol = tol * T::lit(0.1);
    let radial = QuadOptions {
        abs_tol: T::zero(),
        rel_tol: tol * T::lit(0.5),
        max_intervals: 4000,
    };

    // angular failures surface through this cell; the integrand must stay `Fn`
    let failure = std::cell::RefCell::new(None);
    let ang = |x: T| -> T {
        match angular_mean(f, p, x.sqrt(), inner_tol) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                T::nan()
            }
        }
    };

    let one = T::one();
    let half = T::lit(0.5);
    let lower_end = big_x.min(half);
    let lower = integrate(|x: T| ang(x) * (one - x).powf(alpha), T::zero(), lower_end, radial);
    let mut total = accept(lower, &failure)?;
    if big_x > half {
        let mut a = one - big_x;
        while a < half {
            let b = (a + a).min(half);
            let piece = integrate(|u: T| ang(one - u) * u.powf(alpha), a, b, radial);
            total = total + accept(piece, &failure)?;
            a = b;
        }
    }
    let norm = kernels::f_lambda(KernelParams::new(T::zero(), alpha)?, big_x, &KernelOptions::default())?;
    Ok(total / norm)
}

fn accept<T: Scalar>(
    r: Result<crate::quadrature::Estimate<T>>,
    failure: &std::cell::RefCell<Option<Error>>,
) -> Result<T> {
    if let Some(e) = failure.borrow_mut().take() {
        return Err(e);
    }
    Ok(r?.value)
}
