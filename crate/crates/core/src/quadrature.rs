//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate falls below `max(abs_tol, rel_tol * |I|)`. Error estimates use the
//! QUADPACK rescaling, which is pessimistic for smooth integrands: a single
//! panel on a smooth piece usually lands within a few ulps of the true value.

use crate::error::{Error, Result};
use crate::scalar::{tol_floor, Scalar};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: T,
    pub intervals: usize,
}

/// Stopping rule for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Scalar> QuadOptions<T> {
    /// Accept the looser of `tol` absolute and `tol` relative.
    pub fn loose(tol: T) -> Self {
        Self {
            abs_tol: tol,
            rel_tol: tol,
            max_intervals: 2000,
        }
    }

    pub fn relative(tol: T) -> Self {
        Self {
            abs_tol: T::zero(),
            rel_tol: tol,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn rescale_error<T: Scalar>(err: T, res_abs: T, res_asc: T) -> T {
    let mut scaled = err.abs();
    if res_asc != T::zero() && scaled != T::zero() {
        let scale = (T::lit(200.0) * scaled / res_asc).powf(T::lit(1.5));
        scaled = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) {
        let min_err = T::lit(50.0) * T::epsilon() * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

/// Single 21-point Gauss-Kronrod panel on `[a, b]`.
pub fn gk21<T, F>(f: &F, a: T, b: T) -> (T, T)
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let abs_half_len = half_len.abs();

    let f_center = f(center);
    let mut res_gauss = T::zero();
    let mut res_kronrod = f_center * T::lit(WGK[10]);
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];

    for (j, &wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let dx = half_len * T::lit(XGK[jtw]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss = res_gauss + T::lit(wg) * (f1 + f2);
        res_kronrod = res_kronrod + T::lit(WGK[jtw]) * (f1 + f2);
        res_abs = res_abs + T::lit(WGK[jtw]) * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half_len * T::lit(XGK[jtwm1]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod = res_kronrod + T::lit(WGK[jtwm1]) * (f1 + f2);
        res_abs = res_abs + T::lit(WGK[jtwm1]) * (f1.abs() + f2.abs());
    }

    let mean = res_kronrod * half;
    let mut res_asc = T::lit(WGK[10]) * (f_center - mean).abs();
    for j in 0..10 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = (res_kronrod - res_gauss) * half_len;
    let value = res_kronrod * half_len;
    (value, rescale_error(err, res_abs * abs_half_len, res_asc * abs_half_len))
}

/// Integrates `f` over `[a, b]` by global adaptive bisection.
///
/// Fails with [`Error::Accuracy`] once `max_intervals` panels are in use and
/// the tolerance is still not met; the error carries the current estimate.
pub fn integrate<T, F>(f: F, a: T, b: T, opts: QuadOptions<T>) -> Result<Estimate<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: T::zero(),
            intervals: 0,
        });
    }
    let rel_tol = opts.rel_tol.max(tol_floor::<T>());
    let (value, error) = gk21(&f, a, b);
    let mut panels = vec![Panel { a, b, value, error }];
    let mut total = value;
    let mut total_err = error;

    loop {
        let target = opts.abs_tol.max(rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        // refine the worst panel that can still be split
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| splittable(p.a, p.b))
            .max_by(|(_, l), (_, r)| l.error.partial_cmp(&r.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(idx) = worst else {
            break;
        };
        if panels.len() >= opts.max_intervals.max(1) {
            return Err(Error::Accuracy {
                estimate: total.as_f64(),
                error: total_err.as_f64(),
                tol: target.as_f64(),
            });
        }
        let p = panels.swap_remove(idx);
        let mid = T::lit(0.5) * (p.a + p.b);
        let (v1, e1) = gk21(&f, p.a, mid);
        let (v2, e2) = gk21(&f, mid, p.b);
        panels.push(Panel { a: p.a, b: mid, value: v1, error: e1 });
        panels.push(Panel { a: mid, b: p.b, value: v2, error: e2 });
        // resum instead of updating incrementally so the result does not
        // depend on the refinement history through rounding
        total = sum_sorted(panels.iter().map(|p| p.value), panels.len());
        total_err = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
    }

    if !total.is_finite() {
        return Err(Error::Accuracy {
            estimate: total.as_f64(),
            error: total_err.as_f64(),
            tol: opts.abs_tol.as_f64(),
        });
    }

    Ok(Estimate {
        value: total,
        error: total_err,
        intervals: panels.len(),
    })
}

fn splittable<T: Scalar>(a: T, b: T) -> bool {
    let width = (b - a).abs();
    width > T::lit(16.0) * T::epsilon() * a.abs().max(b.abs()).max(T::min_positive_value())
}

fn sum_sorted<T: Scalar>(values: impl Iterator<Item = T>, len: usize) -> T {
    let mut v: Vec<T> = Vec::with_capacity(len);
    v.extend(values);
    v.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap_or(std::cmp::Ordering::Equal));
    v.into_iter().fold(T::zero(), |acc, x| acc + x)
}
