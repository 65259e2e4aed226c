#![allow(dead_code)]

use logconvex::Complex64;
use logconvex::TaylorCoefficients;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Double-exponential (tanh-sinh) quadrature on `[a, b]`, halving the step
/// until two levels agree. Independent of the Gauss-Kronrod code under test.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let hpi = std::f64::consts::FRAC_PI_2;
    // node pair at ±t; distances to the endpoints come from 1 − tanh(u)
    // directly so that they stay accurate next to a singular endpoint
    let pair = |t: f64| -> f64 {
        let u = hpi * t.sinh();
        let cu = u.cosh();
        let w = hpi * t.cosh() / (cu * cu);
        let gap = half * 2.0 / ((2.0 * u).exp() + 1.0);
        if w == 0.0 || gap == 0.0 {
            return 0.0;
        }
        let mut s = 0.0;
        for node in [a + gap, b - gap] {
            if node > a && node < b {
                s += f(node);
            }
        }
        w * half * s
    };
    let mid = hpi * half * f(0.5 * (a + b));
    let mut h = 0.5;
    let mut prev = f64::NAN;
    loop {
        let n = (4.0 / h) as i64;
        let sum: f64 = (1..=n).map(|k| pair(k as f64 * h)).sum();
        let est = h * (mid + sum);
        if (est - prev).abs() <= 1e-14 * est.abs() || h < 1e-4 {
            return est;
        }
        prev = est;
        h *= 0.5;
    }
}

/// `f_λ(x)` by tanh-sinh quadrature, split at `x/2`.
pub fn kernel_oracle(lambda: f64, alpha: f64, x: f64) -> f64 {
    let g = |t: f64| t.powf(lambda) * (1.0 - t).powf(alpha);
    tanh_sinh(g, 0.0, 0.5 * x) + tanh_sinh(g, 0.5 * x, x)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polynomial of random degree `≤ max_degree` with complex coefficients
/// whose real and imaginary parts are uniform in `[−1, 1]`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, max_degree: usize) -> TaylorCoefficients<f64> {
    let degree = rng.gen_range(0..=max_degree);
    let coeffs: Vec<Complex64> = (0..=degree)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    TaylorCoefficients::new(coeffs).unwrap()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}
