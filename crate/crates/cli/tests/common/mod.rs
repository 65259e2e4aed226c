#![allow(dead_code)]

use std::path::Path;
use std::process::Command;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn logconvex(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_logconvex"))
        .args(args)
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

/// Data rows of a CSV in the fixed six-column schema.
pub fn rows(csv: &str) -> Vec<Vec<String>> {
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("p,alpha,k,x,value,classification"));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

/// Tanh-sinh quadrature on `[a, b]`, halving the step until the estimate
/// settles to 1e-14 relative.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let hpi = std::f64::consts::FRAC_PI_2;
    let pair = |t: f64| -> f64 {
        let u = hpi * t.sinh();
        let cu = u.cosh();
        let w = hpi * t.cosh() / (cu * cu);
        let gap = half * 2.0 / ((2.0 * u).exp() + 1.0);
        if w == 0.0 || gap == 0.0 {
            return 0.0;
        }
        // nodes that round onto an endpoint are dropped
        let mut s = 0.0;
        for node in [a + gap, b - gap] {
            if node > a && node < b {
                s += f(node);
            }
        }
        w * s
    };
    let mut h = 0.5;
    let mut prev = f64::NAN;
    loop {
        let n = (4.0 / h) as usize;
        let mut s = hpi * f(a + half);
        for i in 1..=n {
            s += pair(i as f64 * h);
        }
        let est = half * h * s;
        if (est - prev).abs() <= 1e-14 * est.abs() || h < 1e-4 {
            return est;
        }
        prev = est;
        h *= 0.5;
    }
}

/// `∫₀ˣ t^λ (1−t)^α dt`, split at `x/2`.
pub fn kernel_oracle(lambda: f64, alpha: f64, x: f64) -> f64 {
    let g = |t: f64| t.powf(lambda) * (1.0 - t).powf(alpha);
    tanh_sinh(g, 0.0, 0.5 * x) + tanh_sinh(g, 0.5 * x, x)
}
