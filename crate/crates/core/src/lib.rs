//! Weighted area integral means of analytic functions on the unit disk and
//! their logarithmic convexity.
//!
//! For `f` analytic in the disk, `p > 0` and a real weight exponent `α`,
//!
//! ```text
//! M_{p,α}(f, r) = ∫_{|z|<r} |f|^p (1−|z|²)^α dA  /  ∫_{|z|<r} (1−|z|²)^α dA.
//! ```
//!
//! The crate evaluates these means (exactly for monomials and for `p = 2`
//! Taylor polynomials, by quadrature otherwise), decides whether
//! `log M` is convex in `log r`, and evaluates the auxiliary functions used
//! to establish convexity for `p = 2, −3 ≤ α ≤ 0`.
//!
//! All routines are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the common double-precision case.

// `!(a > b)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexity;
pub mod diagnostics;
pub mod error;
pub mod kernels;
pub mod means;
pub mod quadrature;
pub mod scalar;

pub use convexity::{Classification, ConvexityProfile, SignChange};
pub use diagnostics::{ClaimStatus, DiagnosticReport};
pub use error::{Error, Result};
pub use kernels::{KernelBundle, KernelOptions, KernelParams, Route};
pub use means::{MeanParams, TaylorCoefficients};
pub use scalar::Scalar;

pub type KernelParams64 = KernelParams<f64>;
pub type KernelBundle64 = KernelBundle<f64>;
pub type KernelOptions64 = KernelOptions<f64>;
pub type TaylorCoefficients64 = TaylorCoefficients<f64>;
pub type MeanParams64 = MeanParams<f64>;
pub type ConvexityProfile64 = ConvexityProfile<f64>;
pub type DiagnosticReport64 = DiagnosticReport<f64>;
pub type Complex64 = num_complex::Complex<f64>;
