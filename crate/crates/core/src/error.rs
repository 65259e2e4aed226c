use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the numerical routines.
///
/// Values are carried as `f64` regardless of the scalar type the computation
/// ran in, so the error type stays independent of it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} = {value} is outside {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("tolerance {tol:e} not reached: estimate {estimate} with error bound {error:e}")]
    Accuracy { estimate: f64, error: f64, tol: f64 },

    #[error("series did not converge after {terms} terms (partial sum {partial})")]
    SeriesDivergence { terms: usize, partial: f64 },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("outside the regime where {0}")]
    Regime(&'static str),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{quantity} = {value} left the representable range")]
    Range { quantity: &'static str, value: f64 },
}

impl Error {
    /// `Ok(v)` when `v` is finite and positive.
    pub(crate) fn positive_finite<T: crate::Scalar>(quantity: &'static str, v: T) -> crate::Result<T> {
        if v.is_finite() && v > T::zero() {
            Ok(v)
        } else {
            Err(Error::Range {
                quantity,
                value: v.as_f64(),
            })
        }
    }

    pub(crate) fn domain(name: &'static str, value: impl Into<f64>, domain: &'static str) -> Self {
        Error::Domain {
            name,
            value: value.into(),
            domain,
        }
    }
}
