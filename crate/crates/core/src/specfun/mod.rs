//! Complex special functions: Gamma, the Gauss hypergeometric function on
//! the real axis, and the normalized Bessel kernel `x^{-α} J_α(x)`.
//!
//! Everything here is a pure function of its arguments and a
//! [`PrecisionConfig`].

mod bessel;
mod dd;
mod gamma;
mod hyp2f1;

pub use bessel::{
    bessel_script_j, bessel_script_j_asymptotic, bessel_script_j_series, bessel_script_j_with,
};
pub use gamma::{gamma_complex, ln_gamma};
pub use hyp2f1::{
    hyp2f1, hyp2f1_continued, hyp2f1_real, hyp2f1_reciprocal, hyp2f1_series, hyp2f1_with, HypergeometricPath,
    ReciprocalConnection,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerances shared by the series evaluators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrecisionConfig {
    /// Relative size below which a series term is dropped.
    pub series_tol: f64,
    pub max_terms: usize,
    /// Argument where the Bessel kernel switches from the ascending series
    /// to the Hankel asymptotic expansion.
    pub asymptotic_crossover: f64,
}

impl Default for PrecisionConfig {
    fn default() -> Self {
        PrecisionConfig {
            series_tol: 1e-17,
            max_terms: 4000,
            asymptotic_crossover: 18.0,
        }
    }
}

impl PrecisionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.series_tol > 0.0 && self.series_tol < 1e-6) {
            return Err(Error::Parameter(format!(
                "series_tol must lie in (0, 1e-6), got {}",
                self.series_tol
            )));
        }
        if self.max_terms < 64 {
            return Err(Error::Parameter(format!(
                "max_terms must be at least 64, got {}",
                self.max_terms
            )));
        }
        if !(self.asymptotic_crossover > 0.0 && self.asymptotic_crossover.is_finite()) {
            return Err(Error::Parameter(
                "asymptotic_crossover must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Nearest nonpositive integer to `z`, if `z` is within `tol` of one.
pub(crate) fn nonpositive_integer(z: num_complex::Complex64, tol: f64) -> Option<i64> {
    let n = z.re.round();
    if n <= 0.0 && (z.re - n).abs() <= tol * n.abs().max(1.0) && z.im.abs() <= tol {
        Some(n as i64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_precision_is_valid() {
        PrecisionConfig::default().validate().unwrap();
    }

    #[test]
    fn precision_invariants_enforced() {
        let mut p = PrecisionConfig::default();
        p.series_tol = 1e-3;
        assert!(p.validate().is_err());
        let mut p = PrecisionConfig::default();
        p.max_terms = 10;
        assert!(p.validate().is_err());
    }
}
