use super::{jacobi_phi, ln_weight_density};
use crate::error::{Error, Result};
use crate::params::JacobiParameters;
use crate::quadrature::gauss_legendre_on;
use crate::specfun::{bessel_script_j, ln_gamma};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Default radius of the local region.
pub const DEFAULT_R0: f64 = 1.1;
/// Default outer cutoff radius.
pub const DEFAULT_R1: f64 = 1.22;

/// coth s − 1/s
fn coth_minus_inv(s: f64) -> f64 {
    if s < 0.1 {
        let s2 = s * s;
        s * (1.0 / 3.0 - s2 * (1.0 / 45.0 - s2 * (2.0 / 945.0 - s2 * (1.0 / 4725.0 - s2 * 2.0 / 93555.0))))
    } else {
        1.0 / s.tanh() - 1.0 / s
    }
}

/// 1/s² − csch²s
fn inv_sq_minus_csch_sq(s: f64) -> f64 {
    if s < 0.1 {
        let s2 = s * s;
        1.0 / 3.0 - s2 * (1.0 / 15.0 - s2 * (2.0 / 189.0 - s2 * (1.0 / 675.0 - s2 * 2.0 / 10395.0)))
    } else {
        1.0 / (s * s) - 1.0 / s.sinh().powi(2)
    }
}

/// Potential left over after conjugating the radial operator by Δ^{1/2}
/// and removing the Bessel part (α² − 1/4)/s².
fn potential(params: &JacobiParameters, s: f64) -> f64 {
    let a = 2.0 * params.alpha() + 1.0;
    let b = 2.0 * params.beta() + 1.0;
    let r = a * coth_minus_inv(s) + b * s.tanh();
    let r_over_2s = (a * coth_minus_inv(s) / s + b * s.tanh() / s) / 2.0;
    let rp = a * inv_sq_minus_csch_sq(s) + b / s.cosh().powi(2);
    a * r_over_2s + r * r / 4.0 + rp / 2.0 - params.rho().powi(2)
}

/// Second coefficient of the local expansion, a_1(t) = (1/2t) ∫_0^t U(s) ds.
pub fn a1_coefficient(params: &JacobiParameters, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("a_1(t) needs t > 0, got {t}")));
    }
    let (x, w) = gauss_legendre_on(24, 0.0, t);
    let integral: f64 = x.iter().zip(&w).map(|(&s, &wi)| wi * potential(params, s)).sum();
    Ok(integral / (2.0 * t))
}

/// a_1(0) = (2α+1)(α+1)/6 + (2β+1)(α+1)/2 − ρ²/2, from matching Taylor
/// coefficients of both sides of the expansion at t = 0.
pub fn a1_at_origin(params: &JacobiParameters) -> f64 {
    let (a, b) = (params.alpha(), params.beta());
    (2.0 * a + 1.0) * (a + 1.0) / 6.0 + (2.0 * b + 1.0) * (a + 1.0) / 2.0 - params.rho().powi(2) / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalExpansion {
    pub truncation: f64,
    pub phi: f64,
    /// φ_λ(t) minus the truncation.
    pub error: f64,
}

/// Local Bessel expansion of φ_λ near the origin,
/// c_α t^{α+1/2} Δ(t)^{−1/2} Σ_{m<terms} a_m(t) t^{2m} 𝒥_{m+α}(λt),
/// with c_α = 2^{ρ+α} Γ(α+1), a_0 = 1 and `terms` ∈ {1, 2}.
pub fn bessel_local_expansion(params: &JacobiParameters, lambda: f64, t: f64, terms: usize) -> Result<LocalExpansion> {
    bessel_local_expansion_with(params, lambda, t, terms, DEFAULT_R0)
}

pub fn bessel_local_expansion_with(
    params: &JacobiParameters,
    lambda: f64,
    t: f64,
    terms: usize,
    r0: f64,
) -> Result<LocalExpansion> {
    if !(t > 0.0 && t <= r0) {
        return Err(Error::domain(format!("local expansion needs t ∈ (0, {r0}], got {t}")));
    }
    if !(terms == 1 || terms == 2) {
        return Err(Error::Parameter(format!("local expansion supports 1 or 2 terms, got {terms}")));
    }
    if !lambda.is_finite() {
        return Err(Error::domain("spectral parameter must be finite"));
    }
    let alpha = params.alpha();
    let ln_c = (params.rho() + alpha) * std::f64::consts::LN_2 + ln_gamma(C64::new(alpha + 1.0, 0.0))?.re;
    let pref = (ln_c + (alpha + 0.5) * t.ln() - 0.5 * ln_weight_density(params, t)).exp();
    let x = (lambda * t).abs();
    let mut sum = bessel_script_j(alpha, x)?;
    if terms == 2 {
        sum += a1_coefficient(params, t)? * t * t * bessel_script_j(alpha + 1.0, x)?;
    }
    let truncation = pref * sum;
    let phi = jacobi_phi(params, C64::new(lambda, 0.0), t)?.re;
    Ok(LocalExpansion {
        truncation,
        phi,
        error: phi - truncation,
    })
}
