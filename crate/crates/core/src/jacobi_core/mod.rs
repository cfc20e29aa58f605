//! Jacobi functions φ_λ, the weight Δ, the c-function, Harish-Chandra
//! coefficients and the local Bessel expansion.

mod cfunction;
mod harish;
mod local;

pub use cfunction::{
    c_asymptotics_report, c_function, inverse_c_function, ln_c_function, plancherel_density, CAsymptoticsRow,
};
pub use harish::{gangolli_fit, harish_chandra_coefficients, GangolliFit, HarishChandraSeries};
pub use local::{
    a1_coefficient, a1_at_origin, bessel_local_expansion, bessel_local_expansion_with,
    LocalExpansion, DEFAULT_R0, DEFAULT_R1,
};

use crate::error::{Error, Result};
use crate::params::JacobiParameters;
use crate::specfun::{nonpositive_integer, HypergeometricPath, PrecisionConfig, ReciprocalConnection};
use num_complex::Complex64 as C64;

/// Δ(t) = (2 sinh t)^{2α+1} (2 cosh t)^{2β+1}.
pub fn weight_density(params: &JacobiParameters, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("weight density needs t > 0, got {t}")));
    }
    let v = ln_weight_density(params, t).exp();
    if !v.is_finite() {
        return Err(Error::Overflow(format!("Δ({t}) exceeds the f64 range")));
    }
    Ok(v)
}

/// ln Δ(t), usable where Δ itself would overflow.
pub fn ln_weight_density(params: &JacobiParameters, t: f64) -> f64 {
    let a = 2.0 * params.alpha() + 1.0;
    let b = 2.0 * params.beta() + 1.0;
    a * ln_two_sinh(t) + b * ln_two_cosh(t)
}

fn ln_two_sinh(t: f64) -> f64 {
    if t < 1.0 {
        (2.0 * t.sinh()).ln()
    } else {
        t + (-(-2.0 * t).exp()).ln_1p()
    }
}

fn ln_two_cosh(t: f64) -> f64 {
    t + (-2.0 * t).exp().ln_1p()
}

/// Evaluates φ_λ at many radii for one λ.
///
/// φ_λ(t) = ₂F₁((ρ−iλ)/2, (ρ+iλ)/2; α+1; −sinh²t). Near the origin, and
/// whenever the connection at infinity is ill conditioned, the value comes
/// from continuing the power series along the negative axis; further out it
/// comes from the two-term connection formula in 1/sinh²t. Radii visited in
/// increasing order reuse the continuation state.
#[derive(Debug, Clone)]
pub struct PhiEvaluator {
    lambda: C64,
    path: HypergeometricPath,
    far: Option<ReciprocalConnection>,
    far_from: f64,
}

impl PhiEvaluator {
    pub fn new(params: &JacobiParameters, lambda: C64) -> Result<Self> {
        Self::with_precision(params, lambda, &PrecisionConfig::default())
    }

    pub fn with_precision(params: &JacobiParameters, lambda: C64, prec: &PrecisionConfig) -> Result<Self> {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(Error::domain(format!("spectral parameter {lambda} is not finite")));
        }
        let i = C64::i();
        let rho = params.rho();
        let a = (rho - i * lambda) / 2.0;
        let b = (rho + i * lambda) / 2.0;
        let c = C64::new(params.alpha() + 1.0, 0.0);
        let path = HypergeometricPath::new(a, b, c, prec)?;
        let il = i * lambda;
        let off_integer = il.im.abs() >= 0.25 || (il.re - il.re.round()).abs() >= 0.25;
        let polynomial = nonpositive_integer(a, 1e-13).is_some() || nonpositive_integer(b, 1e-13).is_some();
        let far = if lambda.norm() >= 0.5 && off_integer && !polynomial {
            Some(ReciprocalConnection::new(a, b, c, prec)?)
        } else {
            None
        };
        Ok(PhiEvaluator {
            lambda,
            path,
            far,
            far_from: 2f64.max(0.25 * lambda.norm()),
        })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn eval(&mut self, t: f64) -> Result<C64> {
        if !(t >= 0.0) {
            return Err(Error::domain(format!("φ_λ(t) needs t ≥ 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(C64::new(1.0, 0.0));
        }
        let s2 = t.sinh().powi(2);
        if let Some(far) = &self.far {
            if s2 >= self.far_from {
                return far.eval_log(2.0 * (ln_two_sinh(t) - std::f64::consts::LN_2));
            }
        }
        if !s2.is_finite() {
            return Err(Error::Overflow(format!("sinh²({t}) exceeds the f64 range")));
        }
        self.path.value_at(-s2)
    }
}

/// The Jacobi function φ_λ^{(α,β)}(t).
pub fn jacobi_phi(params: &JacobiParameters, lambda: C64, t: f64) -> Result<C64> {
    PhiEvaluator::new(params, lambda)?.eval(t)
}

/// φ_λ at every radius in `ts` (any order).
pub fn jacobi_phi_row(params: &JacobiParameters, lambda: C64, ts: &[f64]) -> Result<Vec<C64>> {
    let mut ev = PhiEvaluator::new(params, lambda)?;
    let mut order: Vec<usize> = (0..ts.len()).collect();
    order.sort_by(|&i, &j| ts[i].total_cmp(&ts[j]));
    let mut out = vec![C64::new(0.0, 0.0); ts.len()];
    for i in order {
        out[i] = ev.eval(ts[i])?;
    }
    Ok(out)
}

/// |φ'' + ((2α+1) coth t + (2β+1) tanh t) φ' + (λ² + ρ²) φ| with five-point
/// central differences of step h.
pub fn laplacian_residual(params: &JacobiParameters, lambda: C64, t: f64, h: f64) -> Result<f64> {
    if !(h > 0.0 && t > 2.0 * h) {
        return Err(Error::domain(format!("residual needs t > 2h > 0, got t = {t}, h = {h}")));
    }
    let v = jacobi_phi_row(params, lambda, &[t - 2.0 * h, t - h, t, t + h, t + 2.0 * h])?;
    let d2 = (-v[4] + 16.0 * v[3] - 30.0 * v[2] + 16.0 * v[1] - v[0]) / (12.0 * h * h);
    let d1 = (-v[4] + 8.0 * v[3] - 8.0 * v[1] + v[0]) / (12.0 * h);
    let drift = (2.0 * params.alpha() + 1.0) / t.tanh() + (2.0 * params.beta() + 1.0) * t.tanh();
    let rho = params.rho();
    Ok((d2 + drift * d1 + (lambda * lambda + rho * rho) * v[2]).norm())
}
