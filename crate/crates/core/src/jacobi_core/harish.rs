use super::cfunction::c_function;
use crate::error::{Error, Result};
use crate::params::JacobiParameters;
use crate::quadrature::linear_fit;
use num_complex::Complex64 as C64;
use serde::Serialize;

const EXCEPTIONAL_TOL: f64 = 1e-10;
const OVERFLOW: f64 = 1e100;

/// Coefficients of Φ_λ(t) = e^{(iλ−ρ)t} Σ_k Γ_k(λ) e^{−2kt}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarishChandraSeries {
    #[serde(skip)]
    pub lambda: C64,
    pub coefficients: Vec<C64>,
    pub truncation_k: usize,
}

/// Γ_0 = 1 and, from the expansions of coth and tanh in e^{−2t},
///
/// Γ_k = −1/(2k(k−iλ)) Σ_{m=1}^{k} A_m (iλ − ρ − 2(k−m)) Γ_{k−m},
/// A_m = (2α+1) + (2β+1)(−1)^m.
pub fn harish_chandra_coefficients(
    params: &JacobiParameters,
    lambda: C64,
    k_max: usize,
) -> Result<HarishChandraSeries> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::domain(format!("spectral parameter {lambda} is not finite")));
    }
    let il = C64::i() * lambda;
    let rho = params.rho();
    let a_even = 2.0 * params.alpha() + 1.0 + 2.0 * params.beta() + 1.0;
    let a_odd = 2.0 * params.alpha() + 1.0 - (2.0 * params.beta() + 1.0);
    let mut g = Vec::with_capacity(k_max + 1);
    g.push(C64::new(1.0, 0.0));
    for k in 1..=k_max {
        let kf = k as f64;
        let lead = kf - il;
        if lead.norm() < EXCEPTIONAL_TOL {
            return Err(Error::Exceptional(format!("λ = {lambda} (k − iλ vanishes at k = {k})")));
        }
        let mut s = C64::new(0.0, 0.0);
        for m in 1..=k {
            let am = if m % 2 == 0 { a_even } else { a_odd };
            s += am * (il - rho - 2.0 * (k - m) as f64) * g[k - m];
        }
        let gk = -s / (2.0 * kf * lead);
        if !(gk.norm() <= OVERFLOW) {
            return Err(Error::Overflow(format!("|Γ_{k}({lambda})| exceeds 1e100")));
        }
        g.push(gk);
    }
    Ok(HarishChandraSeries {
        lambda,
        coefficients: g,
        truncation_k: k_max,
    })
}

impl HarishChandraSeries {
    /// Φ_λ(t) truncated at `truncation_k`.
    pub fn eval(&self, params: &JacobiParameters, t: f64) -> C64 {
        let q = (-2.0 * t).exp();
        // Horner in q
        let s = self.coefficients.iter().rev().fold(C64::new(0.0, 0.0), |acc, &g| acc * q + g);
        ((C64::i() * self.lambda - params.rho()) * t).exp() * s
    }

    /// φ_λ(t) = c(λ)Φ_λ(t) + c(−λ)Φ_{−λ}(t), valid for t > 0 and λ off
    /// the exceptional set.
    pub fn phi(params: &JacobiParameters, lambda: C64, t: f64, k_max: usize) -> Result<C64> {
        let plus = harish_chandra_coefficients(params, lambda, k_max)?;
        let minus = harish_chandra_coefficients(params, -lambda, k_max)?;
        Ok(c_function(params, lambda)? * plus.eval(params, t) + c_function(params, -lambda)? * minus.eval(params, t))
    }
}

/// Envelope |Γ_k(λ)| ≤ C (1+k)^d fitted over a set of λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GangolliFit {
    pub c: f64,
    pub d: f64,
    /// The least-squares slope before clamping at zero.
    pub slope: f64,
}

/// Least-squares slope of log|Γ_k| against log(1+k), clamped at zero, and
/// the smallest C making the envelope hold for every computed coefficient.
pub fn gangolli_fit(params: &JacobiParameters, k_max: usize, lambdas: &[C64]) -> Result<GangolliFit> {
    if k_max < 16 {
        return Err(Error::Parameter(format!("k_max = {k_max} must be at least 16")));
    }
    if lambdas.is_empty() {
        return Err(Error::Parameter("empty λ set".into()));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut samples = Vec::new();
    for &lam in lambdas {
        let s = harish_chandra_coefficients(params, lam, k_max)?;
        for (k, g) in s.coefficients.iter().enumerate() {
            let x = (1.0 + k as f64).ln();
            samples.push((x, g.norm()));
            if g.norm() > 0.0 {
                xs.push(x);
                ys.push(g.norm().ln());
            }
        }
    }
    let slope = if xs.len() >= 2 { linear_fit(&xs, &ys).1 } else { 0.0 };
    let d = slope.max(0.0);
    let c = samples.iter().map(|&(x, g)| g * (-d * x).exp()).fold(0.0, f64::max);
    Ok(GangolliFit { c, d, slope })
}
