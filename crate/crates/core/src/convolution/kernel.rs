use crate::error::{Error, Result};
use crate::params::JacobiParameters;
use crate::specfun::{hyp2f1_real, ln_gamma, PrecisionConfig};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::LN_2;

pub(crate) fn ln_sinh(x: f64) -> f64 {
    if x < 20.0 {
        x.sinh().ln()
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

pub(crate) fn ln_cosh(x: f64) -> f64 {
    x.abs() - LN_2 + (-2.0 * x.abs()).exp().ln_1p()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEvaluation {
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub value: f64,
    pub in_support: bool,
}

/// The translation kernel K(s,t,u) for fixed parameters, with the Gamma
/// constant computed once.
///
/// K = C (ch s ch t ch u)^{α−β−1} (sh s sh t sh u)^{−2α} (1−B²)^{α−1/2}
///     ₂F₁(α+β, α−β; α+1/2; (1−B)/2)
/// with C = 2^{−2ρ} Γ(α+1) / (Γ(1/2) Γ(α+1/2)), which makes ∫ K(s,t,u) dμ(u) = 1.
#[derive(Debug, Clone)]
pub struct TranslationKernel {
    params: JacobiParameters,
    ln_const: f64,
    prec: PrecisionConfig,
}

impl TranslationKernel {
    pub fn new(params: &JacobiParameters) -> Result<Self> {
        let a = params.alpha();
        let lg = |x: f64| ln_gamma(C64::new(x, 0.0)).map(|v| v.re);
        let ln_const = -2.0 * params.rho() * LN_2 + lg(a + 1.0)? - lg(0.5)? - lg(a + 0.5)?;
        Ok(TranslationKernel {
            params: *params,
            ln_const,
            prec: PrecisionConfig::default(),
        })
    }

    pub fn params(&self) -> &JacobiParameters {
        &self.params
    }

    pub fn eval(&self, s: f64, t: f64, u: f64) -> Result<KernelEvaluation> {
        if !(s > 0.0 && t > 0.0 && u > 0.0) || !(s.is_finite() && t.is_finite() && u.is_finite()) {
            return Err(Error::domain(format!("kernel needs positive finite arguments, got ({s}, {t}, {u})")));
        }
        let lo = (s - t).abs();
        let hi = s + t;
        let in_support = lo < u && u < hi;
        let value = if in_support {
            self.ln_value_edges(s, t, u - lo, hi - u)?.exp()
        } else {
            0.0
        };
        Ok(KernelEvaluation {
            s,
            t,
            u,
            value,
            in_support,
        })
    }

    /// ln K(s, t, u) for u = |s−t| + da = s + t − db, both distances
    /// positive. Working from the distances keeps the vanishing factor
    /// 1 − B accurate at the support edges.
    pub fn ln_value_edges(&self, s: f64, t: f64, da: f64, db: f64) -> Result<f64> {
        let (alpha, beta) = (self.params.alpha(), self.params.beta());
        let d = (s - t).abs();
        let u = if da <= db { d + da } else { s + t - db };
        let sigma = 0.5 * (s + t + u);
        let (cs, ct, cu) = (ln_cosh(s), ln_cosh(t), ln_cosh(u));
        let lccc = cs + ct + cu;
        // 1 − ch²s − ch²t − ch²u + 2 ch s ch t ch u = 4 sh σ sh(σ−s) sh(σ−t) sh(σ−u)
        let ln_n = 2.0 * LN_2 + ln_sinh(sigma) + ln_sinh(0.5 * db) + ln_sinh(0.5 * da) + ln_sinh(0.5 * da + d);
        let ln_one_minus_b = ln_n - LN_2 - lccc;
        // B = (ch²s + ch²t + ch²u − 1) / (2 ch s ch t ch u) ≥ 0
        let b = 0.5 * ((cs - ct - cu).exp() + (ct - cs - cu).exp() + (cu - cs - ct).exp() - (-lccc).exp());
        let ln_one_minus_b2 = ln_one_minus_b + b.ln_1p();
        let x = 0.5 * ln_one_minus_b.exp();
        let f = hyp2f1_real(alpha + beta, alpha - beta, alpha + 0.5, x.min(0.5), &self.prec)?;
        let mut l = self.ln_const + (alpha - beta - 1.0) * lccc
            - 2.0 * alpha * (ln_sinh(s) + ln_sinh(t) + ln_sinh(u))
            + f.ln();
        if alpha != 0.5 {
            l += (alpha - 0.5) * ln_one_minus_b2;
        }
        Ok(l)
    }
}

/// K(s, t, u), zero outside |s−t| < u < s+t.
pub fn kernel_k(params: &JacobiParameters, s: f64, t: f64, u: f64) -> Result<KernelEvaluation> {
    TranslationKernel::new(params)?.eval(s, t, u)
}
