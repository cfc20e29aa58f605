use super::expr::Expression;
use super::omega;
use crate::error::{Error, Result};
use crate::params::JacobiParameters;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

const EVEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecayClass {
    RapidlyDecreasing,
    Bounded,
}

type EvalFn = dyn Fn(&JacobiParameters, C64) -> Result<C64> + Send + Sync;

/// A spectral multiplier m, holomorphic on the strip |Im λ| < ρ.
#[derive(Clone)]
pub struct MultiplierSpec {
    evaluate: Arc<EvalFn>,
    pub decay_class: DecayClass,
    pub label: String,
    expression: Option<String>,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSpec")
            .field("label", &self.label)
            .field("decay_class", &self.decay_class)
            .field("expression", &self.expression)
            .finish()
    }
}

impl MultiplierSpec {
    pub fn from_fn(
        label: impl Into<String>,
        decay_class: DecayClass,
        f: impl Fn(&JacobiParameters, C64) -> Result<C64> + Send + Sync + 'static,
    ) -> Self {
        MultiplierSpec {
            evaluate: Arc::new(f),
            decay_class,
            label: label.into(),
            expression: None,
        }
    }

    pub fn from_expression(label: impl Into<String>, decay_class: DecayClass, src: &str) -> Result<Self> {
        let e = Expression::parse(src)?;
        let mut spec = Self::from_fn(label, decay_class, move |p, l| e.eval(p, l));
        spec.expression = Some(src.to_string());
        Ok(spec)
    }

    /// m ≡ 1
    pub fn identity() -> Self {
        Self::from_fn("identity", DecayClass::Bounded, |_, _| Ok(C64::new(1.0, 0.0)))
    }

    /// m(λ) = e^{−s(λ²+ρ²)}
    pub fn gaussian(s: f64) -> Self {
        Self::from_fn(format!("gaussian s={s}"), DecayClass::RapidlyDecreasing, move |p, l| {
            Ok((-s * (l * l + p.rho() * p.rho())).exp())
        })
    }

    /// m(λ) = ω(0) e^{−s(λ²+ρ²)} / ω(λ). ω·m is a Gaussian whose modulus on
    /// Im λ = ρ is ω(0) e^{−s(Re λ)²}.
    pub fn damped_omega_inverse(s: f64) -> Self {
        Self::from_fn(format!("omega-inverse gaussian s={s}"), DecayClass::RapidlyDecreasing, move |p, l| {
            Ok(omega(p, C64::new(0.0, 0.0))? * (-s * (l * l + p.rho() * p.rho())).exp() / omega(p, l)?)
        })
    }

    pub fn expression(&self) -> Option<&str> {
        self.expression.as_deref()
    }

    pub fn eval(&self, params: &JacobiParameters, lambda: C64) -> Result<C64> {
        (self.evaluate)(params, lambda)
    }

    pub fn eval_real(&self, params: &JacobiParameters, lambda: f64) -> Result<C64> {
        self.eval(params, C64::new(lambda, 0.0))
    }

    /// Largest |m(λ) − m(−λ)| relative to max(1, |m|) on a real test grid.
    pub fn evenness_defect(&self, params: &JacobiParameters) -> Result<f64> {
        let mut worst = 0.0f64;
        for k in 1..=200 {
            let l = 0.1 * k as f64;
            let (a, b) = (self.eval_real(params, l)?, self.eval_real(params, -l)?);
            worst = worst.max((a - b).norm() / a.norm().max(1.0));
        }
        Ok(worst)
    }

    pub fn is_even(&self, params: &JacobiParameters) -> Result<bool> {
        Ok(self.evenness_defect(params)? <= EVEN_TOL)
    }

    /// sup |ω·m| on a lattice of the strip: Re λ ∈ [−50, 50], Im λ from 0
    /// up to 0.999ρ. Non-finite values propagate as ∞.
    pub fn strip_bound(&self, params: &JacobiParameters) -> Result<f64> {
        let rho = params.rho();
        let mut sup = 0.0f64;
        for iy in 0..=10 {
            let y = 0.999 * rho * iy as f64 / 10.0;
            for ix in -200..=200 {
                let l = C64::new(0.25 * ix as f64, y);
                let v = (omega(params, l)? * self.eval(params, l)?).norm();
                if !v.is_finite() {
                    return Ok(f64::INFINITY);
                }
                sup = sup.max(v);
            }
        }
        Ok(sup)
    }

    /// sup |m| over a real grid [0, λ_max].
    pub fn sup_real(&self, params: &JacobiParameters, lambda_max: f64) -> Result<f64> {
        let n = 4000;
        let mut sup = 0.0f64;
        for k in 0..=n {
            sup = sup.max(self.eval_real(params, lambda_max * k as f64 / n as f64)?.norm());
        }
        Ok(sup)
    }
}

/// m_s(λ) = m(λ) e^{−s(λ²+ρ²)}
pub fn heat_regularize(m: &MultiplierSpec, s: f64) -> Result<MultiplierSpec> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("regularization time must be positive, got {s}")));
    }
    let inner = m.clone();
    Ok(MultiplierSpec::from_fn(
        format!("{} regularized s={s}", m.label),
        DecayClass::RapidlyDecreasing,
        move |p, l| Ok(inner.eval(p, l)? * (-s * (l * l + p.rho() * p.rho())).exp()),
    ))
}

/// One family member as written in a JSON manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestMember {
    pub label: String,
    pub expression: String,
    #[serde(default = "default_decay")]
    pub decay_class: DecayClass,
}

fn default_decay() -> DecayClass {
    DecayClass::RapidlyDecreasing
}

/// A multiplier family given by closed-form expressions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyManifest {
    pub members: Vec<ManifestMember>,
}

impl FamilyManifest {
    pub fn parse(json: &str) -> Result<Self> {
        let m: FamilyManifest = serde_json::from_str(json).map_err(|e| Error::Parse(format!("manifest: {e}")))?;
        if m.members.is_empty() {
            return Err(Error::Parse("manifest has no members".into()));
        }
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn specs(&self) -> Result<Vec<MultiplierSpec>> {
        self.members
            .iter()
            .map(|m| MultiplierSpec::from_expression(&m.label, m.decay_class, &m.expression))
            .collect()
    }

    /// Five Gaussian-damped ω^{−1}-weighted multipliers,
    /// m(λ) = ω(0) e^{−s(λ²+ρ²)}/ω(λ), s ∈ {1/4, 1/2, 1, 2, 4}.
    pub fn standard() -> Self {
        let members = [0.25, 0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|s| ManifestMember {
                label: format!("omega-gauss-{s}"),
                expression: format!("omega(0)*exp(-{s}*(lambda^2+rho^2))/omega(lambda)"),
                decay_class: DecayClass::RapidlyDecreasing,
            })
            .collect();
        FamilyManifest { members }
    }
}
