use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Jacobi parameters (α, β) with ρ = α + β + 1.
///
/// The strict constructor requires α > 1/2 and α > β > −1/2. The relaxed
/// one admits the boundary α = 1/2, β = −1/2 (real hyperbolic 3-space,
/// where everything has a closed form) and records that it did so.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParameters", into = "RawParameters")]
pub struct JacobiParameters {
    alpha: f64,
    beta: f64,
    rho: f64,
    relaxed: bool,
}

#[derive(Serialize, Deserialize)]
struct RawParameters {
    alpha: f64,
    beta: f64,
    #[serde(default)]
    relaxed: bool,
}

impl TryFrom<RawParameters> for JacobiParameters {
    type Error = Error;
    fn try_from(r: RawParameters) -> Result<Self> {
        if r.relaxed {
            JacobiParameters::relaxed(r.alpha, r.beta)
        } else {
            JacobiParameters::new(r.alpha, r.beta)
        }
    }
}

impl From<JacobiParameters> for RawParameters {
    fn from(p: JacobiParameters) -> Self {
        RawParameters {
            alpha: p.alpha,
            beta: p.beta,
            relaxed: p.relaxed,
        }
    }
}

impl JacobiParameters {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Parameter("α and β must be finite".into()));
        }
        if !(alpha > 0.5) {
            return Err(Error::Parameter(format!("α = {alpha} must exceed 1/2")));
        }
        if !(alpha > beta && beta > -0.5) {
            return Err(Error::Parameter(format!(
                "need α > β > −1/2, got α = {alpha}, β = {beta}"
            )));
        }
        Ok(Self::build(alpha, beta, false))
    }

    /// Allows α ≥ 1/2 and β ≥ −1/2. The result carries a warning flag
    /// whenever a boundary value was actually used.
    pub fn relaxed(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) {
            return Err(Error::Parameter("α and β must be finite".into()));
        }
        if !(alpha >= 0.5 && alpha > beta && beta >= -0.5) {
            return Err(Error::Parameter(format!(
                "relaxed mode needs α ≥ 1/2 and α > β ≥ −1/2, got α = {alpha}, β = {beta}"
            )));
        }
        let boundary = alpha == 0.5 || beta == -0.5;
        Ok(Self::build(alpha, beta, boundary))
    }

    fn build(alpha: f64, beta: f64, relaxed: bool) -> Self {
        JacobiParameters {
            alpha,
            beta,
            rho: alpha + beta + 1.0,
            relaxed,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// True when the parameters sit outside the standing hypothesis and were
    /// only admitted by the relaxed constructor.
    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// (α, β) = (1/2, −1/2): φ_λ(t) = sin(λt)/(λ sinh t), c(λ) = 1/(iλ).
    pub fn h3() -> Self {
        Self::build(0.5, -0.5, true)
    }

    pub fn generic() -> Self {
        Self::build(1.2, 0.3, false)
    }

    pub fn damek_ricci_like() -> Self {
        Self::build(1.5, 0.5, false)
    }
}

/// Named parameter presets understood by the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    H3,
    Generic,
    DamekRicciLike,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::H3, Preset::Generic, Preset::DamekRicciLike];

    pub fn params(self) -> JacobiParameters {
        match self {
            Preset::H3 => JacobiParameters::h3(),
            Preset::Generic => JacobiParameters::generic(),
            Preset::DamekRicciLike => JacobiParameters::damek_ricci_like(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::H3 => "h3",
            Preset::Generic => "generic",
            Preset::DamekRicciLike => "damek-ricci-like",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown preset {s:?}")))
    }
}

/// A spectral parameter inside the strip |Im λ| < ρ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripPoint {
    lambda: C64,
}

impl StripPoint {
    pub fn new(params: &JacobiParameters, lambda: C64) -> Result<Self> {
        if !(lambda.re.is_finite() && lambda.im.is_finite()) {
            return Err(Error::domain("strip point must be finite"));
        }
        if lambda.im.abs() >= params.rho() {
            return Err(Error::domain(format!(
                "|Im λ| = {} is not below ρ = {}",
                lambda.im.abs(),
                params.rho()
            )));
        }
        Ok(StripPoint { lambda })
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }
}
