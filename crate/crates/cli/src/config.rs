//! Parameter and grid flags, and the run configuration they resolve to.

use crate::failure::Failure;
use clap::Args;
use jacobi::jacobi_core::DEFAULT_R0;
use jacobi::specfun::PrecisionConfig;
use jacobi::transform::GridSpec;
use jacobi::{JacobiParameters, Preset};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Args, Debug, Clone)]
pub struct ParamArgs {
    /// h3, generic or damek-ricci-like
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    pub preset: Option<Preset>,
    #[arg(long, requires = "beta", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha", allow_negative_numbers = true)]
    pub beta: Option<f64>,
}

impl ParamArgs {
    /// Explicit α, β are validated strictly first; boundary values fall back
    /// to relaxed mode with a warning. No flags means the generic preset.
    pub fn resolve(&self) -> Result<JacobiParameters, Failure> {
        match (self.preset, self.alpha, self.beta) {
            (Some(p), _, _) => Ok(p.params()),
            (None, Some(a), Some(b)) => match JacobiParameters::new(a, b) {
                Ok(p) => Ok(p),
                Err(strict) => {
                    let p = JacobiParameters::relaxed(a, b).map_err(|_| Failure::from(strict))?;
                    eprintln!("warning: (α, β) = ({a}, {b}) is on the boundary, using relaxed mode");
                    Ok(p)
                }
            },
            _ => Ok(Preset::Generic.params()),
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct GridArgs {
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub radial_panels: Option<usize>,
    #[arg(long)]
    pub lambda_max: Option<f64>,
    #[arg(long)]
    pub spectral_panels: Option<usize>,
}

impl GridArgs {
    pub fn over(&self, base: GridSpec) -> Result<GridSpec, Failure> {
        let spec = GridSpec {
            t_max: self.t_max.unwrap_or(base.t_max),
            radial_panels: self.radial_panels.unwrap_or(base.radial_panels),
            lambda_max: self.lambda_max.unwrap_or(base.lambda_max),
            spectral_panels: self.spectral_panels.unwrap_or(base.spectral_panels),
            ..base
        };
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if !(ok(spec.t_max) && ok(spec.lambda_max) && spec.radial_panels > 0 && spec.spectral_panels > 0) {
            return Err(Failure::Domain("grid sizes must be positive".into()));
        }
        Ok(spec)
    }
}

/// Grid pair used by `convolve`: the double quadrature is quadratic in the
/// number of radial nodes, so the default transform grid is far too large.
pub fn convolution_grid() -> GridSpec {
    GridSpec {
        t_max: 8.0,
        radial_panels: 30,
        radial_order: 8,
        lambda_max: 40.0,
        spectral_panels: 80,
        spectral_order: 10,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ParamsRecord {
    pub alpha: f64,
    pub beta: f64,
    pub relaxed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Cutoffs {
    pub r0: f64,
}

/// Everything that determines the bytes of an output. The output directory
/// is deliberately left out of the hash.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: ParamsRecord,
    pub grids: Option<GridSpec>,
    pub cutoffs: Cutoffs,
    pub precision: PrecisionConfig,
    pub seed: Option<u64>,
    pub args: serde_json::Value,
}

impl RunConfig {
    pub fn new(command: &str, params: &JacobiParameters, grids: Option<GridSpec>, args: serde_json::Value) -> Self {
        RunConfig {
            command: command.to_string(),
            params: ParamsRecord {
                alpha: params.alpha(),
                beta: params.beta(),
                relaxed: params.is_relaxed(),
            },
            grids,
            cutoffs: Cutoffs { r0: DEFAULT_R0 },
            precision: PrecisionConfig::default(),
            seed: None,
            args,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(bytes))
    }

    pub fn header(&self) -> String {
        format!("jacobi {} config-sha256 {}", env!("CARGO_PKG_VERSION"), self.hash())
    }
}
