//! Generalized translation, hypergroup convolution and Young-inequality
//! checks.

mod kernel;

pub use kernel::{kernel_k, KernelEvaluation, TranslationKernel};

use crate::error::{Error, Result};
use crate::jacobi_core::ln_weight_density;
use crate::params::JacobiParameters;
use crate::quadrature::tanh_sinh_on;
use crate::transform::{SampledRadialFunction, RadialGrid};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Inner quadrature over the support interval (|x−y|, x+y) and the cost
/// guard for double integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionConfig {
    /// Tanh-sinh step; nodes cluster at both support edges, where the
    /// kernel behaves like a power of the distance to the edge.
    pub step: f64,
    /// Largest grid accepted by [`convolve_with`].
    pub max_nodes: usize,
}

impl Default for ConvolutionConfig {
    fn default() -> Self {
        ConvolutionConfig {
            step: 1.0 / 12.0,
            max_nodes: 400,
        }
    }
}

impl ConvolutionConfig {
    fn rule(&self, lo: f64, hi: f64) -> Vec<(f64, f64, f64, f64)> {
        let levels = (3.4 / self.step).ceil() as usize;
        tanh_sinh_on(lo, hi, self.step, levels)
    }
}

/// τ_x f(y) = ∫ f(z) K(x,y,z) dμ(z) for a function given pointwise.
pub fn translate_fn(
    kernel: &TranslationKernel,
    f: impl Fn(f64) -> C64,
    x: f64,
    y: f64,
    cfg: &ConvolutionConfig,
) -> Result<C64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::domain(format!("translation needs x, y > 0, got ({x}, {y})")));
    }
    let params = *kernel.params();
    let mut acc = C64::new(0.0, 0.0);
    for (z, da, db, w) in cfg.rule((x - y).abs(), x + y) {
        let lk = kernel.ln_value_edges(x, y, da, db)?;
        acc += f(z) * (w * (lk + ln_weight_density(&params, z)).exp());
    }
    Ok(acc)
}

/// τ_x f at every node of f's grid; f between nodes by interpolation.
pub fn translate(params: &JacobiParameters, f: &SampledRadialFunction, x: f64) -> Result<SampledRadialFunction> {
    translate_with(params, f, x, &ConvolutionConfig::default())
}

pub fn translate_with(
    params: &JacobiParameters,
    f: &SampledRadialFunction,
    x: f64,
    cfg: &ConvolutionConfig,
) -> Result<SampledRadialFunction> {
    check(params, &f.grid)?;
    let kernel = TranslationKernel::new(params)?;
    let values = f
        .grid
        .nodes
        .iter()
        .map(|&y| translate_fn(&kernel, |z| f.at(z), x, y, cfg))
        .collect::<Result<Vec<_>>>()?;
    SampledRadialFunction::new(Arc::clone(&f.grid), values)
}

fn check(params: &JacobiParameters, grid: &RadialGrid) -> Result<()> {
    if params != grid.params() {
        return Err(Error::GridMismatch("grid was built for different parameters".into()));
    }
    Ok(())
}

/// f⋆g(x) = ∫ f(y) τ_x g(y) dμ(y) at every node x of the common grid.
pub fn convolve(params: &JacobiParameters, f: &SampledRadialFunction, g: &SampledRadialFunction) -> Result<SampledRadialFunction> {
    convolve_with(params, f, g, &ConvolutionConfig::default())
}

pub fn convolve_with(
    params: &JacobiParameters,
    f: &SampledRadialFunction,
    g: &SampledRadialFunction,
    cfg: &ConvolutionConfig,
) -> Result<SampledRadialFunction> {
    check(params, &f.grid)?;
    if f.grid.id() != g.grid.id() {
        return Err(Error::GridMismatch("convolution factors live on different grids".into()));
    }
    let n = f.grid.len();
    if n > cfg.max_nodes {
        return Err(Error::Budget(format!(
            "{n} nodes exceed the double-quadrature budget of {}",
            cfg.max_nodes
        )));
    }
    let kernel = TranslationKernel::new(params)?;
    let grid = &f.grid;
    let mut out = Vec::with_capacity(n);
    for &x in &grid.nodes {
        let mut acc = C64::new(0.0, 0.0);
        for ((&y, fy), w) in grid.nodes.iter().zip(&f.values).zip(&grid.mu_weights) {
            if *fy == C64::new(0.0, 0.0) {
                continue;
            }
            acc += fy * w * translate_fn(&kernel, |z| g.at(z), x, y, cfg)?;
        }
        out.push(acc);
    }
    SampledRadialFunction::new(Arc::clone(grid), out)
}

/// Both sides of ‖f⋆g‖_r ≤ ‖f‖_p ‖g‖_q.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YoungReport {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// ratio ≤ 1 + 1e-3 (quadrature slack)
    pub holds: bool,
}

/// r with 1/p + 1/q − 1 = 1/r (∞ when the sum is exactly 1).
pub fn young_exponent(p: f64, q: f64) -> Result<f64> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(Error::Exponent(format!("need p, q ≥ 1, got p = {p}, q = {q}")));
    }
    let inv = 1.0 / p + 1.0 / q - 1.0;
    if inv < 0.0 {
        return Err(Error::Exponent(format!("1/p + 1/q − 1 = {inv} < 0 has no exponent r ≥ 1")));
    }
    Ok(if inv == 0.0 { f64::INFINITY } else { 1.0 / inv })
}

pub fn young_check(
    params: &JacobiParameters,
    f: &SampledRadialFunction,
    g: &SampledRadialFunction,
    p: f64,
    q: f64,
) -> Result<YoungReport> {
    let r = young_exponent(p, q)?;
    let fg = convolve(params, f, g)?;
    let lhs = fg.norm(r);
    let rhs = f.norm(p) * g.norm(q);
    if rhs == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let ratio = lhs / rhs;
    Ok(YoungReport {
        p,
        q,
        r,
        lhs,
        rhs,
        ratio,
        holds: ratio <= 1.0 + 1e-3,
    })
}
