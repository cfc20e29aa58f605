//! Quadrature grids, the Jacobi transform pair, Plancherel checks, the
//! heat semigroup and the radial Laplacian.
//!
//! Normalization: f̂(λ) = ∫ f φ_λ dμ and f(t) = ∫ f̂(λ) φ_λ(t) dν(λ) with
//! dν = (2π)^{−1} |c(λ)|^{−2} dλ on [0, ∞). With these constants the
//! transform is an isometry L²(dμ) → L²(dν).

mod grid;
mod io;

pub use grid::{
    RadialGrid, RadialScheme, SampledRadialFunction, SampledSpectralFunction, SpectralGrid, DEFAULT_LAMBDA_MAX,
    DEFAULT_T_MAX,
};
pub use io::{fmt_num, read_csv, write_atomic, write_csv_atomic, CsvTable};

use crate::error::{Error, Result};
use crate::jacobi_core::{jacobi_phi_row, PhiEvaluator};
use crate::params::JacobiParameters;
use crate::quadrature::finite_difference_weights;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::sync::{Arc, Mutex};

/// Relative size a sampled function may keep at the end of its grid.
pub const DECAY_LIMIT: f64 = 1e-10;

/// Dense matrix of φ_λ(t) for one (radial, spectral) grid pair.
#[derive(Debug)]
pub struct TransformPlan {
    params: JacobiParameters,
    rgrid: Arc<RadialGrid>,
    sgrid: Arc<SpectralGrid>,
    /// row j holds φ_{λ_j} at every radial node
    phi: Vec<f64>,
}

impl TransformPlan {
    pub fn new(rgrid: Arc<RadialGrid>, sgrid: Arc<SpectralGrid>) -> Result<Self> {
        let params = *rgrid.params();
        if params != *sgrid.params() {
            return Err(Error::GridMismatch("radial and spectral grids use different parameters".into()));
        }
        let nt = rgrid.len();
        let mut phi = Vec::with_capacity(nt * sgrid.len());
        for &l in &sgrid.nodes {
            let row = jacobi_phi_row(&params, C64::new(l, 0.0), &rgrid.nodes)?;
            // real λ gives real φ
            phi.extend(row.iter().map(|v| v.re));
        }
        Ok(TransformPlan { params, rgrid, sgrid, phi })
    }

    /// Shared plan for the pair, built on first use. A handful of recent
    /// plans are kept.
    pub fn cached(rgrid: &Arc<RadialGrid>, sgrid: &Arc<SpectralGrid>) -> Result<Arc<Self>> {
        static CACHE: Mutex<Vec<Arc<TransformPlan>>> = Mutex::new(Vec::new());
        const KEEP: usize = 6;
        let hit = {
            let cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
            cache
                .iter()
                .find(|p| p.rgrid.id() == rgrid.id() && p.sgrid.id() == sgrid.id())
                .cloned()
        };
        if let Some(p) = hit {
            return Ok(p);
        }
        let plan = Arc::new(TransformPlan::new(Arc::clone(rgrid), Arc::clone(sgrid))?);
        let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
        if cache.len() >= KEEP {
            cache.remove(0);
        }
        cache.push(Arc::clone(&plan));
        Ok(plan)
    }

    pub fn params(&self) -> &JacobiParameters {
        &self.params
    }
    pub fn radial(&self) -> &Arc<RadialGrid> {
        &self.rgrid
    }
    pub fn spectral(&self) -> &Arc<SpectralGrid> {
        &self.sgrid
    }

    /// φ_{λ_j}(t_i)
    pub fn phi(&self, j: usize, i: usize) -> f64 {
        self.phi[j * self.rgrid.len() + i]
    }

    /// f̂(λ_j) = Σ_i f(t_i) φ_{λ_j}(t_i) μ_i
    pub fn forward(&self, f: &SampledRadialFunction) -> Result<SampledSpectralFunction> {
        grid::same_radial(&f.grid, &self.rgrid)?;
        check_decay(&f.values)?;
        let nt = self.rgrid.len();
        let fw: Vec<C64> = f.values.iter().zip(&self.rgrid.mu_weights).map(|(v, w)| v * w).collect();
        let values = (0..self.sgrid.len())
            .map(|j| {
                let row = &self.phi[j * nt..(j + 1) * nt];
                row.iter().zip(&fw).map(|(p, v)| v * p).sum()
            })
            .collect();
        Ok(SampledSpectralFunction {
            grid: Arc::clone(&self.sgrid),
            values,
        })
    }

    /// f(t_i) = Σ_j g(λ_j) φ_{λ_j}(t_i) ν_j
    pub fn inverse(&self, g: &SampledSpectralFunction) -> Result<SampledRadialFunction> {
        if g.grid.id() != self.sgrid.id() {
            return Err(Error::GridMismatch("spectral function is not on the plan's grid".into()));
        }
        check_decay(&g.values)?;
        let nt = self.rgrid.len();
        let mut out = vec![C64::new(0.0, 0.0); nt];
        for (j, (v, w)) in g.values.iter().zip(&self.sgrid.nu_weights).enumerate() {
            let c = v * w;
            if c == C64::new(0.0, 0.0) {
                continue;
            }
            let row = &self.phi[j * nt..(j + 1) * nt];
            for (o, p) in out.iter_mut().zip(row) {
                *o += c * p;
            }
        }
        Ok(SampledRadialFunction {
            grid: Arc::clone(&self.rgrid),
            values: out,
        })
    }

    /// | ‖f‖_{L²(dμ)} − ‖f̂‖_{L²(dν)} | / ‖f‖_{L²(dμ)}
    pub fn plancherel_defect(&self, f: &SampledRadialFunction) -> Result<f64> {
        let n = f.l2_norm();
        if n == 0.0 {
            return Err(Error::ZeroFunction);
        }
        let fh = self.forward(f)?;
        Ok((n - fh.l2_norm()).abs() / n)
    }

    /// inverse(transform(f)) compared with f in relative L²(dμ).
    pub fn roundtrip_error(&self, f: &SampledRadialFunction) -> Result<f64> {
        let back = self.inverse(&self.forward(f)?)?;
        back.relative_l2_distance(f)
    }

    /// h_s = inverse of λ ↦ e^{−s(λ²+ρ²)}.
    pub fn heat_kernel(&self, s: f64) -> Result<SampledRadialFunction> {
        self.inverse(&heat_multiplier(&self.sgrid, s)?)
    }
}

fn check_decay(values: &[C64]) -> Result<()> {
    let max = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let Some(last) = values.last() else {
        return Ok(());
    };
    if max == 0.0 {
        return Ok(());
    }
    let ratio = last.norm() / max;
    if ratio >= DECAY_LIMIT {
        return Err(Error::InsufficientDecay {
            ratio,
            limit: DECAY_LIMIT,
        });
    }
    Ok(())
}

fn check_params(params: &JacobiParameters, grid_params: &JacobiParameters) -> Result<()> {
    if params != grid_params {
        return Err(Error::GridMismatch("grid was built for different parameters".into()));
    }
    Ok(())
}

/// Forward transform of `f` onto `sgrid` (plan cached per grid pair).
pub fn jacobi_transform(
    params: &JacobiParameters,
    f: &SampledRadialFunction,
    sgrid: &Arc<SpectralGrid>,
) -> Result<SampledSpectralFunction> {
    check_params(params, f.grid.params())?;
    TransformPlan::cached(&f.grid, sgrid)?.forward(f)
}

/// Inverse transform of `g` onto `rgrid` (plan cached per grid pair).
pub fn inverse_transform(
    params: &JacobiParameters,
    g: &SampledSpectralFunction,
    rgrid: &Arc<RadialGrid>,
) -> Result<SampledRadialFunction> {
    check_params(params, g.grid.params())?;
    TransformPlan::cached(rgrid, &g.grid)?.inverse(g)
}

/// Plancherel defect of `f` with spectral quadrature on `sgrid`.
pub fn plancherel_defect(params: &JacobiParameters, f: &SampledRadialFunction, sgrid: &Arc<SpectralGrid>) -> Result<f64> {
    check_params(params, f.grid.params())?;
    TransformPlan::cached(&f.grid, sgrid)?.plancherel_defect(f)
}

/// Sizes of a radial/spectral grid pair: graded Gauss panels on [0, T_max]
/// and uniform Gauss panels on [0, Λ_max].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub t_max: f64,
    pub radial_panels: usize,
    pub radial_order: usize,
    pub lambda_max: f64,
    pub spectral_panels: usize,
    pub spectral_order: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            t_max: DEFAULT_T_MAX,
            radial_panels: 400,
            radial_order: 8,
            lambda_max: DEFAULT_LAMBDA_MAX,
            spectral_panels: 120,
            spectral_order: 10,
        }
    }
}

impl GridSpec {
    /// Half the panels of the default pair in both variables.
    pub fn coarse() -> Self {
        GridSpec {
            radial_panels: 200,
            spectral_panels: 60,
            ..Self::default()
        }
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial_panels * self.radial_order
    }

    pub fn spectral_nodes(&self) -> usize {
        self.spectral_panels * self.spectral_order
    }

    pub fn build(&self, params: &JacobiParameters) -> Result<(Arc<RadialGrid>, Arc<SpectralGrid>)> {
        Ok((
            Arc::new(RadialGrid::graded_gauss(params, self.t_max, self.radial_panels, self.radial_order)?),
            Arc::new(SpectralGrid::gauss(params, self.lambda_max, self.spectral_panels, self.spectral_order)?),
        ))
    }

    /// Cached transform plan for this pair.
    pub fn plan(&self, params: &JacobiParameters) -> Result<Arc<TransformPlan>> {
        let (r, s) = self.build(params)?;
        TransformPlan::cached(&r, &s)
    }
}

/// f̂ at a single, possibly complex, spectral parameter.
pub fn transform_at(params: &JacobiParameters, f: &SampledRadialFunction, lambda: C64) -> Result<C64> {
    check_params(params, f.grid.params())?;
    let mut ev = PhiEvaluator::new(params, lambda)?;
    let mut acc = C64::new(0.0, 0.0);
    for ((&t, v), w) in f.grid.nodes.iter().zip(&f.values).zip(&f.grid.mu_weights) {
        acc += v * w * ev.eval(t)?;
    }
    Ok(acc)
}

/// λ ↦ e^{−s(λ²+ρ²)} on a spectral grid.
pub fn heat_multiplier(sgrid: &Arc<SpectralGrid>, s: f64) -> Result<SampledSpectralFunction> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::domain(format!("heat time must be positive, got {s}")));
    }
    let rho2 = sgrid.params().rho().powi(2);
    Ok(sgrid.sample(|l| C64::new((-s * (l * l + rho2)).exp(), 0.0)))
}

/// Heat kernel h_s sampled on `rgrid`, through the inverse transform on `sgrid`.
pub fn heat_kernel(
    params: &JacobiParameters,
    s: f64,
    rgrid: &Arc<RadialGrid>,
    sgrid: &Arc<SpectralGrid>,
) -> Result<SampledRadialFunction> {
    check_params(params, rgrid.params())?;
    TransformPlan::cached(rgrid, sgrid)?.heat_kernel(s)
}

/// ℒf = f'' + ((2α+1) coth t + (2β+1) tanh t) f' with five-point
/// Lagrange stencils on the (non-uniform) nodes. Near the origin the even
/// reflection f(−t) = f(t) supplies the missing neighbours.
pub fn apply_laplacian(params: &JacobiParameters, f: &SampledRadialFunction) -> Result<SampledRadialFunction> {
    check_params(params, f.grid.params())?;
    let nodes = &f.grid.nodes;
    let n = nodes.len();
    if n < 16 {
        return Err(Error::GridTooCoarse(format!("{n} nodes, need at least 16")));
    }
    let mut xs = vec![-nodes[1], -nodes[0]];
    xs.extend_from_slice(nodes);
    let mut vs = vec![f.values[1], f.values[0]];
    vs.extend_from_slice(&f.values);
    let a = 2.0 * params.alpha() + 1.0;
    let b = 2.0 * params.beta() + 1.0;
    let values = (0..n)
        .map(|i| {
            let start = i.min(xs.len() - 5);
            let t = nodes[i];
            let w = finite_difference_weights(t, &xs[start..start + 5], 2);
            let mut d1 = C64::new(0.0, 0.0);
            let mut d2 = C64::new(0.0, 0.0);
            // differences against the centre value keep constants exact
            let centre = f.values[i];
            for k in 0..5 {
                let dv = vs[start + k] - centre;
                d1 += w[1][k] * dv;
                d2 += w[2][k] * dv;
            }
            d2 + (a / t.tanh() + b * t.tanh()) * d1
        })
        .collect();
    Ok(SampledRadialFunction {
        grid: Arc::clone(&f.grid),
        values,
    })
}

/// e^{−(t−c)²/2σ²} + e^{−(t+c)²/2σ²}: an even, smooth, rapidly decaying
/// test function concentrated near t = c.
pub fn even_gaussian(center: f64, width: f64) -> impl Fn(f64) -> C64 {
    move |t| {
        let g = |x: f64| (-(x * x) / (2.0 * width * width)).exp();
        C64::new(g(t - center) + g(t + center), 0.0)
    }
}

/// (center, width) of the five test functions used for Plancherel and
/// roundtrip checks.
pub const TEST_SUITE: [(f64, f64); 5] = [(0.0, 0.5), (1.0, 0.4), (2.0, 0.5), (2.5, 0.3), (1.5, 0.8)];
