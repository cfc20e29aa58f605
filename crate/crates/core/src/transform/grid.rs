use crate::error::{Error, Result};
use crate::jacobi_core::{ln_weight_density, plancherel_density};
use crate::params::JacobiParameters;
use crate::quadrature::gauss_legendre;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::Arc;

/// Default radial cutoff.
pub const DEFAULT_T_MAX: f64 = 20.0;
/// Default spectral cutoff.
pub const DEFAULT_LAMBDA_MAX: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialScheme {
    /// Gauss-Legendre panels with quadratically graded edges T(i/P)².
    GradedGauss,
    UniformTrapezoid,
}

fn fingerprint(tag: &str, params: &JacobiParameters, nodes: &[f64], weights: &[f64]) -> u64 {
    let mut h = DefaultHasher::new();
    tag.hash(&mut h);
    params.alpha().to_bits().hash(&mut h);
    params.beta().to_bits().hash(&mut h);
    for v in nodes.iter().chain(weights) {
        v.to_bits().hash(&mut h);
    }
    h.finish()
}

/// Quadrature nodes in (0, T_max] with weights for ∫ · dμ.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    params: JacobiParameters,
    pub nodes: Vec<f64>,
    pub mu_weights: Vec<f64>,
    /// Plain dt weights (mu_weights without the density).
    pub dt_weights: Vec<f64>,
    pub t_max: f64,
    pub scheme: RadialScheme,
    /// Panels of `order` consecutive nodes (graded scheme only) with their
    /// barycentric interpolation weights.
    panels: usize,
    order: usize,
    bary: Vec<f64>,
    id: u64,
}

impl RadialGrid {
    fn assemble(params: &JacobiParameters, t_max: f64, scheme: RadialScheme, nodes: Vec<f64>, dt: Vec<f64>) -> Result<Self> {
        let mu: Vec<f64> = nodes
            .iter()
            .zip(&dt)
            .map(|(&t, &w)| w * ln_weight_density(params, t).exp())
            .collect();
        if mu.iter().any(|w| !w.is_finite()) {
            return Err(Error::Overflow(format!("Δ overflows below T_max = {t_max}")));
        }
        let id = fingerprint("radial", params, &nodes, &dt);
        Ok(RadialGrid {
            params: *params,
            nodes,
            mu_weights: mu,
            dt_weights: dt,
            t_max,
            scheme,
            panels: 0,
            order: 0,
            bary: Vec::new(),
            id,
        })
    }

    /// `panels` Gauss-Legendre panels of `order` points on [0, T_max],
    /// panel i spanning T((i/P)², ((i+1)/P)²).
    pub fn graded_gauss(params: &JacobiParameters, t_max: f64, panels: usize, order: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || panels == 0 || order == 0 {
            return Err(Error::Parameter("radial grid needs T_max > 0 and at least one panel and node".into()));
        }
        let (x, w) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(panels * order);
        let mut dt = Vec::with_capacity(panels * order);
        let p = panels as f64;
        for i in 0..panels {
            let a = t_max * (i as f64 / p).powi(2);
            let b = t_max * ((i + 1) as f64 / p).powi(2);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(0.5 * (a + b) + 0.5 * (b - a) * xi);
                dt.push(0.5 * (b - a) * wi);
            }
        }
        let mut g = Self::assemble(params, t_max, RadialScheme::GradedGauss, nodes, dt)?;
        g.panels = panels;
        g.order = order;
        // barycentric weights of Gauss-Legendre nodes: (−1)^j √((1−x_j²) w_j)
        g.bary = x
            .iter()
            .zip(&w)
            .enumerate()
            .map(|(j, (xj, wj))| if j % 2 == 0 { 1.0 } else { -1.0 } * ((1.0 - xj * xj) * wj).sqrt())
            .collect();
        Ok(g)
    }

    /// Nodes iT/N, i = 1..N, trapezoid weights (Δ vanishes at 0).
    pub fn uniform_trapezoid(params: &JacobiParameters, t_max: f64, n: usize) -> Result<Self> {
        if !(t_max > 0.0 && t_max.is_finite()) || n < 2 {
            return Err(Error::Parameter("trapezoid grid needs T_max > 0 and n ≥ 2".into()));
        }
        let h = t_max / n as f64;
        let nodes: Vec<f64> = (1..=n).map(|i| h * i as f64).collect();
        let mut dt = vec![h; n];
        dt[n - 1] = 0.5 * h;
        Self::assemble(params, t_max, RadialScheme::UniformTrapezoid, nodes, dt)
    }

    /// T_max = 20, 400 graded panels of 8 points.
    pub fn standard(params: &JacobiParameters) -> Result<Self> {
        Self::graded_gauss(params, DEFAULT_T_MAX, 400, 8)
    }

    pub fn params(&self) -> &JacobiParameters {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Identity of the node/weight set, used to key cached matrices.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn sample(self: &Arc<Self>, f: impl Fn(f64) -> C64) -> SampledRadialFunction {
        SampledRadialFunction {
            grid: Arc::clone(self),
            values: self.nodes.iter().map(|&t| f(t)).collect(),
        }
    }

    /// Value at `z` of the interpolant of `values` (one per node): the
    /// panel's Lagrange polynomial on graded grids, a six-point local
    /// Lagrange polynomial on uniform ones. Even across the origin and zero
    /// beyond T_max.
    pub fn interpolate(&self, values: &[C64], z: f64) -> C64 {
        let z = z.abs();
        if z > self.t_max || self.nodes.is_empty() {
            return C64::new(0.0, 0.0);
        }
        if self.panels > 0 {
            let p = self.panels as f64;
            let k = ((p * (z / self.t_max).sqrt()) as usize).min(self.panels - 1);
            let lo = k * self.order;
            barycentric(&self.nodes[lo..lo + self.order], &self.bary, &values[lo..lo + self.order], z)
        } else {
            let n = self.nodes.len();
            let pos = self.nodes.partition_point(|&t| t < z);
            // window of six, reflected through the origin when needed
            let start = pos as isize - 3;
            let start = start.min(n as isize - 6);
            let mut xs = [0.0; 6];
            let mut vs = [C64::new(0.0, 0.0); 6];
            for m in 0..6 {
                let idx = start + m as isize;
                if idx >= 0 {
                    xs[m] = self.nodes[idx as usize];
                    vs[m] = values[idx as usize];
                } else {
                    let r = (-idx - 1) as usize;
                    xs[m] = -self.nodes[r];
                    vs[m] = values[r];
                }
            }
            let mut bw = [1.0; 6];
            for j in 0..6 {
                for k in 0..6 {
                    if j != k {
                        bw[j] /= xs[j] - xs[k];
                    }
                }
            }
            barycentric(&xs, &bw, &vs, z)
        }
    }
}

fn barycentric(xs: &[f64], bw: &[f64], vs: &[C64], z: f64) -> C64 {
    let mut num = C64::new(0.0, 0.0);
    let mut den = 0.0;
    for ((&x, &w), &v) in xs.iter().zip(bw).zip(vs) {
        let d = z - x;
        if d == 0.0 {
            return v;
        }
        let c = w / d;
        num += c * v;
        den += c;
    }
    num / den
}

/// Quadrature nodes in [0, Λ_max] with weights for ∫ · dν, where
/// dν(λ) = (2π)^{−1} d(λ) dλ.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    params: JacobiParameters,
    pub nodes: Vec<f64>,
    pub nu_weights: Vec<f64>,
    /// Plain dλ weights.
    pub base_weights: Vec<f64>,
    pub lambda_max: f64,
    id: u64,
}

impl SpectralGrid {
    fn assemble(params: &JacobiParameters, lambda_max: f64, nodes: Vec<f64>, base: Vec<f64>) -> Result<Self> {
        let mut nu = Vec::with_capacity(nodes.len());
        for (&l, &w) in nodes.iter().zip(&base) {
            nu.push(w * plancherel_density(params, l)? / (2.0 * PI));
        }
        let id = fingerprint("spectral", params, &nodes, &base);
        Ok(SpectralGrid {
            params: *params,
            nodes,
            nu_weights: nu,
            base_weights: base,
            lambda_max,
            id,
        })
    }

    pub fn gauss(params: &JacobiParameters, lambda_max: f64, panels: usize, order: usize) -> Result<Self> {
        if !(lambda_max > 0.0 && lambda_max.is_finite()) || panels == 0 || order == 0 {
            return Err(Error::Parameter("spectral grid needs Λ_max > 0 and at least one panel and node".into()));
        }
        let (x, w) = gauss_legendre(order);
        let h = lambda_max / panels as f64;
        let mut nodes = Vec::with_capacity(panels * order);
        let mut base = Vec::with_capacity(panels * order);
        for i in 0..panels {
            let mid = h * (i as f64 + 0.5);
            for (xi, wi) in x.iter().zip(&w) {
                nodes.push(mid + 0.5 * h * xi);
                base.push(0.5 * h * wi);
            }
        }
        Self::assemble(params, lambda_max, nodes, base)
    }

    /// Nodes jΛ/N, j = 1..N, trapezoid weights (d vanishes at 0).
    pub fn trapezoid(params: &JacobiParameters, lambda_max: f64, n: usize) -> Result<Self> {
        if !(lambda_max > 0.0 && lambda_max.is_finite()) || n < 2 {
            return Err(Error::Parameter("trapezoid grid needs Λ_max > 0 and n ≥ 2".into()));
        }
        let h = lambda_max / n as f64;
        let nodes: Vec<f64> = (1..=n).map(|j| h * j as f64).collect();
        let mut base = vec![h; n];
        base[n - 1] = 0.5 * h;
        Self::assemble(params, lambda_max, nodes, base)
    }

    /// Λ_max = 50, 120 panels of 10 points (1200 nodes).
    pub fn standard(params: &JacobiParameters) -> Result<Self> {
        Self::gauss(params, DEFAULT_LAMBDA_MAX, 120, 10)
    }

    pub fn params(&self) -> &JacobiParameters {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn sample(self: &Arc<Self>, g: impl Fn(f64) -> C64) -> SampledSpectralFunction {
        SampledSpectralFunction {
            grid: Arc::clone(self),
            values: self.nodes.iter().map(|&l| g(l)).collect(),
        }
    }
}

/// Values of a radial function at the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledRadialFunction {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<C64>,
}

/// Values of a spectral function at the nodes of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSpectralFunction {
    pub grid: Arc<SpectralGrid>,
    pub values: Vec<C64>,
}

fn check_finite(values: &[C64]) -> Result<()> {
    if values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::domain("sampled function has non-finite values"));
    }
    Ok(())
}

impl SampledRadialFunction {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for {} nodes", values.len(), grid.len())));
        }
        check_finite(&values)?;
        Ok(SampledRadialFunction { grid, values })
    }

    /// ‖f‖ in L^p(dμ) by the grid quadrature; p = ∞ gives the max over nodes.
    pub fn norm(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        }
        let s: f64 = self.values.iter().zip(&self.grid.mu_weights).map(|(v, w)| w * v.norm().powf(p)).sum();
        s.powf(1.0 / p)
    }

    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().zip(&self.grid.mu_weights).map(|(v, w)| w * v.norm_sqr()).sum();
        s.sqrt()
    }

    /// ‖self − other‖_{L²(dμ)} / ‖other‖_{L²(dμ)}.
    pub fn relative_l2_distance(&self, other: &SampledRadialFunction) -> Result<f64> {
        same_radial(&self.grid, &other.grid)?;
        let diff: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .zip(&self.grid.mu_weights)
            .map(|((a, b), w)| w * (a - b).norm_sqr())
            .sum();
        let n = other.l2_norm();
        if n == 0.0 {
            return Err(Error::ZeroFunction);
        }
        Ok(diff.sqrt() / n)
    }

    pub fn at(&self, z: f64) -> C64 {
        self.grid.interpolate(&self.values, z)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        SampledRadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// a·self + b·other
    pub fn combine(&self, a: C64, other: &Self, b: C64) -> Result<Self> {
        same_radial(&self.grid, &other.grid)?;
        Ok(SampledRadialFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect(),
        })
    }
}

impl SampledSpectralFunction {
    pub fn new(grid: Arc<SpectralGrid>, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch(format!("{} values for {} nodes", values.len(), grid.len())));
        }
        check_finite(&values)?;
        Ok(SampledSpectralFunction { grid, values })
    }

    /// ‖g‖_{L²(dν)}
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().zip(&self.grid.nu_weights).map(|(v, w)| w * v.norm_sqr()).sum();
        s.sqrt()
    }

    pub fn map(&self, f: impl Fn(f64, C64) -> C64) -> Self {
        SampledSpectralFunction {
            grid: Arc::clone(&self.grid),
            values: self.grid.nodes.iter().zip(&self.values).map(|(&l, &v)| f(l, v)).collect(),
        }
    }

    /// Pointwise product.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.grid.id() != other.grid.id() {
            return Err(Error::GridMismatch("spectral functions live on different grids".into()));
        }
        Ok(SampledSpectralFunction {
            grid: Arc::clone(&self.grid),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }
}

pub(crate) fn same_radial(a: &RadialGrid, b: &RadialGrid) -> Result<()> {
    if a.id() != b.id() {
        return Err(Error::GridMismatch("radial functions live on different grids".into()));
    }
    Ok(())
}
