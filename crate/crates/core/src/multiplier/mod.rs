//! Spectral multipliers: the damping factor ω, the modified multiplier
//! M = m/c(−·), boundary traces on the strip edge, smooth cutoffs, the
//! local/global kernel split, the Δ-expansion and Harish-Chandra pieces of
//! the global kernel, contour shifts, Hörmander-type checks of w, and
//! randomized operator-norm experiments.

mod expr;
mod global;
mod probe;
mod spec;


pub use expr::Expression;
pub use global::{
    contour_shift_check, delta_expansion, hc_global_pieces, ContourShift, DeltaExpansion, GlobalPieces, ShiftRow,
};
pub use probe::{
    apply_multiplier_operator, estimate_operator_norm, estimate_operator_norm_on, heat_ladder, hormander_check,
    mihlin_proxy_norm, theorem_ratio_experiment, w_report, ExperimentConfig, HeatLadder, HormanderReport,
    MihlinProxy, MultiplierApplication, OperatorNormEstimate, TheoremReport, TheoremRow, TrialSet, WReport,
    HEAT_LADDER, OUTPUT_RADIUS,
};
pub use spec::{heat_regularize, DecayClass, FamilyManifest, ManifestMember, MultiplierSpec};

use crate::error::{Error, Result};
use crate::jacobi_core::{c_function, inverse_c_function, DEFAULT_R0};
use crate::params::JacobiParameters;
use crate::transform::{inverse_transform, RadialGrid, SampledRadialFunction, SpectralGrid};
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::sync::Arc;

/// ω(λ) = (λ² + 4ρ²)^{α+1/4}, principal branch.
pub fn omega(params: &JacobiParameters, lambda: C64) -> Result<C64> {
    let rho = params.rho();
    let base = lambda * lambda + 4.0 * rho * rho;
    if base.im == 0.0 && base.re <= 0.0 {
        return Err(Error::BranchCut(format!("λ² + 4ρ² = {} at λ = {lambda}", base.re)));
    }
    Ok(base.powf(params.alpha() + 0.25))
}

/// w(λ) = ω(λ)^{−1} c(λ)^{−1}
pub fn w_function(params: &JacobiParameters, lambda: C64) -> Result<C64> {
    Ok(inverse_c_function(params, lambda)? / omega(params, lambda)?)
}

/// M(λ) = m(λ) c(−λ)^{−1}
pub fn modified_multiplier(params: &JacobiParameters, m: &MultiplierSpec, lambda: C64) -> Result<C64> {
    let v = m.eval(params, lambda)?;
    if v == C64::new(0.0, 0.0) {
        return Ok(v);
    }
    Ok(v * inverse_c_function(params, -lambda)?)
}

/// Approach distances below the boundary line.
pub const APPROACH: [f64; 4] = [1e-2, 1e-3, 1e-4, 1e-5];
const CAUCHY_TOL: f64 = 1e-8;

/// Boundary values x ↦ lim g(x + i(height − ε)), ε ↓ 0.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryTrace {
    pub height: f64,
    pub nodes: Vec<f64>,
    #[serde(skip)]
    pub samples: Vec<C64>,
    pub approach: Vec<f64>,
    /// Largest gap between the last two extrapolants, relative to max(1, |g|).
    pub cauchy_gap: f64,
}

/// Limit of g at x + i·height along the vertical approach, by polynomial
/// (Neville) extrapolation in ε to ε = 0. Returns (value, relative gap of
/// the last two extrapolants).
pub fn trace_point(g: &dyn Fn(C64) -> Result<C64>, x: f64, height: f64) -> Result<(C64, f64)> {
    if height == 0.0 {
        return Ok((g(C64::new(x, 0.0))?, 0.0));
    }
    let vals = APPROACH
        .iter()
        .map(|&e| g(C64::new(x, height - e)))
        .collect::<Result<Vec<_>>>()?;
    // Neville table; after round r, p[j] interpolates points j..=j+r at
    // ε = 0. The last round leaves p[1] as the extrapolant from the three
    // smallest ε, which is compared with the full one.
    let mut p = vals;
    for r in 1..APPROACH.len() {
        for j in 0..APPROACH.len() - r {
            let (ej, ejr) = (APPROACH[j], APPROACH[j + r]);
            p[j] = (ej * p[j + 1] - ejr * p[j]) / (ej - ejr);
        }
    }
    let (last, prev) = (p[0], p[1]);
    let gap = (last - prev).norm() / last.norm().max(1.0);
    if !last.re.is_finite() || !last.im.is_finite() {
        return Err(Error::NoConvergence(format!("non-finite boundary value at x = {x}")));
    }
    Ok((last, gap))
}

/// Boundary trace of g on the line Im λ = height at the given nodes.
pub fn boundary_trace(g: &dyn Fn(C64) -> Result<C64>, height: f64, nodes: &[f64]) -> Result<BoundaryTrace> {
    if !(height >= 0.0 && height.is_finite()) {
        return Err(Error::domain(format!("trace height must be finite and ≥ 0, got {height}")));
    }
    let mut samples = Vec::with_capacity(nodes.len());
    let mut cauchy_gap = 0.0f64;
    for &x in nodes {
        let (v, gap) = trace_point(g, x, height)?;
        if gap >= CAUCHY_TOL {
            return Err(Error::NoConvergence(format!(
                "extrapolants differ by {gap:.2e} at x = {x}, height {height}"
            )));
        }
        cauchy_gap = cauchy_gap.max(gap);
        samples.push(v);
    }
    Ok(BoundaryTrace {
        height,
        nodes: nodes.to_vec(),
        samples,
        approach: if height == 0.0 { Vec::new() } else { APPROACH.to_vec() },
        cauchy_gap,
    })
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    x * x * x * (10.0 - x * (15.0 - 6.0 * x))
}

/// Smooth even cutoffs ψ (space) and Φ (spectrum) with quintic transitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CutoffPair {
    r0: f64,
}

impl Default for CutoffPair {
    fn default() -> Self {
        CutoffPair { r0: DEFAULT_R0 }
    }
}

impl CutoffPair {
    pub fn new(r0: f64) -> Result<Self> {
        let upper = (std::f64::consts::PI / 2.0).sqrt();
        if !(r0 > 1.0 && r0 < upper) {
            return Err(Error::Parameter(format!("R0 must lie in (1, {upper:.6}), got {r0}")));
        }
        Ok(CutoffPair { r0 })
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    /// 1 on |t| ≤ √R0, 0 for |t| ≥ R0.
    pub fn psi(&self, t: f64) -> f64 {
        let inner = self.r0.sqrt();
        1.0 - smoothstep((t.abs() - inner) / (self.r0 - inner))
    }

    /// 1 on |λ| ≤ 1/R0, 0 for |λ| ≥ 2/R0.
    pub fn phi(&self, lambda: f64) -> f64 {
        let a = 1.0 / self.r0;
        1.0 - smoothstep((lambda.abs() - a) / a)
    }
}

/// k = inverse transform of m on the given grids.
pub fn kernel_from_multiplier(
    params: &JacobiParameters,
    m: &MultiplierSpec,
    rgrid: &Arc<RadialGrid>,
    sgrid: &Arc<SpectralGrid>,
) -> Result<SampledRadialFunction> {
    if m.decay_class != DecayClass::RapidlyDecreasing {
        return Err(Error::domain(format!(
            "multiplier '{}' is only bounded; regularize it with heat_regularize first",
            m.label
        )));
    }
    let values = sgrid
        .nodes
        .iter()
        .map(|&l| m.eval_real(params, l))
        .collect::<Result<Vec<_>>>()?;
    let g = crate::transform::SampledSpectralFunction::new(Arc::clone(sgrid), values)?;
    inverse_transform(params, &g, rgrid)
}

/// Distance the radial grid must extend beyond R0.
pub const SPLIT_MARGIN: f64 = 0.25;

/// (ψk, (1−ψ)k)
pub fn split_kernel(
    params: &JacobiParameters,
    k: &SampledRadialFunction,
    cutoffs: &CutoffPair,
) -> Result<(SampledRadialFunction, SampledRadialFunction)> {
    if k.grid.params() != params {
        return Err(Error::GridMismatch("kernel grid was built for different parameters".into()));
    }
    if k.grid.t_max < cutoffs.r0() + SPLIT_MARGIN {
        return Err(Error::Margin(format!(
            "grid ends at {} but the split needs t ≥ R0 + {SPLIT_MARGIN} = {}",
            k.grid.t_max,
            cutoffs.r0() + SPLIT_MARGIN
        )));
    }
    let psi: Vec<f64> = k.grid.nodes.iter().map(|&t| cutoffs.psi(t)).collect();
    let local = k.values.iter().zip(&psi).map(|(v, p)| v * p).collect();
    let global = k.values.iter().zip(&psi).map(|(v, p)| v * (1.0 - p)).collect();
    Ok((
        SampledRadialFunction::new(Arc::clone(&k.grid), local)?,
        SampledRadialFunction::new(Arc::clone(&k.grid), global)?,
    ))
}

/// P_s(λ) = (1 − Φ(λ)) |λ|^{−s} c(λ)^{−1}
pub fn p_s(params: &JacobiParameters, cutoffs: &CutoffPair, s: f64, lambda: f64) -> Result<C64> {
    let cut = 1.0 - cutoffs.phi(lambda);
    if cut == 0.0 {
        return Ok(C64::new(0.0, 0.0));
    }
    Ok(cut * lambda.abs().powf(-s) / c_function(params, C64::new(lambda, 0.0))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::{heat_kernel, jacobi_transform};

    #[test]
    fn omega_values() {
        let g = JacobiParameters::generic();
        let w0 = omega(&g, C64::new(0.0, 0.0)).unwrap();
        let want = (2.0 * g.rho()).powf(2.0 * g.alpha() + 0.5);
        assert!((w0 - want).norm() < 1e-13 * want);
        let h = JacobiParameters::h3();
        let w2 = omega(&h, C64::new(2.0, 0.0)).unwrap();
        assert!((w2 - 8f64.powf(0.75)).norm() < 1e-13);
        for k in 1..50 {
            let l = 0.37 * k as f64;
            let d = omega(&g, C64::new(l, 0.0)).unwrap() - omega(&g, C64::new(-l, 0.0)).unwrap();
            assert!(d.norm() == 0.0);
        }
        // λ = 3iρ puts the base on the negative axis
        assert!(matches!(omega(&g, C64::new(0.0, 3.0 * g.rho())), Err(Error::BranchCut(_))));
    }

    #[test]
    fn modified_multiplier_closed_form() {
        let h = JacobiParameters::h3();
        let one = MultiplierSpec::identity();
        for &l in &[0.5, 2.0, 9.0] {
            // c(λ) = 1/(iλ) gives c(−λ)^{−1} = −iλ
            let m = modified_multiplier(&h, &one, C64::new(l, 0.0)).unwrap();
            assert!((m - C64::new(0.0, -l)).norm() < 1e-12 * l);
        }
        let zero = MultiplierSpec::from_fn("zero", DecayClass::RapidlyDecreasing, |_, _| Ok(C64::new(0.0, 0.0)));
        assert_eq!(modified_multiplier(&h, &zero, C64::new(1.0, 0.0)).unwrap(), C64::new(0.0, 0.0));
        // ω^{−1}c(−·)^{−1} stays bounded on the real axis
        let g = JacobiParameters::generic();
        let inv = MultiplierSpec::from_expression("w", DecayClass::Bounded, "1/omega(lambda)").unwrap();
        for k in 0..=400 {
            let v = modified_multiplier(&g, &inv, C64::new(k as f64, 0.0)).unwrap();
            assert!(v.norm() < 1.0);
        }
    }

    #[test]
    fn w_closed_form_h3() {
        let h = JacobiParameters::h3();
        for &l in &[1.0, 3.0, 40.0] {
            let w = w_function(&h, C64::new(l, 0.0)).unwrap();
            let want = C64::new(0.0, l) * (l * l + 4.0).powf(-0.75);
            assert!((w - want).norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn trace_of_entire_function() {
        let p = JacobiParameters::generic();
        let rho = p.rho();
        let g = |z: C64| Ok((-z * z).exp());
        let nodes: Vec<f64> = (0..21).map(|k| -2.0 + 0.2 * k as f64).collect();
        let tr = boundary_trace(&g, rho, &nodes).unwrap();
        for (x, v) in nodes.iter().zip(&tr.samples) {
            let direct = (-(C64::new(*x, rho) * C64::new(*x, rho))).exp();
            assert!((v - direct).norm() < 1e-9 * direct.norm().max(1.0));
        }
        let flat = boundary_trace(&g, 0.0, &nodes).unwrap();
        for (x, v) in nodes.iter().zip(&flat.samples) {
            assert_eq!(*v, (-C64::new(x * x, 0.0)).exp());
        }
    }

    #[test]
    fn trace_cancels_omega() {
        let p = JacobiParameters::damek_ricci_like();
        let m = MultiplierSpec::damped_omega_inverse(1.0);
        let g = |z: C64| Ok(omega(&p, z)? * m.eval(&p, z)?);
        let tr = boundary_trace(&g, p.rho(), &[0.0, 0.5, 3.0]).unwrap();
        let w0 = omega(&p, C64::new(0.0, 0.0)).unwrap();
        for (x, v) in tr.nodes.iter().zip(&tr.samples) {
            let z = C64::new(*x, p.rho());
            let want = w0 * (-(z * z + p.rho() * p.rho())).exp();
            assert!((v - want).norm() < 1e-9 * want.norm());
        }
    }

    #[test]
    fn trace_detects_singular_edge() {
        // pole just above the line: extrapolation cannot settle
        let g = |z: C64| Ok(1.0 / (z - C64::new(0.0, 1.0 + 2e-5)));
        assert!(matches!(boundary_trace(&g, 1.0, &[0.0]), Err(Error::NoConvergence(_))));
    }

    #[test]
    fn cutoff_plateaus_and_supports() {
        let c = CutoffPair::default();
        assert!(CutoffPair::new(1.0).is_err() && CutoffPair::new(1.3).is_err());
        let r0 = c.r0();
        for k in 0..=2000 {
            let t = -3.0 + 3e-3 * k as f64;
            let (p, f) = (c.psi(t), c.phi(t));
            assert!((0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&f));
            if t.abs() <= r0.sqrt() {
                assert_eq!(p, 1.0);
            }
            if t.abs() >= r0 {
                assert_eq!(p, 0.0);
            }
            if t.abs() <= 1.0 / r0 {
                assert_eq!(f, 1.0);
            }
            if t.abs() >= 2.0 / r0 {
                assert_eq!(f, 0.0);
            }
            assert_eq!(p + (1.0 - p), 1.0);
        }
    }

    #[test]
    fn split_heat_kernel() {
        let p = JacobiParameters::generic();
        let rg = Arc::new(RadialGrid::graded_gauss(&p, 12.0, 120, 8).unwrap());
        let sg = Arc::new(SpectralGrid::gauss(&p, 30.0, 60, 10).unwrap());
        let k = heat_kernel(&p, 0.5, &rg, &sg).unwrap();
        let c = CutoffPair::default();
        let (local, global) = split_kernel(&p, &k, &c).unwrap();
        for (i, &t) in rg.nodes.iter().enumerate() {
            assert_eq!(local.values[i] + global.values[i], k.values[i]);
            if t >= c.r0() {
                assert_eq!(local.values[i], C64::new(0.0, 0.0));
            }
            if t <= c.r0().sqrt() {
                assert_eq!(global.values[i], C64::new(0.0, 0.0));
            }
        }
        let (a, b, whole) = (
            jacobi_transform(&p, &local, &sg).unwrap(),
            jacobi_transform(&p, &global, &sg).unwrap(),
            jacobi_transform(&p, &k, &sg).unwrap(),
        );
        let scale = whole.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        for j in 0..sg.len() {
            assert!((a.values[j] + b.values[j] - whole.values[j]).norm() < 1e-6 * scale);
        }
        let short = Arc::new(RadialGrid::graded_gauss(&p, 1.2, 10, 8).unwrap());
        let ks = short.sample(|_| C64::new(0.0, 0.0));
        assert!(matches!(split_kernel(&p, &ks, &c), Err(Error::Margin(_))));
    }

    #[test]
    fn kernel_of_gaussian_is_heat_kernel() {
        let p = JacobiParameters::damek_ricci_like();
        let rg = Arc::new(RadialGrid::graded_gauss(&p, 12.0, 120, 8).unwrap());
        let sg = Arc::new(SpectralGrid::gauss(&p, 30.0, 60, 10).unwrap());
        let k = kernel_from_multiplier(&p, &MultiplierSpec::gaussian(0.5), &rg, &sg).unwrap();
        let h = heat_kernel(&p, 0.5, &rg, &sg).unwrap();
        assert!(k.relative_l2_distance(&h).unwrap() < 1e-14);
        let zero = MultiplierSpec::from_fn("zero", DecayClass::RapidlyDecreasing, |_, _| Ok(C64::new(0.0, 0.0)));
        let kz = kernel_from_multiplier(&p, &zero, &rg, &sg).unwrap();
        assert!(kz.values.iter().all(|v| *v == C64::new(0.0, 0.0)));
        assert!(kernel_from_multiplier(&p, &MultiplierSpec::identity(), &rg, &sg).is_err());
    }

    #[test]
    fn p_s_bounded() {
        let c = CutoffPair::default();
        for p in [JacobiParameters::generic(), JacobiParameters::damek_ricci_like()] {
            let s = p.alpha() + 0.5;
            let mut sup = 0.0f64;
            for k in 0..4000 {
                let l = 0.05 * k as f64;
                sup = sup.max(p_s(&p, &c, s, l).unwrap().norm());
            }
            assert!(sup.is_finite() && sup < 10.0);
            // the tail tends to the constant |λ|^{−s}/|c(λ)| limit
            let far = p_s(&p, &c, s, 1e4).unwrap().norm();
            let farther = p_s(&p, &c, s, 4e4).unwrap().norm();
            assert!((far / farther - 1.0).abs() < 1e-3);
        }
    }
}
