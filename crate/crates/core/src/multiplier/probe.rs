use super::{omega, p_s, trace_point, w_function, CutoffPair, MultiplierSpec};
use crate::error::{Error, Result};
use crate::jacobi_core::PhiEvaluator;
use crate::params::JacobiParameters;
use crate::quadrature::power_law_fit;
use crate::transform::{
    even_gaussian, fmt_num, inverse_transform, jacobi_transform, GridSpec, SampledRadialFunction,
    SampledSpectralFunction, SpectralGrid, TransformPlan,
};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

const NOISE_TOL: f64 = 1e-4;

/// g, g' and g'' at x by Richardson-corrected central differences with
/// relative step 1e-3, plus the disagreement of the two finest estimates
/// of g'.
fn derivatives(g: &dyn Fn(f64) -> Result<C64>, x: f64) -> Result<(C64, C64, C64, f64)> {
    let h = 1e-3 * x.abs().max(1e-3);
    let g0 = g(x)?;
    let central = |h: f64| -> Result<(C64, C64)> {
        let (a, b) = (g(x + h)?, g(x - h)?);
        Ok(((a - b) / (2.0 * h), (a - 2.0 * g0 + b) / (h * h)))
    };
    let (d1a, d2a) = central(h)?;
    let (d1b, d2b) = central(h / 2.0)?;
    let (d1c, _) = central(h / 4.0)?;
    let r1 = (4.0 * d1b - d1a) / 3.0;
    let r1_fine = (4.0 * d1c - d1b) / 3.0;
    let d2 = (4.0 * d2b - d2a) / 3.0;
    Ok((g0, r1, d2, (r1 - r1_fine).norm()))
}

/// Geometric grid with `per_octave` points per doubling, covering [lo, hi]
/// and containing 1 when lo ≤ 1 ≤ hi.
fn dyadic_grid(lo: f64, hi: f64, per_octave: usize) -> Vec<f64> {
    let n = per_octave as f64;
    let (a, b) = ((lo.log2() * n).ceil() as i64, (hi.log2() * n).floor() as i64);
    let mut out: Vec<f64> = (a..=b).map(|j| (j as f64 / n).exp2()).collect();
    if out.first().map_or(true, |&x| x > lo) {
        out.insert(0, lo);
    }
    if out.last().map_or(true, |&x| x < hi) {
        out.push(hi);
    }
    out
}

/// Hörmander-type sizes of g on [1, Λ_max] and log-log slopes of |g|, |g'|.
/// Sups use the whole interval; the slopes that decide decay use the last
/// decade, since below it the fit mixes in pre-asymptotic curvature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HormanderReport {
    pub lambda_max: f64,
    pub order: usize,
    pub sup_g: f64,
    pub sup_lambda_g1: f64,
    /// sup |λ² g''|, present for order 2
    pub sup_lambda2_g2: Option<f64>,
    /// log-log slopes of |g| and |g'| fitted on the last decade
    /// [Λ_max/10, Λ_max]
    pub slope_g: f64,
    pub slope_g1: f64,
    /// the same slopes fitted over all of [1, Λ_max]
    pub slope_g_full: f64,
    pub slope_g1_full: f64,
    pub noise_warning: bool,
}

pub fn hormander_check(g: &dyn Fn(f64) -> Result<C64>, order: usize, lambda_max: f64) -> Result<HormanderReport> {
    if !(lambda_max > 1.0 && lambda_max.is_finite()) {
        return Err(Error::domain(format!("Hörmander check needs Λ_max > 1, got {lambda_max}")));
    }
    if !(1..=2).contains(&order) {
        return Err(Error::domain(format!("order must be 1 or 2, got {order}")));
    }
    let grid = dyadic_grid(1.0, lambda_max, 16);
    let (mut sg, mut s1, mut s2) = (0.0f64, 0.0f64, 0.0f64);
    let mut noise = false;
    let (mut ag, mut a1) = (Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len()));
    for &x in &grid {
        let (v, d1, d2, disc) = derivatives(g, x)?;
        // pointwise: the slopes need every sample
        noise |= disc > NOISE_TOL * (d1.norm() + v.norm() / x);
        sg = sg.max(v.norm());
        s1 = s1.max(x * d1.norm());
        s2 = s2.max(x * x * d2.norm());
        ag.push(v.norm());
        a1.push(d1.norm());
    }
    let tail = grid.iter().position(|&x| x >= lambda_max / 10.0).unwrap_or(0);
    let (_, slope_g) = power_law_fit(&grid[tail..], &ag[tail..]);
    let (_, slope_g1) = power_law_fit(&grid[tail..], &a1[tail..]);
    let (_, slope_g_full) = power_law_fit(&grid, &ag);
    let (_, slope_g1_full) = power_law_fit(&grid, &a1);
    Ok(HormanderReport {
        lambda_max,
        order,
        sup_g: sg,
        sup_lambda_g1: s1,
        sup_lambda2_g2: (order == 2).then_some(s2),
        slope_g,
        slope_g1,
        slope_g_full,
        slope_g1_full,
        noise_warning: noise,
    })
}

/// Hörmander checks of w = ω^{−1}c^{−1} and the bound on P_s with s = α+1/2.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WReport {
    pub alpha: f64,
    pub beta: f64,
    pub hormander: HormanderReport,
    /// −α, the slope |w| should follow
    pub expected_slope: f64,
    pub p_s_sup: f64,
}

impl WReport {
    /// |w| slope within 0.1 of −α and |w'| slope at most −1/2 + 0.1.
    pub fn within_bounds(&self) -> bool {
        (self.hormander.slope_g - self.expected_slope).abs() <= 0.1 && self.hormander.slope_g1 <= -0.5 + 0.1
    }
}

pub fn w_report(params: &JacobiParameters, lambda_max: f64) -> Result<WReport> {
    let w = |x: f64| w_function(params, C64::new(x, 0.0));
    let hormander = hormander_check(&w, 2, lambda_max)?;
    let cut = CutoffPair::default();
    let s = params.alpha() + 0.5;
    let mut p_s_sup = 0.0f64;
    for x in dyadic_grid(1e-2, lambda_max, 16) {
        p_s_sup = p_s_sup.max(p_s(params, &cut, s, x)?.norm());
    }
    Ok(WReport {
        alpha: params.alpha(),
        beta: params.beta(),
        hormander,
        expected_slope: -params.alpha(),
        p_s_sup,
    })
}

/// sup|g| + sup|λg'| over a dyadic grid of [1/Λ_max, Λ_max]; an upper-bound
/// surrogate for a Fourier-multiplier norm, not that norm itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MihlinProxy {
    pub value: f64,
    pub sup_g: f64,
    pub sup_lambda_g1: f64,
    pub lambda_max: f64,
    pub noise_warning: bool,
}

pub fn mihlin_proxy_norm(g: &dyn Fn(f64) -> Result<C64>, lambda_max: f64) -> Result<MihlinProxy> {
    mihlin_proxy_with(g, lambda_max, 32)
}

fn mihlin_proxy_with(g: &dyn Fn(f64) -> Result<C64>, lambda_max: f64, per_octave: usize) -> Result<MihlinProxy> {
    if !(lambda_max > 1.0 && lambda_max.is_finite()) {
        return Err(Error::domain(format!("proxy norm needs Λ_max > 1, got {lambda_max}")));
    }
    let (mut sg, mut s1, mut worst) = (0.0f64, 0.0f64, 0.0f64);
    for x in dyadic_grid(1.0 / lambda_max, lambda_max, per_octave) {
        let (v, d1, _, disc) = derivatives(g, x)?;
        worst = worst.max(x * disc);
        sg = sg.max(v.norm());
        s1 = s1.max(x * d1.norm());
    }
    // only errors that could move the suprema count, so truncation error
    // where g has already decayed is ignored
    let noise = worst > NOISE_TOL * (sg + s1);
    Ok(MihlinProxy {
        value: sg + s1,
        sup_g: sg,
        sup_lambda_g1: s1,
        lambda_max,
        noise_warning: noise,
    })
}

fn check_p(p: f64) -> Result<()> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("exponent p must lie in (1, ∞), got {p}")));
    }
    Ok(())
}

fn sample_multiplier(params: &JacobiParameters, m: &MultiplierSpec, sgrid: &SpectralGrid) -> Result<Vec<C64>> {
    sgrid.nodes.iter().map(|&l| m.eval_real(params, l)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierApplication {
    pub tf: SampledRadialFunction,
    pub norm_f: f64,
    pub norm_tf: f64,
    /// ‖T_m f‖_p / ‖f‖_p
    pub ratio: f64,
}

/// T_m f = inverse transform of m·f̂, with quadrature L^p(dμ) norms.
pub fn apply_multiplier_operator(
    params: &JacobiParameters,
    m: &MultiplierSpec,
    f: &SampledRadialFunction,
    sgrid: &Arc<SpectralGrid>,
    p: f64,
) -> Result<MultiplierApplication> {
    check_p(p)?;
    let fh = jacobi_transform(params, f, sgrid)?;
    let mv = sample_multiplier(params, m, sgrid)?;
    let values = fh.values.iter().zip(&mv).map(|(a, b)| a * b).collect();
    let tf = inverse_transform(params, &SampledSpectralFunction::new(Arc::clone(sgrid), values)?, &f.grid)?;
    let norm_f = f.norm(p);
    if norm_f == 0.0 {
        return Err(Error::ZeroFunction);
    }
    let norm_tf = tf.norm(p);
    Ok(MultiplierApplication {
        ratio: norm_tf / norm_f,
        tf,
        norm_f,
        norm_tf,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OperatorNormEstimate {
    pub p: f64,
    /// max over trials of ‖T_m f‖_p / ‖f‖_p
    pub lower_bound: f64,
    pub trials: usize,
    pub seed: u64,
    pub witness: String,
}

/// Radius of the ball on which ‖T_m f‖_p is measured. Restricting the
/// output norm keeps the ratio a lower bound, and it keeps out the far
/// region where the spectral rule aliases φ_λ and the e^{(2−p)ρt} growth
/// of the L^p weight (p < 2) would amplify that error.
pub const OUTPUT_RADIUS: f64 = 14.0;

#[derive(Debug, Clone)]
struct Trial {
    description: String,
    spectrum: Vec<C64>,
    /// exact samples of f
    radial: SampledRadialFunction,
}

/// Seeded test inputs for operator-norm estimates on one grid pair:
/// superpositions of even bumps, φ_0 times a Gaussian envelope, and
/// modulated bumps, in rotation. The first n inputs of a set do not depend
/// on its size.
#[derive(Debug, Clone)]
pub struct TrialSet {
    plan: Arc<TransformPlan>,
    seed: u64,
    radius: f64,
    trials: Vec<Trial>,
}

fn ball_norm(f: &SampledRadialFunction, p: f64, radius: f64) -> f64 {
    let s: f64 = f
        .values
        .iter()
        .zip(&f.grid.mu_weights)
        .zip(&f.grid.nodes)
        .filter(|(_, &t)| t <= radius)
        .map(|((v, w), _)| w * v.norm().powf(p))
        .sum();
    s.powf(1.0 / p)
}

impl TrialSet {
    pub fn generate(plan: Arc<TransformPlan>, trials: usize, seed: u64) -> Result<Self> {
        if trials == 0 {
            return Err(Error::domain("at least one trial is needed"));
        }
        let params = *plan.params();
        let rgrid = Arc::clone(plan.radial());
        let mut ground = PhiEvaluator::new(&params, C64::new(0.0, 0.0))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(trials);
        for n in 0..trials {
            let (description, radial) = match n % 3 {
                0 => {
                    let count = rng.gen_range(1..=4);
                    let bumps: Vec<(f64, f64, f64)> = (0..count)
                        .map(|_| (rng.gen_range(0.0..6.0), rng.gen_range(0.3..1.5), rng.gen_range(-1.0..1.0)))
                        .collect();
                    let f = rgrid.sample(|t| {
                        bumps.iter().map(|&(c, w, a)| a * even_gaussian(c, w)(t)).sum()
                    });
                    let desc = bumps
                        .iter()
                        .map(|(c, w, a)| format!("{a:.3}*bump(c={c:.3},w={w:.3})"))
                        .collect::<Vec<_>>()
                        .join("+");
                    (desc, f)
                }
                1 => {
                    let sigma = rng.gen_range(1.0..4.0);
                    let mut values = Vec::with_capacity(rgrid.nodes.len());
                    for &t in &rgrid.nodes {
                        values.push(ground.eval(t)? * (-(t / sigma).powi(2)).exp());
                    }
                    (format!("phi0*gauss(sigma={sigma:.3})"), SampledRadialFunction::new(Arc::clone(&rgrid), values)?)
                }
                _ => {
                    let (c, w, k) = (rng.gen_range(0.0..6.0), rng.gen_range(0.5..1.2), rng.gen_range(2.0..15.0));
                    let f = rgrid.sample(|t| even_gaussian(c, w)(t) * (k * t).cos());
                    (format!("bump(c={c:.3},w={w:.3})*cos({k:.3}t)"), f)
                }
            };
            let spectrum = plan.forward(&radial)?.values;
            out.push(Trial {
                description,
                spectrum,
                radial,
            });
        }
        Ok(TrialSet {
            radius: OUTPUT_RADIUS.min(rgrid.t_max),
            plan,
            seed,
            trials: out,
        })
    }

    pub fn len(&self) -> usize {
        self.trials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trials.is_empty()
    }

    pub fn plan(&self) -> &Arc<TransformPlan> {
        &self.plan
    }

    /// Largest ‖1_B T_m f‖_p/‖f‖_p over the set, B the ball of radius
    /// OUTPUT_RADIUS.
    pub fn estimate(&self, m: &MultiplierSpec, p: f64) -> Result<OperatorNormEstimate> {
        check_p(p)?;
        let params = *self.plan.params();
        let sgrid = Arc::clone(self.plan.spectral());
        let mv = sample_multiplier(&params, m, &sgrid)?;
        let mut best = (f64::NEG_INFINITY, String::new());
        for trial in &self.trials {
            let values = trial.spectrum.iter().zip(&mv).map(|(a, b)| a * b).collect();
            let tf = self.plan.inverse(&SampledSpectralFunction::new(Arc::clone(&sgrid), values)?)?;
            let den = trial.radial.norm(p);
            if den == 0.0 {
                continue;
            }
            let r = ball_norm(&tf, p, self.radius) / den;
            if r > best.0 {
                best = (r, trial.description.clone());
            }
        }
        if !best.0.is_finite() {
            return Err(Error::ZeroFunction);
        }
        Ok(OperatorNormEstimate {
            p,
            lower_bound: best.0,
            trials: self.trials.len(),
            seed: self.seed,
            witness: best.1,
        })
    }
}

/// Randomized lower bound for ‖T_m‖_{p→p} on the default grid pair.
pub fn estimate_operator_norm(
    params: &JacobiParameters,
    m: &MultiplierSpec,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<OperatorNormEstimate> {
    estimate_operator_norm_on(GridSpec::default().plan(params)?, m, p, trials, seed)
}

pub fn estimate_operator_norm_on(
    plan: Arc<TransformPlan>,
    m: &MultiplierSpec,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<OperatorNormEstimate> {
    TrialSet::generate(plan, trials, seed)?.estimate(m, p)
}

/// Estimates for m_s = m e^{−s(λ²+ρ²)} along a ladder s → 0, extrapolated
/// to s = 0 by the interpolating polynomial and compared with the estimate
/// for m itself.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatLadder {
    pub s: Vec<f64>,
    pub estimates: Vec<f64>,
    pub base: f64,
    pub extrapolated: f64,
    pub relative_gap: f64,
    /// estimates grow as s decreases
    pub monotone: bool,
}

pub const HEAT_LADDER: [f64; 3] = [0.1, 0.05, 0.025];

pub fn heat_ladder(trials: &TrialSet, m: &MultiplierSpec, p: f64, ladder: &[f64]) -> Result<HeatLadder> {
    if ladder.len() < 2 {
        return Err(Error::domain("the ladder needs at least two heat times"));
    }
    let base = trials.estimate(m, p)?.lower_bound;
    let estimates = ladder
        .iter()
        .map(|&s| Ok(trials.estimate(&super::heat_regularize(m, s)?, p)?.lower_bound))
        .collect::<Result<Vec<f64>>>()?;
    let mut extrapolated = 0.0;
    for (i, (&si, &yi)) in ladder.iter().zip(&estimates).enumerate() {
        let mut l = 1.0;
        for (j, &sj) in ladder.iter().enumerate() {
            if i != j {
                l *= -sj / (si - sj);
            }
        }
        extrapolated += yi * l;
    }
    let monotone = ladder
        .windows(2)
        .zip(estimates.windows(2))
        .all(|(s, e)| (s[1] < s[0]) == (e[1] >= e[0]));
    Ok(HeatLadder {
        s: ladder.to_vec(),
        estimates,
        base,
        extrapolated,
        relative_gap: (extrapolated - base).abs() / base,
        monotone,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub coarse: GridSpec,
    pub fine: GridSpec,
    pub proxy_lambda_max: f64,
    /// Largest accepted |ratio_fine/ratio_coarse − 1|.
    pub stability_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            trials: 24,
            coarse: GridSpec::coarse(),
            fine: GridSpec::default(),
            proxy_lambda_max: 64.0,
            stability_tol: 0.10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremRow {
    pub member: String,
    pub p: f64,
    pub lower_bound: f64,
    pub lower_bound_coarse: f64,
    /// Mihlin surrogate of the boundary trace (ωm)_ρ
    pub proxy_norm: f64,
    pub ratio: f64,
    pub ratio_coarse: f64,
    /// |ratio/ratio_coarse − 1|
    pub instability: f64,
    /// sup |m| on [0, Λ_max] of the fine grid
    pub sup_m: f64,
    pub witness: String,
    pub flags: Vec<String>,
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub p: f64,
    pub seed: u64,
    pub rows: Vec<TheoremRow>,
    /// largest ratio over included members
    pub max_ratio: f64,
    pub all_finite: bool,
    pub stable: bool,
}

impl TheoremReport {
    /// All included ratios finite and refinement-stable, with at least one
    /// member included.
    pub fn passes(&self) -> bool {
        self.all_finite && self.stable && self.rows.iter().any(|r| !r.excluded)
    }

    /// `experiment,member,p,lower_bound,proxy_norm,ratio,flags`; flags are
    /// `;`-separated.
    pub fn to_csv(&self, experiment: &str) -> String {
        let mut out = String::from("experiment,member,p,lower_bound,proxy_norm,ratio,flags\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{experiment},{},{},{},{},{},{}\n",
                r.member,
                fmt_num(r.p),
                fmt_num(r.lower_bound),
                fmt_num(r.proxy_norm),
                fmt_num(r.ratio),
                r.flags.join(";")
            ));
        }
        out
    }
}

/// Boundary values of ω·m on Im λ = ρ.
fn boundary_proxy(params: &JacobiParameters, m: &MultiplierSpec, lambda_max: f64) -> Result<MihlinProxy> {
    let g = |z: C64| Ok(omega(params, z)? * m.eval(params, z)?);
    let rho = params.rho();
    let mut gap = 0.0f64;
    let mut worst: Option<MihlinProxy> = None;
    for sign in [1.0, -1.0] {
        let trace = |x: f64| -> Result<C64> {
            let (v, _) = trace_point(&g, sign * x, rho)?;
            Ok(v)
        };
        let prox = mihlin_proxy_norm(&trace, lambda_max)?;
        if worst.map_or(true, |w| prox.value > w.value) {
            worst = Some(prox);
        }
    }
    // Cauchy criterion on a coarse set of nodes
    for x in dyadic_grid(1.0 / lambda_max, lambda_max, 2) {
        for sign in [1.0, -1.0] {
            gap = gap.max(trace_point(&g, sign * x, rho)?.1);
        }
    }
    if gap >= 1e-8 {
        return Err(Error::NoConvergence(format!("boundary trace gap {gap:.2e}")));
    }
    Ok(worst.expect("two signs"))
}

/// Per member: randomized lower bound of ‖T_m‖_p on a coarse and a fine
/// grid pair, the Mihlin surrogate of (ωm)_ρ, and their ratio. Members
/// failing a hypothesis gate are flagged and excluded from the verdict.
pub fn theorem_ratio_experiment(
    params: &JacobiParameters,
    family: &[MultiplierSpec],
    p: f64,
    seed: u64,
    config: &ExperimentConfig,
) -> Result<TheoremReport> {
    check_p(p)?;
    let coarse = TrialSet::generate(config.coarse.plan(params)?, config.trials, seed)?;
    let fine = TrialSet::generate(config.fine.plan(params)?, config.trials, seed)?;
    let mut rows = Vec::with_capacity(family.len());
    for m in family {
        let mut flags = Vec::new();
        let mut excluded = false;
        match m.is_even(params) {
            Ok(true) => {}
            Ok(false) => {
                flags.push("not-even".to_string());
                excluded = true;
            }
            Err(e) => {
                flags.push(format!("evaluation-error: {e}"));
                excluded = true;
            }
        }
        if !excluded {
            match m.strip_bound(params) {
                Ok(b) if b.is_finite() => {}
                Ok(_) => {
                    flags.push("omega-m-unbounded".to_string());
                    excluded = true;
                }
                Err(e) => {
                    flags.push(format!("evaluation-error: {e}"));
                    excluded = true;
                }
            }
        }
        let proxy = if excluded {
            None
        } else {
            match boundary_proxy(params, m, config.proxy_lambda_max) {
                Ok(px) => {
                    if px.noise_warning {
                        flags.push("proxy-noise".to_string());
                    }
                    Some(px)
                }
                Err(_) => {
                    flags.push("no-boundary-trace".to_string());
                    excluded = true;
                    None
                }
            }
        };
        let mut row = TheoremRow {
            member: m.label.clone(),
            p,
            lower_bound: f64::NAN,
            lower_bound_coarse: f64::NAN,
            proxy_norm: proxy.map_or(f64::NAN, |px| px.value),
            ratio: f64::NAN,
            ratio_coarse: f64::NAN,
            instability: f64::NAN,
            sup_m: f64::NAN,
            witness: String::new(),
            flags,
            excluded,
        };
        if !row.excluded {
            let est = fine.estimate(m, p)?;
            let est_c = coarse.estimate(m, p)?;
            row.lower_bound = est.lower_bound;
            row.lower_bound_coarse = est_c.lower_bound;
            row.ratio = est.lower_bound / row.proxy_norm;
            row.ratio_coarse = est_c.lower_bound / row.proxy_norm;
            row.instability = (row.ratio / row.ratio_coarse - 1.0).abs();
            row.sup_m = m.sup_real(params, config.fine.lambda_max)?;
            row.witness = est.witness;
            if !row.ratio.is_finite() {
                row.flags.push("non-finite".to_string());
            }
            if !(row.instability <= config.stability_tol) {
                row.flags.push("refinement-unstable".to_string());
            }
        } else {
            row.flags.push("excluded".to_string());
        }
        rows.push(row);
    }
    let included: Vec<&TheoremRow> = rows.iter().filter(|r| !r.excluded).collect();
    let all_finite = included.iter().all(|r| r.ratio.is_finite());
    let stable = included.iter().all(|r| r.instability <= config.stability_tol);
    let max_ratio = included.iter().map(|r| r.ratio).fold(f64::NEG_INFINITY, f64::max);
    Ok(TheoremReport {
        p,
        seed,
        rows,
        max_ratio,
        all_finite,
        stable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multiplier::DecayClass;
    use crate::params::Preset;

    fn re(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<C64> {
        move |x| Ok(C64::new(f(x), 0.0))
    }

    #[test]
    fn proxy_calculus_oracles() {
        let one = mihlin_proxy_norm(&re(|_| 1.0), 100.0).unwrap();
        assert!((one.value - 1.0).abs() < 1e-12);
        let g = mihlin_proxy_norm(&re(|x| x / (1.0 + x)), 1e4).unwrap();
        assert!((g.sup_lambda_g1 - 0.25).abs() < 1e-9);
        assert!((g.value - 1.25).abs() < 1e-3);
        // sin(λ²) is not Mihlin regular: the proxy grows with Λ_max
        let a = mihlin_proxy_norm(&re(|x| (x * x).sin()), 10.0).unwrap();
        let b = mihlin_proxy_norm(&re(|x| (x * x).sin()), 40.0).unwrap();
        assert!(b.value > 8.0 * a.value);
    }

    #[test]
    fn w_slopes_for_presets() {
        for preset in Preset::ALL {
            let p = preset.params();
            let r = w_report(&p, 400.0).unwrap();
            assert!(r.within_bounds(), "{preset}: {r:?}");
            assert!(!r.hormander.noise_warning, "{preset}");
            assert!(r.p_s_sup.is_finite());
        }
    }

    #[test]
    fn w_closed_form_sup_h3() {
        // |w| = λ(λ²+4)^{−3/4}, maximal at λ² = 8
        let p = JacobiParameters::h3();
        let r = w_report(&p, 400.0).unwrap();
        let want = 8f64.sqrt() * 12f64.powf(-0.75);
        assert!((r.hormander.sup_g - want).abs() < 1e-3 * want);
    }

    fn small_plan(p: &JacobiParameters) -> Arc<TransformPlan> {
        GridSpec::coarse().plan(p).unwrap()
    }

    #[test]
    fn identity_and_plancherel_ceiling() {
        let p = JacobiParameters::generic();
        let plan = small_plan(&p);
        let id = estimate_operator_norm_on(Arc::clone(&plan), &MultiplierSpec::identity(), 3.0, 9, 7).unwrap();
        assert!((id.lower_bound - 1.0).abs() < 1e-4);
        let step = MultiplierSpec::from_expression("step", DecayClass::Bounded, "(1+tanh(lambda^2-4))/2").unwrap();
        let est = estimate_operator_norm_on(Arc::clone(&plan), &step, 2.0, 12, 3).unwrap();
        assert!(est.lower_bound <= 1.0 + 1e-6, "{est:?}");
        assert!(est.lower_bound > 0.5);
    }

    #[test]
    fn more_trials_never_lower_the_bound() {
        let p = JacobiParameters::damek_ricci_like();
        let plan = small_plan(&p);
        let m = MultiplierSpec::damped_omega_inverse(1.0);
        let a = estimate_operator_norm_on(Arc::clone(&plan), &m, 1.5, 6, 11).unwrap();
        let b = estimate_operator_norm_on(Arc::clone(&plan), &m, 1.5, 12, 11).unwrap();
        let again = estimate_operator_norm_on(Arc::clone(&plan), &m, 1.5, 6, 11).unwrap();
        assert!(b.lower_bound >= a.lower_bound);
        assert_eq!(a, again);
    }

    #[test]
    fn heat_ladder_converges() {
        let p = JacobiParameters::generic();
        let set = TrialSet::generate(small_plan(&p), 12, 5).unwrap();
        let m = MultiplierSpec::damped_omega_inverse(1.0);
        let l = heat_ladder(&set, &m, 2.0, &HEAT_LADDER).unwrap();
        assert!(l.monotone, "{l:?}");
        assert!(l.relative_gap < 0.01, "{l:?}");
    }

    #[test]
    fn apply_identity_and_heat() {
        let p = JacobiParameters::generic();
        let plan = small_plan(&p);
        let f = plan.radial().sample(even_gaussian(1.0, 0.5));
        let sg = Arc::clone(plan.spectral());
        let a = apply_multiplier_operator(&p, &MultiplierSpec::identity(), &f, &sg, 2.0).unwrap();
        assert!(a.tf.relative_l2_distance(&f).unwrap() < 1e-6);
        let m = MultiplierSpec::from_fn("real", DecayClass::Bounded, |_, l| Ok(l.cos() * 0.9));
        let b = apply_multiplier_operator(&p, &m, &f, &sg, 2.0).unwrap();
        assert!(b.ratio <= 0.9 + 1e-6);
    }

    #[test]
    fn odd_member_is_flagged() {
        let p = JacobiParameters::generic();
        let cfg = ExperimentConfig {
            trials: 3,
            fine: GridSpec::coarse(),
            coarse: GridSpec {
                radial_panels: 160,
                spectral_panels: 50,
                ..GridSpec::default()
            },
            ..ExperimentConfig::default()
        };
        let fam = vec![
            MultiplierSpec::damped_omega_inverse(2.0),
            MultiplierSpec::from_expression("odd", DecayClass::RapidlyDecreasing, "lambda*exp(-lambda^2)").unwrap(),
        ];
        let r = theorem_ratio_experiment(&p, &fam, 2.0, 1, &cfg).unwrap();
        assert!(r.rows[1].excluded && r.rows[1].flags.contains(&"not-even".to_string()));
        assert!(!r.rows[0].excluded);
        assert!(r.passes(), "{r:?}");
        let csv = r.to_csv("probe");
        assert!(csv.starts_with("experiment,member,p,lower_bound,proxy_norm,ratio,flags\n"));
        assert_eq!(csv.lines().count(), 3);
    }
}
