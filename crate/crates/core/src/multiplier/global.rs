use super::{modified_multiplier, CutoffPair, MultiplierSpec};
use crate::error::{Error, Result};
use crate::jacobi_core::{harish_chandra_coefficients, jacobi_phi_row, weight_density};
use crate::params::JacobiParameters;
use crate::quadrature::gauss_legendre;
use crate::transform::SpectralGrid;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::PI;

/// Δ(t) = e^{2ρt} Σ_j c_j e^{−2jt} δ(t), where the c_j expand
/// (1−x)^A (1+x)^B in x = e^{−2t}, A and B are the integer parts of 2α+1
/// and 2β+1, and δ(t) = (1−x)^a (1+x)^b carries the fractional parts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaExpansion {
    pub t: f64,
    pub integer_parts: (u32, u32),
    pub fractional_parts: (f64, f64),
    pub coefficients: Vec<f64>,
    pub delta_factor: f64,
    pub reconstruction: f64,
    pub direct: f64,
    pub relative_error: f64,
}

impl DeltaExpansion {
    /// J = A + B, the last index of c_j.
    pub fn j_max(&self) -> usize {
        self.coefficients.len() - 1
    }
}

fn binomial_row(n: u32) -> Vec<f64> {
    let mut row = vec![1.0];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

fn split_exponent(e: f64) -> (u32, f64) {
    let n = e.floor();
    (n as u32, e - n)
}

/// Coefficients c_j and the integer/fractional split; independent of t.
fn expansion_coefficients(params: &JacobiParameters) -> ((u32, u32), (f64, f64), Vec<f64>) {
    let (ia, fa) = split_exponent(2.0 * params.alpha() + 1.0);
    let (ib, fb) = split_exponent(2.0 * params.beta() + 1.0);
    // (1−x)^A (1+x)^B as a polynomial in x
    let minus: Vec<f64> = binomial_row(ia)
        .iter()
        .enumerate()
        .map(|(k, c)| if k % 2 == 1 { -c } else { *c })
        .collect();
    let plus = binomial_row(ib);
    let mut c = vec![0.0; minus.len() + plus.len() - 1];
    for (i, a) in minus.iter().enumerate() {
        for (j, b) in plus.iter().enumerate() {
            c[i + j] += a * b;
        }
    }
    ((ia, ib), (fa, fb), c)
}

fn delta_factor(fractional: (f64, f64), t: f64) -> f64 {
    let x = (-2.0 * t).exp();
    (1.0 - x).powf(fractional.0) * (1.0 + x).powf(fractional.1)
}

pub fn delta_expansion(params: &JacobiParameters, t: f64) -> Result<DeltaExpansion> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("Δ-expansion needs t > 0, got {t}")));
    }
    let (integer_parts, fractional_parts, coefficients) = expansion_coefficients(params);
    let delta = delta_factor(fractional_parts, t);
    let x = (-2.0 * t).exp();
    let poly = coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let reconstruction = (2.0 * params.rho() * t).exp() * poly * delta;
    let direct = weight_density(params, t)?;
    Ok(DeltaExpansion {
        t,
        integer_parts,
        fractional_parts,
        coefficients,
        delta_factor: delta,
        reconstruction,
        direct,
        relative_error: (reconstruction - direct).abs() / direct,
    })
}

const PANEL: f64 = 0.5;
const ORDER: usize = 16;
const CUTOFF_CAP: f64 = 400.0;

/// Smallest L (in steps of 1/2) beyond which |f(x + iy)| stays below
/// 1e-20 of its running maximum over two units of x on both sides.
fn decay_cutoff(f: &dyn Fn(C64) -> Result<C64>, y: f64) -> Result<f64> {
    let mut max = 0.0f64;
    let mut quiet = 0;
    let mut x = 0.0;
    while x < CUTOFF_CAP {
        x += PANEL;
        let v = f(C64::new(x, y))?.norm().max(f(C64::new(-x, y))?.norm());
        if !v.is_finite() {
            return Err(Error::Growth(format!("integrand is not finite at |Re λ| = {x}, Im λ = {y}")));
        }
        max = max.max(v);
        if v <= 1e-20 * max {
            quiet += 1;
            if quiet >= 4 {
                return Ok(x);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Growth(format!("integrand has not decayed by |Re λ| = {CUTOFF_CAP}")))
}

/// Gauss nodes and weights on [a, b] in panels of width ≤ PANEL.
fn panel_rule(a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(ORDER);
    let n = ((b - a) / PANEL).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let mut out = Vec::with_capacity(n * ORDER);
    for i in 0..n {
        let mid = a + h * (i as f64 + 0.5);
        for (xi, wi) in x.iter().zip(&w) {
            out.push((mid + 0.5 * h * xi, 0.5 * h * wi));
        }
    }
    out
}

/// Γ_k with Γ_k ≡ 0 for k < 0.
fn gamma_coeffs(params: &JacobiParameters, lambda: C64, k_max: usize) -> Result<Vec<C64>> {
    Ok(harish_chandra_coefficients(params, lambda, k_max)?.coefficients)
}

/// The pieces a_ℓ^±, b_k^± and K_{ℓ,j} of the global kernel at nodes t_i,
/// together with the reconstruction of (1−ψ) k Δ.
///
/// With dν = (2π)^{−1}|c|^{−2}dλ the inversion formula reads
/// k(t) = (2π)^{−1} ∫_ℝ M(λ) Φ_λ(t) dλ, so the b-integrals carry (2π)^{−1}.
/// a_ℓ^− and b^− are evaluated at the mirrored nodes −t_i, where they
/// live; a_ℓ^+ and b^+ at t_i.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalPieces {
    pub t_nodes: Vec<f64>,
    pub ell_max: usize,
    pub coefficients: Vec<f64>,
    /// a_plus[ℓ][i] = a_ℓ^+(t_i)
    pub a_plus: Vec<Vec<f64>>,
    /// a_minus[ℓ][i] = a_ℓ^−(−t_i)
    pub a_minus: Vec<Vec<f64>>,
    #[serde(skip)]
    pub b_plus: Vec<Vec<C64>>,
    #[serde(skip)]
    pub b_minus: Vec<Vec<C64>>,
    /// k_pieces[ℓ][j][i] = K_{ℓ,j}(t_i)
    #[serde(skip)]
    pub k_pieces: Vec<Vec<Vec<C64>>>,
    #[serde(skip)]
    pub reconstruction: Vec<C64>,
    #[serde(skip)]
    pub target: Vec<C64>,
    /// Max over nodes of the relative reconstruction error using ℓ ≤ L,
    /// for L = 0..=ell_max.
    pub error_by_ell: Vec<f64>,
    /// ℓ = 0 identity a_0^± = δ + e^{±ρt} η_± checked on ±t_i.
    pub eta_defect: f64,
}

impl GlobalPieces {
    pub fn relative_error(&self) -> f64 {
        *self.error_by_ell.last().expect("at least ℓ = 0")
    }

    pub fn within(&self, tol: f64) -> Result<()> {
        let e = self.relative_error();
        if e > tol {
            return Err(Error::NonConvergence {
                what: "global kernel reconstruction",
                terms: self.ell_max,
            });
        }
        Ok(())
    }
}

/// η_±(t) = [(1−ψ(t)) 1_{[0,∞)}(±t) − 1] δ(|t|) e^{∓ρt}
fn eta(params: &JacobiParameters, cutoffs: &CutoffPair, frac: (f64, f64), sign: f64, t: f64) -> f64 {
    let ind = if sign * t >= 0.0 { 1.0 } else { 0.0 };
    ((1.0 - cutoffs.psi(t)) * ind - 1.0) * delta_factor(frac, t.abs()) * (-sign * params.rho() * t).exp()
}

pub fn hc_global_pieces(
    params: &JacobiParameters,
    m: &MultiplierSpec,
    cutoffs: &CutoffPair,
    ell_max: usize,
    t_nodes: &[f64],
) -> Result<GlobalPieces> {
    let lo = cutoffs.r0().sqrt();
    if t_nodes.is_empty() || t_nodes.iter().any(|&t| !(t >= lo && t.is_finite())) {
        return Err(Error::domain(format!("global pieces need nodes in [√R0, ∞) = [{lo:.4}, ∞)")));
    }
    let rho = params.rho();
    let (_, frac, coefficients) = expansion_coefficients(params);
    let jm = coefficients.len() - 1;
    let mm = |l: C64| modified_multiplier(params, m, l);
    let cut = decay_cutoff(&mm, 0.0)?;
    let rule = panel_rule(-cut, cut);

    // M(λ)Γ_k(λ) at every quadrature node
    let mut weighted: Vec<(f64, Vec<C64>)> = Vec::with_capacity(rule.len());
    for &(l, w) in &rule {
        let lam = C64::new(l, 0.0);
        let mv = mm(lam)? * w / (2.0 * PI);
        let g = gamma_coeffs(params, lam, ell_max)?;
        weighted.push((l, g.into_iter().map(|gk| gk * mv).collect()));
    }
    let b_at = |t: f64, sign: f64| -> Vec<C64> {
        let mut acc = vec![C64::new(0.0, 0.0); ell_max + 1];
        for (l, row) in &weighted {
            let e = (sign * C64::new(rho, *l) * t).exp();
            for (a, v) in acc.iter_mut().zip(row) {
                *a += v * e;
            }
        }
        acc
    };
    let nt = t_nodes.len();
    let mut b_plus = vec![vec![C64::new(0.0, 0.0); nt]; ell_max + 1];
    let mut b_minus = b_plus.clone();
    for (i, &t) in t_nodes.iter().enumerate() {
        let (p, q) = (b_at(t, 1.0), b_at(-t, -1.0));
        for k in 0..=ell_max {
            b_plus[k][i] = p[k];
            b_minus[k][i] = q[k];
        }
    }

    let mut a_plus = vec![vec![0.0; nt]; ell_max + 1];
    let mut a_minus = a_plus.clone();
    for (i, &t) in t_nodes.iter().enumerate() {
        let base = (1.0 - cutoffs.psi(t)) * delta_factor(frac, t);
        for ell in 0..=ell_max {
            let e = (-2.0 * ell as f64 * t).exp();
            a_plus[ell][i] = base * e;
            // a_ℓ^−(−t) = (1−ψ(t)) e^{−2ℓt} δ(t)
            a_minus[ell][i] = base * e;
        }
    }

    // at t_i > 0 only the + terms survive; at −t_i only the − terms
    let mut k_pieces = vec![vec![vec![C64::new(0.0, 0.0); nt]; jm + 1]; ell_max + 1];
    for ell in 0..=ell_max {
        for j in 0..=jm.min(ell) {
            for i in 0..nt {
                k_pieces[ell][j][i] = a_plus[ell][i] * b_plus[ell - j][i];
            }
        }
    }

    // target (1−ψ) k Δ with k(t) = ∫_0^∞ m φ_λ(t) dν by Gauss quadrature
    let panels = (cut / PANEL).ceil() as usize;
    let sgrid = SpectralGrid::gauss(params, cut, panels.max(1), ORDER)?;
    let mut k = vec![C64::new(0.0, 0.0); nt];
    for (&l, &w) in sgrid.nodes.iter().zip(&sgrid.nu_weights) {
        let mv = m.eval_real(params, l)? * w;
        let row = jacobi_phi_row(params, C64::new(l, 0.0), t_nodes)?;
        for (a, p) in k.iter_mut().zip(row) {
            *a += mv * p;
        }
    }
    let target: Vec<C64> = t_nodes
        .iter()
        .zip(&k)
        .map(|(&t, kv)| Ok(kv * (1.0 - cutoffs.psi(t)) * weight_density(params, t)?))
        .collect::<Result<_>>()?;

    let mut partial = vec![C64::new(0.0, 0.0); nt];
    let mut error_by_ell = Vec::with_capacity(ell_max + 1);
    for ell in 0..=ell_max {
        for (j, c) in coefficients.iter().enumerate() {
            for i in 0..nt {
                partial[i] += *c * k_pieces[ell][j][i];
            }
        }
        let err = partial
            .iter()
            .zip(&target)
            .map(|(p, q)| (p - q).norm() / q.norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        error_by_ell.push(err);
    }

    let mut eta_defect = 0.0f64;
    for (i, &t) in t_nodes.iter().enumerate() {
        let d = delta_factor(frac, t);
        let plus = eta(params, cutoffs, frac, 1.0, t) * (rho * t).exp() + d;
        let minus = eta(params, cutoffs, frac, -1.0, -t) * (rho * t).exp() + d;
        let scale = a_plus[0][i].abs().max(d);
        eta_defect = eta_defect
            .max((plus - a_plus[0][i]).abs() / scale)
            .max((minus - a_minus[0][i]).abs() / scale);
        // and the wrong-side pieces vanish: η_+ at −t and η_− at t reduce to −δ e^{∓ρt}
        let off_plus = eta(params, cutoffs, frac, 1.0, -t) * (-rho * t).exp() + d;
        let off_minus = eta(params, cutoffs, frac, -1.0, t) * (-rho * t).exp() + d;
        eta_defect = eta_defect.max(off_plus.abs() / scale).max(off_minus.abs() / scale);
    }

    Ok(GlobalPieces {
        t_nodes: t_nodes.to_vec(),
        ell_max,
        coefficients,
        a_plus,
        a_minus,
        b_plus,
        b_minus,
        k_pieces,
        reconstruction: partial,
        target,
        error_by_ell,
        eta_defect,
    })
}

/// ∫ over one shifted rectangle of height ρ(1 − 1/R).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShiftRow {
    pub r: f64,
    pub height: f64,
    #[serde(skip)]
    pub top: C64,
    #[serde(skip)]
    pub left_edge: C64,
    #[serde(skip)]
    pub right_edge: C64,
    /// top + left − right, equal to the real-line integral by Cauchy
    #[serde(skip)]
    pub shifted: C64,
    pub edge_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContourShift {
    pub k: usize,
    pub t: f64,
    pub sign: i8,
    #[serde(skip)]
    pub direct: C64,
    pub rows: Vec<ShiftRow>,
    pub defect: f64,
}

/// Shift radii of the contour check.
pub const SHIFT_RADII: [f64; 3] = [10.0, 100.0, 1000.0];

/// ∫_ℝ M(λ)Γ_k(λ)e^{±(iλ+ρ)t} dλ directly and along the rectangles with
/// top side Im λ = ρ(1−1/R), |Re λ| ≤ R.
pub fn contour_shift_check(
    params: &JacobiParameters,
    m: &MultiplierSpec,
    k: usize,
    t: f64,
    sign: i8,
) -> Result<ContourShift> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("contour shift needs t > 0, got {t}")));
    }
    if sign != 1 && sign != -1 {
        return Err(Error::domain("sign must be +1 or −1"));
    }
    let rho = params.rho();
    let s = sign as f64;
    let g = |l: C64| -> Result<C64> {
        let gk = gamma_coeffs(params, l, k)?[k];
        Ok(modified_multiplier(params, m, l)? * gk * (s * (C64::i() * l + rho) * t).exp())
    };
    let line = |y: f64, r: f64| -> Result<C64> {
        let cut = decay_cutoff(&g, y)?.min(r);
        let mut acc = C64::new(0.0, 0.0);
        for (x, w) in panel_rule(-cut, cut) {
            acc += g(C64::new(x, y))? * w;
        }
        Ok(acc)
    };
    // ∫_0^h g(x + iy) i dy
    let edge = |x: f64, h: f64| -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (y, w) in panel_rule(0.0, h) {
            acc += g(C64::new(x, y))? * w;
        }
        Ok(acc * C64::i())
    };
    let direct = line(0.0, f64::INFINITY)?;
    let mut rows = Vec::with_capacity(SHIFT_RADII.len());
    for &r in &SHIFT_RADII {
        let h = rho * (1.0 - 1.0 / r);
        let top = line(h, r)?;
        let (left_edge, right_edge) = (edge(-r, h)?, edge(r, h)?);
        rows.push(ShiftRow {
            r,
            height: h,
            top,
            left_edge,
            right_edge,
            shifted: top + left_edge - right_edge,
            edge_size: left_edge.norm() + right_edge.norm(),
        });
    }
    for w in rows.windows(2) {
        if w[1].edge_size > w[0].edge_size {
            return Err(Error::Growth(format!(
                "edge integrals grow from {:.3e} (R = {}) to {:.3e} (R = {})",
                w[0].edge_size, w[0].r, w[1].edge_size, w[1].r
            )));
        }
    }
    let last = rows.last().expect("three radii");
    let defect = (direct - last.shifted).norm();
    Ok(ContourShift {
        k,
        t,
        sign,
        direct,
        rows,
        defect,
    })
}
