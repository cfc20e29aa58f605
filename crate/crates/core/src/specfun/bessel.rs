use super::dd::Dd;
use super::gamma::gamma_complex;
use super::PrecisionConfig;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

fn check(alpha: f64, x: f64) -> Result<()> {
    if alpha.is_nan() || x.is_nan() {
        return Err(Error::domain("NaN argument to Bessel kernel"));
    }
    if alpha < -0.5 {
        return Err(Error::domain(format!("Bessel order α = {alpha} below −1/2")));
    }
    if x < 0.0 {
        return Err(Error::domain(format!("Bessel kernel needs x ≥ 0, got {x}")));
    }
    Ok(())
}

/// `x^{-α} J_α(x)` with the default precision.
pub fn bessel_script_j(alpha: f64, x: f64) -> Result<f64> {
    bessel_script_j_with(alpha, x, &PrecisionConfig::default())
}

/// Ascending series below `asymptotic_crossover`, Hankel expansion above.
pub fn bessel_script_j_with(alpha: f64, x: f64, prec: &PrecisionConfig) -> Result<f64> {
    check(alpha, x)?;
    if x <= prec.asymptotic_crossover {
        bessel_script_j_series(alpha, x, prec)
    } else {
        bessel_script_j_asymptotic(alpha, x, prec)
    }
}

/// Σ_k (−x²/4)^k / (k! (α+1)_k), divided by 2^α Γ(α+1).
///
/// The terms grow to about e^x/x before they cancel, so the sum is carried
/// in double-double arithmetic.
pub fn bessel_script_j_series(alpha: f64, x: f64, prec: &PrecisionConfig) -> Result<f64> {
    check(alpha, x)?;
    let norm = 2f64.powf(alpha) * gamma_complex(C64::new(alpha + 1.0, 0.0))?.re;
    let q = Dd::prod_f64(x, x).mul_f64(-0.25);
    let mut term = Dd::from_f64(1.0);
    let mut sum = term;
    for k in 1..=prec.max_terms {
        let kf = k as f64;
        let den = Dd::sum_f64(alpha, kf).mul_f64(kf);
        term = term.mul(q).div(den);
        sum = sum.add(term);
        if term.abs_hi() <= 1e-34 * sum.abs_hi().max(1e-300) || term.hi == 0.0 {
            return Ok(sum.to_f64() / norm);
        }
        // past the peak and below what double precision can see
        if kf * kf > x * x && term.abs_hi() < prec.series_tol * 1e-16 * sum.abs_hi() {
            return Ok(sum.to_f64() / norm);
        }
    }
    Err(Error::NonConvergence {
        what: "Bessel ascending series",
        terms: prec.max_terms,
    })
}

/// Hankel expansion J_ν(x) ≈ √(2/(πx)) (P cos χ − Q sin χ), χ = x − (ν/2 + 1/4)π,
/// truncated at its smallest term.
pub fn bessel_script_j_asymptotic(alpha: f64, x: f64, prec: &PrecisionConfig) -> Result<f64> {
    check(alpha, x)?;
    if x == 0.0 {
        return Err(Error::domain("Hankel expansion needs x > 0"));
    }
    let mu = 4.0 * alpha * alpha;
    let mut t = 1.0f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut last = f64::INFINITY;
    for k in 1..=prec.max_terms {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = t * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() >= last && next != 0.0 {
            break;
        }
        last = next.abs();
        t = next;
        // signs: P = t0 − t2 + t4 …, Q = t1 − t3 + …
        match k % 4 {
            0 => p += t,
            1 => q += t,
            2 => p -= t,
            _ => q -= t,
        }
        if t == 0.0 || t.abs() < prec.series_tol * p.abs().max(q.abs()) {
            break;
        }
    }
    let chi = x - (alpha / 2.0 + 0.25) * PI;
    let j = (2.0 / (PI * x)).sqrt() * (p * chi.cos() - q * chi.sin());
    Ok(j * x.powf(-alpha))
}
