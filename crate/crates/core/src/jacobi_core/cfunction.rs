use crate::error::{Error, Result};
use crate::params::JacobiParameters;
use crate::specfun::{ln_gamma, nonpositive_integer};
use num_complex::Complex64 as C64;
use serde::Serialize;

const POLE_TOL: f64 = 1e-14;

/// ln c(λ), where
/// c(λ) = 2^{ρ−iλ} Γ(iλ) Γ(α+1) / (Γ((ρ+iλ)/2) Γ((ρ+iλ)/2 − β)).
///
/// Poles of the numerator are errors; zeros of the reciprocal Gammas in
/// the denominator are reported as a pole of ln c.
pub fn ln_c_function(params: &JacobiParameters, lambda: C64) -> Result<C64> {
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::domain(format!("c-function argument {lambda} is not finite")));
    }
    let i = C64::i();
    let il = i * lambda;
    if nonpositive_integer(il, POLE_TOL).is_some() {
        return Err(Error::Pole(format!("c(λ) at λ = {lambda}: Γ(iλ) has a pole")));
    }
    let rho = params.rho();
    let h = (rho + il) / 2.0;
    let d2 = h - params.beta();
    if nonpositive_integer(h, POLE_TOL).is_some() || nonpositive_integer(d2, POLE_TOL).is_some() {
        return Err(Error::Pole(format!("ln c(λ) at λ = {lambda}: c vanishes")));
    }
    Ok((rho - il) * std::f64::consts::LN_2 + ln_gamma(il)? + ln_gamma(C64::new(params.alpha() + 1.0, 0.0))?
        - ln_gamma(h)?
        - ln_gamma(d2)?)
}

/// The Harish-Chandra c-function.
pub fn c_function(params: &JacobiParameters, lambda: C64) -> Result<C64> {
    match ln_c_function(params, lambda) {
        Ok(l) => Ok(l.exp()),
        Err(Error::Pole(msg)) if msg.contains("vanishes") => Ok(C64::new(0.0, 0.0)),
        Err(e) => Err(e),
    }
}

/// 1/c(λ). Zero where Γ(iλ) has a pole (λ ∈ i·ℕ₀), a pole error where
/// c itself vanishes.
pub fn inverse_c_function(params: &JacobiParameters, lambda: C64) -> Result<C64> {
    if nonpositive_integer(C64::i() * lambda, POLE_TOL).is_some() {
        return Ok(C64::new(0.0, 0.0));
    }
    match ln_c_function(params, lambda) {
        Ok(l) => Ok((-l).exp()),
        Err(Error::Pole(_)) => Err(Error::Pole(format!("1/c(λ) at λ = {lambda}"))),
        Err(e) => Err(e),
    }
}

/// d(λ) = |c(λ)|^{−2} for real λ, extended by its limit d(0) = 0.
pub fn plancherel_density(params: &JacobiParameters, lambda: f64) -> Result<f64> {
    if lambda.is_nan() {
        return Err(Error::domain("NaN spectral parameter"));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok((-2.0 * ln_c_function(params, C64::new(lambda, 0.0))?.re).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CAsymptoticsRow {
    pub lambda: f64,
    /// d(λ)/λ^{2α+1}; tends to a positive constant.
    pub density_ratio: f64,
    /// d'(λ)(1+λ)^{−2α}; stays bounded.
    pub derivative_scaled: f64,
    /// |c'(λ)/c(λ)|·λ; stays bounded.
    pub log_derivative_scaled: f64,
    /// |c(−λ)|^{−1}
    pub inverse_modulus: f64,
}

/// Growth diagnostics of the c-function at each λ (real, ≥ 1).
pub fn c_asymptotics_report(params: &JacobiParameters, lambdas: &[f64]) -> Result<Vec<CAsymptoticsRow>> {
    let a = params.alpha();
    lambdas
        .iter()
        .map(|&lam| {
            if !(lam >= 1.0) {
                return Err(Error::domain(format!("asymptotics table needs λ ≥ 1, got {lam}")));
            }
            let h = 1e-4 * lam;
            let d = plancherel_density(params, lam)?;
            let dp = (plancherel_density(params, lam + h)? - plancherel_density(params, lam - h)?) / (2.0 * h);
            let lc_plus = ln_c_function(params, C64::new(lam + h, 0.0))?;
            let lc_minus = ln_c_function(params, C64::new(lam - h, 0.0))?;
            // difference of logs taken through the quotient keeps the branch
            let dlog = (lc_plus - lc_minus).exp().ln() / (2.0 * h);
            let inv = (-ln_c_function(params, C64::new(-lam, 0.0))?.re).exp();
            Ok(CAsymptoticsRow {
                lambda: lam,
                density_ratio: d / lam.powf(2.0 * a + 1.0),
                derivative_scaled: dp * (1.0 + lam).powf(-2.0 * a),
                log_derivative_scaled: dlog.norm() * lam,
                inverse_modulus: inv,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::power_law_fit;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn h3_reduces_to_reciprocal() {
        let p = JacobiParameters::h3();
        for &lam in &[0.3, 1.0, 2.0, 17.5, 300.0] {
            let c = c_function(&p, re(lam)).unwrap();
            let want = 1.0 / (C64::i() * lam);
            assert!((c - want).norm() < 1e-12 * want.norm(), "λ={lam}");
            let d = plancherel_density(&p, lam).unwrap();
            assert!((d - lam * lam).abs() < 1e-11 * lam * lam);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        for p in [JacobiParameters::generic(), JacobiParameters::damek_ricci_like()] {
            for &lam in &[0.1, 1.0, 7.0, 120.0] {
                let a = c_function(&p, re(lam)).unwrap();
                let b = c_function(&p, re(-lam)).unwrap();
                assert!((b - a.conj()).norm() < 1e-12 * a.norm());
                assert!(((a * b).re - a.norm_sqr()).abs() < 1e-12 * a.norm_sqr());
                assert!((a * b).im.abs() < 1e-12 * a.norm_sqr());
            }
            let z = C64::new(2.0, 0.7);
            let a = c_function(&p, z).unwrap();
            let b = c_function(&p, C64::new(-2.0, 0.7)).unwrap();
            assert!((b - a.conj()).norm() < 1e-12 * a.norm(), "c(−λ̄) = conj c(λ)");
        }
    }

    #[test]
    fn reciprocal() {
        let p = JacobiParameters::generic();
        assert_eq!(inverse_c_function(&p, re(0.0)).unwrap(), C64::new(0.0, 0.0));
        let z = C64::new(1.3, 0.4);
        let prod = inverse_c_function(&p, z).unwrap() * c_function(&p, z).unwrap();
        assert!((prod - 1.0).norm() < 1e-13);
        // c(λ) vanishes at λ = iρ
        assert!(matches!(inverse_c_function(&p, C64::new(0.0, p.rho())), Err(Error::Pole(_))));
    }

    #[test]
    fn pole_at_zero() {
        let p = JacobiParameters::generic();
        assert!(matches!(c_function(&p, re(0.0)), Err(Error::Pole(_))));
        assert!(matches!(c_function(&p, C64::new(0.0, 2.0)), Err(Error::Pole(_))));
        assert_eq!(plancherel_density(&p, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn density_ratio_converges() {
        let p = JacobiParameters::h3();
        for row in c_asymptotics_report(&p, &[1.0, 10.0, 100.0]).unwrap() {
            assert!((row.density_ratio - 1.0).abs() < 1e-10);
        }
        let g = JacobiParameters::generic();
        let rows = c_asymptotics_report(&g, &[200.0, 400.0]).unwrap();
        let (r200, r400) = (rows[0].density_ratio, rows[1].density_ratio);
        assert!((r200 - r400).abs() < 0.02 * r400);
        for row in c_asymptotics_report(&g, &[1.0, 5.0, 50.0, 400.0]).unwrap() {
            assert!(row.derivative_scaled.abs() < 50.0 && row.log_derivative_scaled < 50.0);
        }
    }

    #[test]
    fn inverse_modulus_exponent() {
        for p in [JacobiParameters::generic(), JacobiParameters::damek_ricci_like()] {
            let lams: Vec<f64> = (0..=20).map(|k| 50.0 * 8f64.powf(k as f64 / 20.0)).collect();
            let rows = c_asymptotics_report(&p, &lams).unwrap();
            let x: Vec<f64> = lams.iter().map(|l| 1.0 + l).collect();
            let y: Vec<f64> = rows.iter().map(|r| r.inverse_modulus).collect();
            let (_, e) = power_law_fit(&x, &y);
            assert!((e - (p.alpha() + 0.5)).abs() < 0.05, "exponent {e}");
        }
    }
}
