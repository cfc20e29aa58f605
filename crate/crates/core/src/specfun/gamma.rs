use super::nonpositive_integer;
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::f64::consts::PI;

const POLE_TOL: f64 = 1e-14;

// Lanczos coefficients for g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn check_argument(z: C64) -> Result<()> {
    if z.re.is_nan() || z.im.is_nan() {
        return Err(Error::domain("NaN argument to Gamma"));
    }
    if let Some(n) = nonpositive_integer(z, POLE_TOL) {
        return Err(Error::Pole(format!("Gamma at nonpositive integer {n}")));
    }
    Ok(())
}

/// Γ(z) by the Lanczos approximation, reflected for Re z < 1/2.
pub fn gamma_complex(z: C64) -> Result<C64> {
    check_argument(z)?;
    Ok(lanczos(z))
}

fn lanczos(z: C64) -> C64 {
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return PI / (s * lanczos(1.0 - z));
    }
    let z = z - 1.0;
    let mut x = C64::new(LANCZOS[0], 0.0);
    for (i, &p) in LANCZOS.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let log_part = (z + 0.5) * t.ln() - t;
    (2.0 * PI).sqrt() * log_part.exp() * x
}

// B_{2k} / (2k (2k-1)) for k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// A logarithm of Γ(z) (not necessarily the principal branch of the
/// log-gamma function; `exp` of it is Γ(z)). Stable for large |Im z|, where
/// Γ itself under- or overflows.
pub fn ln_gamma(z: C64) -> Result<C64> {
    check_argument(z)?;
    let mut w = z;
    let mut shift = C64::new(0.0, 0.0);
    while w.re < 15.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = C64::new(0.0, 0.0);
    let mut p = inv;
    for &coef in &STIRLING {
        series += coef * p;
        p *= inv2;
    }
    let base = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    Ok(base + series - shift)
}
