use super::gamma::ln_gamma;
use super::{nonpositive_integer, PrecisionConfig};
use crate::error::{Error, Result};
use num_complex::Complex64 as C64;

const INT_TOL: f64 = 1e-13;

fn validate(a: C64, b: C64, c: C64, z: f64) -> Result<()> {
    let nan = |w: C64| w.re.is_nan() || w.im.is_nan();
    if nan(a) || nan(b) || nan(c) || z.is_nan() {
        return Err(Error::domain("NaN argument to 2F1"));
    }
    if let Some(n) = nonpositive_integer(c, INT_TOL) {
        return Err(Error::Parameter(format!(
            "2F1 lower parameter c = {n} is a nonpositive integer"
        )));
    }
    if z >= 1.0 {
        return Err(Error::domain(format!("2F1 argument z = {z} not below 1")));
    }
    Ok(())
}

/// Degree of the polynomial when `a` or `b` is a nonpositive integer.
fn terminating_degree(a: C64, b: C64) -> Option<usize> {
    let da = nonpositive_integer(a, INT_TOL).map(|n| (-n) as usize);
    let db = nonpositive_integer(b, INT_TOL).map(|n| (-n) as usize);
    match (da, db) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    }
}

fn polynomial(a: C64, b: C64, c: C64, z: f64, degree: usize) -> C64 {
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    for k in 0..degree {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
    }
    sum
}

fn close(x: C64, y: C64) -> bool {
    (x - y).norm() <= INT_TOL * x.norm().max(1.0)
}

/// Defining power series together with its z-derivative, for |z| < 1.
fn series_with_derivative(
    a: C64,
    b: C64,
    c: C64,
    z: f64,
    prec: &PrecisionConfig,
) -> Result<(C64, C64)> {
    if z.abs() >= 1.0 {
        return Err(Error::domain(format!("power series of 2F1 needs |z| < 1, got {z}")));
    }
    if z == 0.0 {
        return Ok((C64::new(1.0, 0.0), a * b / c));
    }
    let growth = a.norm().max(b.norm());
    let mut term = C64::new(1.0, 0.0);
    let mut sum = term;
    let mut dsum = C64::new(0.0, 0.0);
    let mut quiet = 0;
    for k in 0..prec.max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        dsum += term * ((kf + 1.0) / z);
        if term.norm() == 0.0 {
            return Ok((sum, dsum));
        }
        if term.norm() <= prec.series_tol * sum.norm() && kf > growth {
            quiet += 1;
            if quiet >= 2 {
                return Ok((sum, dsum));
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "2F1 power series",
        terms: prec.max_terms,
    })
}

/// The defining power series of ₂F₁(a, b; c; z), |z| < 1.
pub fn hyp2f1_series(a: C64, b: C64, c: C64, z: f64, prec: &PrecisionConfig) -> Result<C64> {
    validate(a, b, c, z)?;
    if let Some(n) = terminating_degree(a, b) {
        return Ok(polynomial(a, b, c, z, n));
    }
    series_with_derivative(a, b, c, z, prec).map(|(u, _)| u)
}

/// Real-parameter power series of ₂F₁ for 0 ≤ x < 1; the hot path of the
/// translation kernel, where x ≤ 1/2.
pub fn hyp2f1_real(a: f64, b: f64, c: f64, x: f64, prec: &PrecisionConfig) -> Result<f64> {
    if a.is_nan() || b.is_nan() || c.is_nan() || x.is_nan() {
        return Err(Error::domain("NaN argument to 2F1"));
    }
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("real 2F1 series needs 0 ≤ x < 1, got {x}")));
    }
    if c <= 0.0 && (c - c.round()).abs() <= INT_TOL {
        return Err(Error::Parameter(format!("2F1 lower parameter c = {c} is a nonpositive integer")));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..prec.max_terms {
        let k = k as f64;
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
        sum += term;
        if term == 0.0 || (term.abs() <= prec.series_tol * sum.abs() && k > a.abs().max(b.abs())) {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        what: "real 2F1 power series",
        terms: prec.max_terms,
    })
}

/// ₂F₁(a, b; c; z) for real z < 1 with default precision.
pub fn hyp2f1(a: C64, b: C64, c: C64, z: f64) -> Result<C64> {
    hyp2f1_with(a, b, c, z, &PrecisionConfig::default())
}

/// Power series on [0, 1); for z < 0 the Pfaff transformation
/// ₂F₁(a,b;c;z) = (1−z)^{−a} ₂F₁(a, c−b; c; z/(z−1)).
pub fn hyp2f1_with(a: C64, b: C64, c: C64, z: f64, prec: &PrecisionConfig) -> Result<C64> {
    validate(a, b, c, z)?;
    if let Some(n) = terminating_degree(a, b) {
        return Ok(polynomial(a, b, c, z, n));
    }
    if z >= 0.0 {
        return series_with_derivative(a, b, c, z, prec).map(|(u, _)| u);
    }
    let w = z / (z - 1.0);
    let cb = c - b;
    let inner = match terminating_degree(a, cb) {
        Some(n) => polynomial(a, cb, c, w, n),
        None => series_with_derivative(a, cb, c, w, prec)?.0,
    };
    Ok((-a * (1.0 - z).ln()).exp() * inner)
}

/// ₂F₁ for any real z < 1, by analytic continuation of the power series
/// along the real axis (Taylor steps of the hypergeometric ODE). Stable for
/// large parameters and for z close to 1 or far out on the negative axis.
pub fn hyp2f1_continued(a: C64, b: C64, c: C64, z: f64, prec: &PrecisionConfig) -> Result<C64> {
    HypergeometricPath::new(a, b, c, prec)?.value_at(z)
}

/// ₂F₁ for z < −1 through the connection formula at infinity. Fails when
/// b − a is an integer (the logarithmic case).
pub fn hyp2f1_reciprocal(a: C64, b: C64, c: C64, z: f64, prec: &PrecisionConfig) -> Result<C64> {
    validate(a, b, c, z)?;
    if let Some(n) = terminating_degree(a, b) {
        return Ok(polynomial(a, b, c, z, n));
    }
    ReciprocalConnection::new(a, b, c, prec)?.eval(z)
}

#[derive(Debug, Clone, Copy)]
enum Shortcut {
    Polynomial(usize),
    /// (1 − z)^{−e}
    Power(C64),
}

/// Continuation state for ₂F₁ along the real axis. Evaluating at a
/// sequence of points moving away from the origin reuses the previous
/// position, which makes sweeping a sorted grid cheap.
#[derive(Debug, Clone)]
pub struct HypergeometricPath {
    a: C64,
    b: C64,
    c: C64,
    prec: PrecisionConfig,
    start_radius: f64,
    shortcut: Option<Shortcut>,
    state: Option<(f64, C64, C64)>,
}

impl HypergeometricPath {
    pub fn new(a: C64, b: C64, c: C64, prec: &PrecisionConfig) -> Result<Self> {
        validate(a, b, c, 0.0)?;
        let shortcut = if let Some(n) = terminating_degree(a, b) {
            Some(Shortcut::Polynomial(n))
        } else if close(b, c) {
            Some(Shortcut::Power(a))
        } else if close(a, c) {
            Some(Shortcut::Power(b))
        } else {
            None
        };
        let start_radius = (4.0 / (1.0 + a.norm() * b.norm())).min(0.5);
        Ok(HypergeometricPath {
            a,
            b,
            c,
            prec: *prec,
            start_radius,
            shortcut,
            state: None,
        })
    }

    pub fn value_at(&mut self, z: f64) -> Result<C64> {
        if z.is_nan() || z >= 1.0 {
            return Err(Error::domain(format!("2F1 argument z = {z} not below 1")));
        }
        match self.shortcut {
            Some(Shortcut::Polynomial(n)) => return Ok(polynomial(self.a, self.b, self.c, z, n)),
            Some(Shortcut::Power(e)) => return Ok((-e * (1.0 - z).ln()).exp()),
            None => {}
        }
        if z.abs() <= self.start_radius {
            return series_with_derivative(self.a, self.b, self.c, z, &self.prec).map(|(u, _)| u);
        }
        let start = self.start_radius.copysign(z);
        let restart = match self.state {
            None => true,
            // only ever move outward from the start point
            Some((z0, _, _)) => z0.signum() != z.signum() || z0.abs() > z.abs(),
        };
        if restart {
            let (u, du) = series_with_derivative(self.a, self.b, self.c, start, &self.prec)?;
            self.state = Some((start, u, du));
        }
        let (mut z0, mut u, mut du) = self.state.expect("state initialized");
        let ab = (self.a * self.b).norm().max(1e-300);
        while z0 != z {
            let dist = if z0 < 0.0 { -z0 } else { z0.min(1.0 - z0) };
            let p0 = (z0 * (1.0 - z0)).abs();
            let hmax = (0.5 * dist).min(2.0 * (p0 / ab).sqrt());
            let gap = z - z0;
            let (h, next) = if gap.abs() <= hmax { (gap, z) } else { (hmax.copysign(gap), z0 + hmax.copysign(gap)) };
            let (nu, ndu) = self.taylor_step(z0, u, du, h)?;
            z0 = next;
            u = nu;
            du = ndu;
        }
        self.state = Some((z0, u, du));
        Ok(u)
    }

    fn taylor_step(&self, z0: f64, u: C64, du: C64, h: f64) -> Result<(C64, C64)> {
        let (a, b, c) = (self.a, self.b, self.c);
        let p0 = z0 * (1.0 - z0);
        let p1 = 1.0 - 2.0 * z0;
        let q0 = c - (a + b + 1.0) * z0;
        let q1 = -(a + b + 1.0);
        let r = -(a * b);
        // scaled coefficients d_n = c_n h^n
        let mut d_prev = u;
        let mut d_cur = du * h;
        let mut sum = d_prev + d_cur;
        let mut dsum = d_cur;
        let cap = self.prec.max_terms.min(2000);
        for n in 0..cap {
            let nf = n as f64;
            let next = -((p1 * nf * (nf + 1.0) + q0 * (nf + 1.0)) * h * d_cur
                + (r + q1 * nf - nf * (nf - 1.0)) * (h * h) * d_prev)
                / (p0 * (nf + 1.0) * (nf + 2.0));
            sum += next;
            dsum += next * (nf + 2.0);
            if n >= 2 && next.norm() + d_cur.norm() <= self.prec.series_tol * sum.norm() {
                return Ok((sum, dsum / h));
            }
            d_prev = d_cur;
            d_cur = next;
        }
        Err(Error::NonConvergence {
            what: "2F1 Taylor continuation step",
            terms: cap,
        })
    }
}

/// Connection of ₂F₁ at z = ∞:
/// Γ(c)Γ(b−a)/(Γ(b)Γ(c−a)) (−z)^{−a} ₂F₁(a, a−c+1; a−b+1; 1/z) + (a ↔ b).
#[derive(Debug, Clone)]
pub struct ReciprocalConnection {
    a: C64,
    b: C64,
    c: C64,
    prec: PrecisionConfig,
    // logarithms of the two Gamma quotients; None when a reciprocal Gamma vanishes
    ln_coef_a: Option<C64>,
    ln_coef_b: Option<C64>,
}

fn ln_quotient(c: C64, num: C64, den1: C64, den2: C64) -> Result<Option<C64>> {
    if nonpositive_integer(den1, INT_TOL).is_some() || nonpositive_integer(den2, INT_TOL).is_some() {
        return Ok(None);
    }
    Ok(Some(ln_gamma(c)? + ln_gamma(num)? - ln_gamma(den1)? - ln_gamma(den2)?))
}

impl ReciprocalConnection {
    pub fn new(a: C64, b: C64, c: C64, prec: &PrecisionConfig) -> Result<Self> {
        validate(a, b, c, 0.0)?;
        let diff = b - a;
        if diff.im.abs() <= INT_TOL && (diff.re - diff.re.round()).abs() <= INT_TOL {
            return Err(Error::Parameter(format!(
                "b − a = {diff} is an integer; connection at infinity is logarithmic"
            )));
        }
        Ok(ReciprocalConnection {
            a,
            b,
            c,
            prec: *prec,
            ln_coef_a: ln_quotient(c, b - a, b, c - a)?,
            ln_coef_b: ln_quotient(c, a - b, a, c - b)?,
        })
    }

    pub fn eval(&self, z: f64) -> Result<C64> {
        if !(z < -1.0) {
            return Err(Error::domain(format!("connection at infinity needs z < −1, got {z}")));
        }
        self.eval_log((-z).ln())
    }

    /// Same as [`eval`](Self::eval) at z = −e^{ln_mz}, for arguments whose
    /// magnitude would overflow.
    pub fn eval_log(&self, ln_mz: f64) -> Result<C64> {
        if !(ln_mz > 0.0) {
            return Err(Error::domain(format!("connection at infinity needs ln(−z) > 0, got {ln_mz}")));
        }
        let inv = -(-ln_mz).exp();
        let mut total = C64::new(0.0, 0.0);
        for (p, q, lc) in [(self.a, self.b, self.ln_coef_a), (self.b, self.a, self.ln_coef_b)] {
            if let Some(lc) = lc {
                let s = hyp2f1_series(p, p - self.c + 1.0, p - q + 1.0, inv, &self.prec)?;
                total += (lc - p * ln_mz).exp() * s;
            }
        }
        Ok(total)
    }
}
