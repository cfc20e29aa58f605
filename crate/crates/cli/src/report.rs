//! Diagnostic tables.
//!
//! Column schemas:
//! - c-asymptotics: `lambda,density_ratio,derivative_scaled,log_derivative_scaled,inverse_modulus`
//! - gangolli: `k_max,c,d,slope`
//! - expansion-errors: `kind,lambda,t,terms,error`, kind `local` (Bessel
//!   expansion with `terms` terms) or `series` (Harish-Chandra series with
//!   `terms` coefficients, error relative to |c(λ)|e^{−ρt})
//! - hormander-w: `alpha,beta,expected_slope,slope_w,slope_w1,slope_w_full,slope_w1_full,sup_w,sup_lambda_w1,noise_warning,within_bounds`

use crate::config::{ParamArgs, RunConfig};
use crate::failure::Failure;
use clap::Subcommand;
use jacobi::jacobi_core::{
    bessel_local_expansion, c_asymptotics_report, c_function, gangolli_fit, jacobi_phi, HarishChandraSeries, DEFAULT_R0,
};
use jacobi::multiplier::w_report;
use jacobi::transform::fmt_num;
use num_complex::Complex64 as C64;
use serde_json::json;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Subcommand, Debug)]
pub enum ReportCommand {
    /// growth of the c-function on a geometric λ grid in [1, lmax]
    CAsymptotics {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 400.0)]
        lmax: f64,
        #[arg(long, default_value_t = 24)]
        points: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// envelope fit |Γ_k(λ)| ≤ C(1+k)^d
    Gangolli {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 64)]
        kmax: usize,
        #[arg(long, num_args = 1.., default_values_t = [0.5, 1.0, 3.0, 8.0])]
        lambda: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// residuals of the local Bessel expansion and the Harish-Chandra series
    ExpansionErrors {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, num_args = 1.., default_values_t = [1.0, 4.0, 16.0])]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = 2)]
        terms: usize,
        #[arg(long, default_value_t = 40)]
        kmax: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// symbol bounds of w on [1, lmax]
    HormanderW {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 400.0)]
        lmax: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

impl ReportCommand {
    pub fn output(&self) -> Option<&PathBuf> {
        match self {
            ReportCommand::CAsymptotics { output, .. }
            | ReportCommand::Gangolli { output, .. }
            | ReportCommand::ExpansionErrors { output, .. }
            | ReportCommand::HormanderW { output, .. } => output.as_ref(),
        }
    }
}

fn row(out: &mut String, cells: &[String]) {
    let _ = writeln!(out, "{}", cells.join(","));
}

fn nums(xs: &[f64]) -> Vec<String> {
    xs.iter().map(|&x| fmt_num(x)).collect()
}

pub fn run(cmd: &ReportCommand) -> Result<(RunConfig, String), Failure> {
    match cmd {
        ReportCommand::CAsymptotics {
            params, lmax, points, ..
        } => {
            let p = params.resolve()?;
            if !(*lmax > 1.0 && lmax.is_finite()) || *points < 2 {
                return Err(Failure::Domain(format!("need lmax > 1 and at least 2 points, got {lmax}, {points}")));
            }
            let lambdas: Vec<f64> = (0..*points)
                .map(|k| lmax.powf(k as f64 / (*points - 1) as f64))
                .collect();
            let mut body = String::from("lambda,density_ratio,derivative_scaled,log_derivative_scaled,inverse_modulus\n");
            for r in c_asymptotics_report(&p, &lambdas)? {
                row(
                    &mut body,
                    &nums(&[r.lambda, r.density_ratio, r.derivative_scaled, r.log_derivative_scaled, r.inverse_modulus]),
                );
            }
            let args = json!({ "report": "c-asymptotics", "lmax": lmax, "points": points });
            Ok((RunConfig::new("report", &p, None, args), body))
        }
        ReportCommand::Gangolli {
            params, kmax, lambda, ..
        } => {
            let p = params.resolve()?;
            let lams: Vec<C64> = lambda.iter().map(|&l| C64::new(l, 0.0)).collect();
            let fit = gangolli_fit(&p, *kmax, &lams)?;
            let mut body = String::from("k_max,c,d,slope\n");
            let mut cells = vec![kmax.to_string()];
            cells.extend(nums(&[fit.c, fit.d, fit.slope]));
            row(&mut body, &cells);
            let args = json!({ "report": "gangolli", "kmax": kmax, "lambda": lambda });
            Ok((RunConfig::new("report", &p, None, args), body))
        }
        ReportCommand::ExpansionErrors {
            params,
            lambda,
            terms,
            kmax,
            ..
        } => {
            let p = params.resolve()?;
            let mut body = String::from("kind,lambda,t,terms,error\n");
            for &l in lambda {
                for k in 0..12 {
                    let t = 0.5 * 0.7f64.powi(k);
                    if t > DEFAULT_R0 {
                        continue;
                    }
                    let e = bessel_local_expansion(&p, l, t, *terms)?;
                    let mut cells = vec!["local".to_string(), fmt_num(l), fmt_num(t), terms.to_string()];
                    cells.push(fmt_num(e.error));
                    row(&mut body, &cells);
                }
            }
            for &l in lambda {
                for t in [2.0, 3.0, 5.0, 8.0] {
                    let z = C64::new(l, 0.0);
                    let series = HarishChandraSeries::phi(&p, z, t, *kmax)?;
                    let direct = jacobi_phi(&p, z, t)?;
                    let env = (-p.rho() * t).exp() * c_function(&p, z)?.norm();
                    let mut cells = vec!["series".to_string(), fmt_num(l), fmt_num(t), kmax.to_string()];
                    cells.push(fmt_num((series - direct).norm() / env));
                    row(&mut body, &cells);
                }
            }
            let args = json!({ "report": "expansion-errors", "lambda": lambda, "terms": terms, "kmax": kmax });
            Ok((RunConfig::new("report", &p, None, args), body))
        }
        ReportCommand::HormanderW { params, lmax, .. } => {
            let p = params.resolve()?;
            let w = w_report(&p, *lmax)?;
            let h = &w.hormander;
            let mut body = String::from(
                "alpha,beta,expected_slope,slope_w,slope_w1,slope_w_full,slope_w1_full,sup_w,sup_lambda_w1,noise_warning,within_bounds\n",
            );
            let mut cells = nums(&[
                w.alpha,
                w.beta,
                w.expected_slope,
                h.slope_g,
                h.slope_g1,
                h.slope_g_full,
                h.slope_g1_full,
                h.sup_g,
                h.sup_lambda_g1,
            ]);
            cells.push(h.noise_warning.to_string());
            cells.push(w.within_bounds().to_string());
            row(&mut body, &cells);
            let args = json!({ "report": "hormander-w", "lmax": lmax });
            Ok((RunConfig::new("report", &p, None, args), body))
        }
    }
}
