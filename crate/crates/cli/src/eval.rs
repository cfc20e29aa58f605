//! Point evaluations printed as CSV on stdout.

use crate::config::{ParamArgs, RunConfig};
use crate::failure::Failure;
use clap::Subcommand;
use jacobi::convolution::kernel_k;
use jacobi::jacobi_core::{c_function, jacobi_phi};
use jacobi::multiplier::omega;
use jacobi::transform::fmt_num;
use num_complex::Complex64 as C64;
use serde_json::json;
use std::fmt::Write as _;

#[derive(Subcommand, Debug)]
pub enum EvalCommand {
    /// φ_λ(t), one row per (λ, t)
    Phi {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, num_args = 1.., default_value = "0", allow_negative_numbers = true)]
        lambda: Vec<f64>,
        /// imaginary part shared by every λ
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda_im: f64,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        t: Vec<f64>,
    },
    /// Harish-Chandra c-function
    C {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda_im: f64,
    },
    /// ω(λ), the Gamma-quotient symbol factor
    Omega {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        lambda: Vec<f64>,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        lambda_im: f64,
    },
    /// Product-formula kernel K(s, t, u)
    #[command(name = "kernel-K")]
    KernelK {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_negative_numbers = true)]
        s: f64,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
        u: Vec<f64>,
    },
}

fn row(out: &mut String, cells: &[f64]) {
    let cells: Vec<String> = cells.iter().map(|&x| fmt_num(x)).collect();
    let _ = writeln!(out, "{}", cells.join(","));
}

pub fn run(cmd: &EvalCommand) -> Result<String, Failure> {
    let (config, body) = match cmd {
        EvalCommand::Phi {
            params,
            lambda,
            lambda_im,
            t,
        } => {
            let p = params.resolve()?;
            let mut body = String::from("lambda_re,lambda_im,t,re,im\n");
            for &l in lambda {
                let z = C64::new(l, *lambda_im);
                for &x in t {
                    let v = jacobi_phi(&p, z, x)?;
                    row(&mut body, &[l, *lambda_im, x, v.re, v.im]);
                }
            }
            let args = json!({ "function": "phi", "lambda": lambda, "lambda_im": lambda_im, "t": t });
            (RunConfig::new("eval", &p, None, args), body)
        }
        EvalCommand::C {
            params,
            lambda,
            lambda_im,
        } => {
            let p = params.resolve()?;
            let mut body = String::from("lambda_re,lambda_im,re,im,modulus\n");
            for &l in lambda {
                let v = c_function(&p, C64::new(l, *lambda_im))?;
                row(&mut body, &[l, *lambda_im, v.re, v.im, v.norm()]);
            }
            let args = json!({ "function": "c", "lambda": lambda, "lambda_im": lambda_im });
            (RunConfig::new("eval", &p, None, args), body)
        }
        EvalCommand::Omega {
            params,
            lambda,
            lambda_im,
        } => {
            let p = params.resolve()?;
            let mut body = String::from("lambda_re,lambda_im,re,im\n");
            for &l in lambda {
                let v = omega(&p, C64::new(l, *lambda_im))?;
                row(&mut body, &[l, *lambda_im, v.re, v.im]);
            }
            let args = json!({ "function": "omega", "lambda": lambda, "lambda_im": lambda_im });
            (RunConfig::new("eval", &p, None, args), body)
        }
        EvalCommand::KernelK { params, s, t, u } => {
            let p = params.resolve()?;
            let mut body = String::from("s,t,u,value\n");
            for &x in u {
                let k = kernel_k(&p, *s, *t, x)?;
                row(&mut body, &[*s, *t, x, k.value]);
            }
            let args = json!({ "function": "kernel-K", "s": s, "t": t, "u": u });
            (RunConfig::new("eval", &p, None, args), body)
        }
    };
    Ok(format!("# {}\n{body}", config.header()))
}
