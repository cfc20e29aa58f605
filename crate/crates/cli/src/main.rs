mod config;
mod data;
mod eval;
mod failure;
mod output;
mod probe;
mod report;

use clap::{Parser, Subcommand};
use failure::Failure;
use output::Sink;
use std::path::PathBuf;
use std::process::ExitCode;

/// Jacobi functions, transforms, convolution and multiplier experiments.
///
/// Exit codes: 0 success, 2 invalid input or parameters, 3 samples without
/// sufficient decay, 4 unstable experiment.
#[derive(Parser, Debug)]
#[command(name = "jacobi", version)]
struct Cli {
    /// where relative output paths are written
    #[arg(long, env = "JACOBI_OUTPUT_DIR", default_value = ".", global = true)]
    output_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// evaluate a function at points, CSV on stdout
    #[command(subcommand)]
    Eval(eval::EvalCommand),
    /// forward transform of radial samples `t,re,im`
    Transform(data::TransformArgs),
    /// inverse transform of spectral samples `lambda,re,im`
    Inverse(data::InverseArgs),
    /// convolution of two radial sample files
    Convolve(data::ConvolveArgs),
    /// heat kernel h_s on the radial grid
    Heat(data::HeatArgs),
    /// diagnostic tables, CSV on stdout or to --output
    #[command(subcommand)]
    Report(report::ReportCommand),
    /// operator-norm to symbol-norm ratios for a multiplier family
    ProbeTheorem(probe::ProbeArgs),
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let dir = &cli.output_dir;
    match &cli.command {
        Command::Eval(cmd) => print!("{}", eval::run(cmd)?),
        Command::Transform(a) => data::transform(a, dir)?,
        Command::Inverse(a) => data::inverse(a, dir)?,
        Command::Convolve(a) => data::convolve_files(a, dir)?,
        Command::Heat(a) => data::heat(a, dir)?,
        Command::Report(cmd) => {
            let (config, body) = report::run(cmd)?;
            let mut sink = Sink::new(config, dir);
            match cmd.output() {
                Some(path) => {
                    sink.write(path, &body)?;
                    sink.finish()?;
                }
                None => print!("{}", sink.render(&body)),
            }
        }
        Command::ProbeTheorem(a) => eprintln!("{}", probe::run(a, dir)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Instability(line) => eprintln!("{line}"),
                _ => eprintln!("error: {f}"),
            }
            ExitCode::from(f.code() as u8)
        }
    }
}
