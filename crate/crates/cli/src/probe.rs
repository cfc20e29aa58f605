//! The multiplier-theorem experiment over a family manifest.

use crate::config::{ParamArgs, RunConfig};
use crate::failure::Failure;
use crate::output::Sink;
use clap::Args;
use jacobi::multiplier::{theorem_ratio_experiment, ExperimentConfig, FamilyManifest, TheoremReport};
use jacobi::transform::fmt_num;
use serde_json::json;
use std::path::{Path, PathBuf};

#[derive(Args, Debug)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// family manifest (JSON), or `standard` for the built-in five members
    #[arg(long)]
    pub family: String,
    #[arg(long, allow_negative_numbers = true)]
    pub p: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 24)]
    pub trials: usize,
    /// also run the dual exponent p/(p−1) and report ratio quotients;
    /// informational, it does not affect the exit code
    #[arg(long)]
    pub duality: bool,
    /// CSV destination; stdout when absent
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn verdict(r: &TheoremReport) -> String {
    let included = r.rows.iter().filter(|row| !row.excluded).count();
    let worst = r
        .rows
        .iter()
        .filter(|row| !row.excluded)
        .map(|row| row.instability)
        .fold(0.0, f64::max);
    format!(
        "verdict: {} p={} members={} included={} max_ratio={} max_instability={}",
        if r.passes() { "PASS" } else { "FAIL" },
        fmt_num(r.p),
        r.rows.len(),
        included,
        fmt_num(r.max_ratio),
        fmt_num(worst)
    )
}

/// Returns the verdict line; `Err(Instability)` when the family fails.
pub fn run(a: &ProbeArgs, out_dir: &Path) -> Result<String, Failure> {
    let p = a.params.resolve()?;
    if a.trials == 0 {
        return Err(Failure::Domain("need at least one trial".into()));
    }
    let config = ExperimentConfig {
        trials: a.trials,
        ..ExperimentConfig::default()
    };
    let args = json!({ "family": a.family, "p": a.p, "trials": a.trials, "duality": a.duality });
    let run = RunConfig::new("probe-theorem", &p, Some(config.fine), args).with_seed(a.seed);
    let mut sink = Sink::new(run, out_dir);
    let manifest = if a.family == "standard" {
        FamilyManifest::standard()
    } else {
        let text = sink.read_input(Path::new(&a.family))?;
        FamilyManifest::parse(&text).map_err(|e| Failure::Domain(format!("bad manifest {}: {e}", a.family)))?
    };
    let specs = manifest
        .specs()
        .map_err(|e| Failure::Domain(format!("bad manifest {}: {e}", a.family)))?;
    if specs.is_empty() {
        return Err(Failure::Domain(format!("manifest {} has no members", a.family)));
    }

    let report = theorem_ratio_experiment(&p, &specs, a.p, a.seed, &config)?;
    let mut body = report.to_csv("probe-theorem");
    if a.duality {
        if !(a.p > 1.0) || a.p == 2.0 {
            return Err(Failure::Domain(format!("duality needs p > 1, p ≠ 2, got {}", a.p)));
        }
        let dual = theorem_ratio_experiment(&p, &specs, a.p / (a.p - 1.0), a.seed, &config)?;
        for (x, y) in report.rows.iter().zip(&dual.rows) {
            body.push_str(&format!(
                "# duality {}: ratio(p)/ratio(p') = {}\n",
                x.member,
                fmt_num(x.ratio / y.ratio)
            ));
        }
    }
    let line = verdict(&report);
    match &a.output {
        Some(path) => {
            sink.write(path, &body)?;
            sink.finish()?;
        }
        None => print!("{}", sink.render(&body)),
    }
    if report.passes() {
        Ok(line)
    } else {
        Err(Failure::Instability(line))
    }
}
