//! File-to-file commands on sampled functions.

use crate::config::{convolution_grid, GridArgs, ParamArgs, RunConfig};
use crate::failure::Failure;
use crate::output::Sink;
use clap::Args;
use jacobi::convolution::convolve;
use jacobi::transform::{CsvTable, GridSpec, SampledRadialFunction, SampledSpectralFunction, TransformPlan, DECAY_LIMIT};
use num_complex::Complex64 as C64;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV with header `t,re,im`
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct InverseArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// CSV with header `lambda,re,im`
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct ConvolveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub g: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args, Debug)]
pub struct HeatArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    /// radial samples h_s(t)
    #[arg(long)]
    pub output: PathBuf,
    /// also write the spectral samples e^{−s(λ²+ρ²)}
    #[arg(long)]
    pub spectral_output: Option<PathBuf>,
}

fn table(sink: &mut Sink, path: &Path, column: &str) -> Result<CsvTable, Failure> {
    let text = sink.read_input(path)?;
    let t = CsvTable::parse(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    if t.column != column {
        return Err(Failure::Domain(format!(
            "{}: first column is {:?}, expected {column:?}",
            path.display(),
            t.column
        )));
    }
    if t.rows.is_empty() {
        return Err(Failure::Domain(format!("{}: no samples", path.display())));
    }
    Ok(t)
}

/// Values of an even function on `nodes`. Samples already on the nodes are
/// taken as they are; otherwise local Lagrange interpolation of degree 7 on
/// the evenly reflected samples, and zero past the last sample provided the
/// samples have decayed there.
fn resample(t: &CsvTable, nodes: &[f64]) -> Result<Vec<C64>, Failure> {
    let xs: Vec<f64> = t.rows.iter().map(|r| r.0).collect();
    let vs: Vec<C64> = t.rows.iter().map(|r| r.1).collect();
    if xs.iter().any(|x| !x.is_finite()) || vs.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Failure::Domain("non-finite sample".into()));
    }
    if xs.len() == nodes.len() && xs.iter().zip(nodes).all(|(a, b)| (a - b).abs() <= 1e-12 * b.abs().max(1.0)) {
        return Ok(vs);
    }
    if xs[0] < 0.0 || xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Failure::Domain("sample abscissae must be nonnegative and increasing".into()));
    }
    const WIDTH: usize = 8;
    if xs.len() < WIDTH {
        return Err(Failure::Domain(format!("need at least {WIDTH} samples to interpolate")));
    }
    let max = vs.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let last = *xs.last().expect("nonempty");
    let mut ext_x: Vec<f64> = xs.iter().skip(usize::from(xs[0] == 0.0)).rev().map(|x| -x).collect();
    let mut ext_v: Vec<C64> = vs.iter().skip(usize::from(xs[0] == 0.0)).rev().copied().collect();
    ext_x.extend_from_slice(&xs);
    ext_v.extend_from_slice(&vs);
    let mut out = Vec::with_capacity(nodes.len());
    for &z in nodes {
        if z > last {
            if vs.last().expect("nonempty").norm() >= DECAY_LIMIT * max {
                return Err(Failure::Decay(format!(
                    "samples end at {last} without decaying, grid reaches {}",
                    nodes.last().expect("nonempty")
                )));
            }
            out.push(C64::new(0.0, 0.0));
            continue;
        }
        let k = ext_x.partition_point(|&x| x < z);
        let start = k.saturating_sub(WIDTH / 2).min(ext_x.len() - WIDTH);
        let (wx, wv) = (&ext_x[start..start + WIDTH], &ext_v[start..start + WIDTH]);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..WIDTH {
            let mut w = 1.0;
            for j in 0..WIDTH {
                if j != i {
                    w *= (z - wx[j]) / (wx[i] - wx[j]);
                }
            }
            acc += wv[i] * w;
        }
        out.push(acc);
    }
    Ok(out)
}

fn radial_table(f: &SampledRadialFunction) -> String {
    CsvTable::new("t", f.grid.nodes.iter().copied().zip(f.values.iter().copied()).collect()).render()
}

fn spectral_table(g: &SampledSpectralFunction) -> String {
    CsvTable::new("lambda", g.grid.nodes.iter().copied().zip(g.values.iter().copied()).collect()).render()
}

fn plan(params: &ParamArgs, grid: &GridArgs, base: GridSpec) -> Result<(Arc<TransformPlan>, GridSpec), Failure> {
    let p = params.resolve()?;
    let spec = grid.over(base)?;
    Ok((spec.plan(&p)?, spec))
}

fn path_arg(p: &Path) -> String {
    p.display().to_string()
}

pub fn transform(a: &TransformArgs, out_dir: &Path) -> Result<(), Failure> {
    let (plan, spec) = plan(&a.params, &a.grid, GridSpec::default())?;
    let args = json!({ "input": path_arg(&a.input), "output": path_arg(&a.output) });
    let mut sink = Sink::new(RunConfig::new("transform", plan.params(), Some(spec), args), out_dir);
    let t = table(&mut sink, &a.input, "t")?;
    let f = SampledRadialFunction::new(Arc::clone(plan.radial()), resample(&t, &plan.radial().nodes)?)?;
    let g = plan.forward(&f)?;
    sink.write(&a.output, &spectral_table(&g))?;
    sink.finish()
}

pub fn inverse(a: &InverseArgs, out_dir: &Path) -> Result<(), Failure> {
    let (plan, spec) = plan(&a.params, &a.grid, GridSpec::default())?;
    let args = json!({ "input": path_arg(&a.input), "output": path_arg(&a.output) });
    let mut sink = Sink::new(RunConfig::new("inverse", plan.params(), Some(spec), args), out_dir);
    let t = table(&mut sink, &a.input, "lambda")?;
    let g = SampledSpectralFunction::new(Arc::clone(plan.spectral()), resample(&t, &plan.spectral().nodes)?)?;
    let f = plan.inverse(&g)?;
    sink.write(&a.output, &radial_table(&f))?;
    sink.finish()
}

pub fn convolve_files(a: &ConvolveArgs, out_dir: &Path) -> Result<(), Failure> {
    let p = a.params.resolve()?;
    let spec = a.grid.over(convolution_grid())?;
    let (rg, _) = spec.build(&p)?;
    let args = json!({ "f": path_arg(&a.f), "g": path_arg(&a.g), "output": path_arg(&a.output) });
    let mut sink = Sink::new(RunConfig::new("convolve", &p, Some(spec), args), out_dir);
    let tf = table(&mut sink, &a.f, "t")?;
    let tg = table(&mut sink, &a.g, "t")?;
    let f = SampledRadialFunction::new(Arc::clone(&rg), resample(&tf, &rg.nodes)?)?;
    let g = SampledRadialFunction::new(Arc::clone(&rg), resample(&tg, &rg.nodes)?)?;
    let h = convolve(&p, &f, &g)?;
    sink.write(&a.output, &radial_table(&h))?;
    sink.finish()
}

pub fn heat(a: &HeatArgs, out_dir: &Path) -> Result<(), Failure> {
    let (plan, spec) = plan(&a.params, &a.grid, GridSpec::default())?;
    let args = json!({
        "s": a.s,
        "output": path_arg(&a.output),
        "spectral_output": a.spectral_output.as_deref().map(path_arg),
    });
    let mut sink = Sink::new(RunConfig::new("heat", plan.params(), Some(spec), args), out_dir);
    let g = jacobi::transform::heat_multiplier(plan.spectral(), a.s)?;
    let h = plan.inverse(&g)?;
    sink.write(&a.output, &radial_table(&h))?;
    if let Some(path) = &a.spectral_output {
        sink.write(path, &spectral_table(&g))?;
    }
    sink.finish()
}
