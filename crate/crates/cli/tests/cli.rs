use jacobi::transform::{CsvTable, GridSpec};
use jacobi::JacobiParameters;
use num_complex::Complex64 as C64;
use std::path::Path;
use std::process::{Command, Output};

fn jacobi(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jacobi"))
        .args(args)
        .current_dir(dir)
        .env_remove("JACOBI_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV, header comment and column line dropped.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn table(path: &Path) -> CsvTable {
    CsvTable::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_phi_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = stdout(&jacobi(dir.path(), &["eval", "phi", "--alpha", "0.5", "--beta", "-0.5", "--lambda", "2", "--t", "1"]));
    let r = rows(&out);
    let want = 2f64.sin() / (2.0 * 1f64.sinh());
    assert!((num(&r[0][3]) - want).abs() < 1e-13);
    // 15 significant digits
    let mantissa = r[0][3].split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 15);
    assert!(out.starts_with("# jacobi "));

    let r = rows(&stdout(&jacobi(dir.path(), &["eval", "phi", "--t", "0"])));
    assert_eq!(num(&r[0][3]), 1.0);
}

#[test]
fn eval_c_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let r = rows(&stdout(&jacobi(dir.path(), &["eval", "c", "--alpha", "0.5", "--beta", "-0.5", "--lambda", "3"])));
    assert!((num(&r[0][4]) - 1.0 / 3.0).abs() < 1e-14);

    for args in [
        &["eval", "c", "--lambda", "0"][..],
        &["eval", "phi", "--alpha", "0.2", "--beta", "0.1", "--t", "1"],
        &["eval", "kernel-K", "--s", "-1", "--t", "1", "--u", "1"],
    ] {
        let o = jacobi(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(String::from_utf8_lossy(&o.stderr).trim().lines().count(), 1, "{args:?}");
    }
    // rejected by the argument parser, with a usage hint
    let o = jacobi(dir.path(), &["eval", "phi", "--preset", "nope", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn heat_transform_inverse_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let s = 0.5;
    stdout(&jacobi(d, &["heat", "--preset", "generic", "--s", "0.5", "--output", "h.csv"]));
    stdout(&jacobi(d, &["transform", "--preset", "generic", "--input", "h.csv", "--output", "hh.csv"]));
    stdout(&jacobi(d, &["inverse", "--preset", "generic", "--input", "hh.csv", "--output", "h2.csv"]));

    let rho = JacobiParameters::generic().rho();
    let spec = table(&d.join("hh.csv"));
    assert_eq!(spec.column, "lambda");
    for (l, v) in &spec.rows {
        let want = (-s * (l * l + rho * rho)).exp();
        assert!((v - want).norm() < 1e-10, "λ={l}: {v} vs {want}");
    }
    let (a, b) = (table(&d.join("h.csv")), table(&d.join("h2.csv")));
    let num: f64 = a.rows.iter().zip(&b.rows).map(|(x, y)| (x.1 - y.1).norm_sqr()).sum();
    let den: f64 = a.rows.iter().map(|x| x.1.norm_sqr()).sum();
    assert!((num / den).sqrt() < 1e-6);

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.join("hh.manifest.json")).unwrap()).unwrap();
    let hash = manifest["config_sha256"].as_str().unwrap();
    assert!(a.comments.len() == 1 && spec.comments[0].ends_with(hash));
    assert_eq!(manifest["inputs"][0]["path"], "h.csv");
    assert_eq!(manifest["config"]["grids"]["radial_panels"], 400);
}

#[test]
fn outputs_are_byte_identical_and_follow_the_output_dir() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["heat", "--preset", "h3", "--s", "1", "--radial-panels", "100", "--output", "h.csv"];
    stdout(&jacobi(a.path(), &args));
    let o = Command::new(env!("CARGO_BIN_EXE_jacobi"))
        .args(args)
        .current_dir(a.path())
        .env("JACOBI_OUTPUT_DIR", b.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    for name in ["h.csv", "h.manifest.json"] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    // no temporary files left behind
    assert_eq!(std::fs::read_dir(b.path()).unwrap().count(), 2);
}

#[test]
fn input_schema_and_decay_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("empty.csv"), "").unwrap();
    std::fs::write(d.join("header.csv"), "t,re,im\n").unwrap();
    std::fs::write(d.join("wrong.csv"), "lambda,re,im\n0,1,0\n").unwrap();
    std::fs::write(d.join("junk.csv"), "t,re,im\n0,x,0\n").unwrap();
    let slow: String = (0..=800).map(|i| format!("{},{},0\n", i as f64 * 0.01, (-(i as f64) * 0.01).exp())).collect();
    std::fs::write(d.join("slow.csv"), format!("t,re,im\n{slow}")).unwrap();
    for (file, code) in [("empty.csv", 2), ("header.csv", 2), ("wrong.csv", 2), ("junk.csv", 2), ("slow.csv", 3)] {
        let o = jacobi(d, &["transform", "--input", file, "--output", "out.csv"]);
        assert_eq!(o.status.code(), Some(code), "{file}: {}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(!d.join("out.csv").exists());
}

#[test]
fn off_grid_samples_are_interpolated() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let f = |t: f64| (-t * t).exp();
    let body: String = (0..=900).map(|i| format!("{},{},0\n", i as f64 * 0.01, f(i as f64 * 0.01))).collect();
    std::fs::write(d.join("g.csv"), format!("t,re,im\n{body}")).unwrap();
    stdout(&jacobi(d, &["transform", "--preset", "h3", "--input", "g.csv", "--output", "gh.csv"]));

    let p = JacobiParameters::h3();
    let plan = GridSpec::default().plan(&p).unwrap();
    let exact = plan.forward(&plan.radial().sample(|t| C64::new(f(t), 0.0))).unwrap();
    let got = table(&d.join("gh.csv"));
    let top = exact.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for ((_, v), w) in got.rows.iter().zip(&exact.values) {
        assert!((v - w).norm() < 1e-9 * top, "{v} vs {w}");
    }
}

#[test]
fn convolving_heat_kernels_adds_times() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let grid = ["--t-max", "8", "--radial-panels", "30", "--lambda-max", "40", "--spectral-panels", "80"];
    for (s, name) in [("0.25", "a.csv"), ("0.5", "b.csv")] {
        let mut args = vec!["heat", "--preset", "h3", "--s", s, "--output", name];
        args.extend(grid);
        stdout(&jacobi(d, &args));
    }
    stdout(&jacobi(d, &["convolve", "--preset", "h3", "--f", "a.csv", "--g", "a.csv", "--output", "c.csv"]));
    let (b, c) = (table(&d.join("b.csv")), table(&d.join("c.csv")));
    let num: f64 = b.rows.iter().zip(&c.rows).map(|(x, y)| (x.1 - y.1).norm_sqr()).sum();
    let den: f64 = b.rows.iter().map(|x| x.1.norm_sqr()).sum();
    assert!((num / den).sqrt() < 1e-4, "{}", (num / den).sqrt());
}

#[test]
fn reports() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let r = rows(&stdout(&jacobi(d, &["report", "c-asymptotics", "--lmax", "400"])));
    let ratio: Vec<f64> = r.iter().map(|row| num(&row[1])).collect();
    let n = ratio.len();
    assert!((ratio[n - 1] / ratio[n - 2] - 1.0).abs() < 0.02);

    let r = rows(&stdout(&jacobi(d, &["report", "gangolli", "--kmax", "64"])));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][0], "64");
    assert!(num(&r[0][2]) >= 0.0);

    for preset in ["h3", "generic", "damek-ricci-like"] {
        let r = rows(&stdout(&jacobi(d, &["report", "hormander-w", "--preset", preset])));
        assert_eq!(r[0][10], "true", "{preset}");
    }

    stdout(&jacobi(d, &["report", "expansion-errors", "--output", "e.csv"]));
    let text = std::fs::read_to_string(d.join("e.csv")).unwrap();
    assert!(rows(&text).iter().all(|row| num(&row[4]).is_finite()));
    assert!(d.join("e.manifest.json").exists());

    for args in [
        &["report", "c-asymptotics", "--lmax", "0.5"][..],
        &["report", "gangolli", "--kmax", "4"],
        &["report", "hormander-w", "--lmax", "1"],
    ] {
        assert_eq!(jacobi(d, args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn probe_theorem_standard_family_passes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = jacobi(d, &["probe-theorem", "--preset", "h3", "--family", "standard", "--p", "2", "--seed", "7", "--output", "p.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("verdict: PASS"));
    let r = rows(&std::fs::read_to_string(d.join("p.csv")).unwrap());
    assert_eq!(r.len(), 5);
    assert!(r.iter().all(|row| num(&row[5]).is_finite() && row[6].is_empty()));
}

#[test]
fn probe_theorem_manifest_handling() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("fam.json"),
        r#"{"members": [
            {"label": "odd", "expression": "lambda*exp(-lambda^2)"},
            {"label": "heat", "expression": "exp(-(lambda^2+rho^2))"}
        ]}"#,
    )
    .unwrap();
    let o = jacobi(d, &["probe-theorem", "--preset", "h3", "--family", "fam.json", "--p", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&String::from_utf8(o.stdout).unwrap());
    assert!(r[0][6].contains("excluded"));
    assert!(!r[1][6].contains("excluded"));

    std::fs::write(d.join("bad.json"), r#"{"members": 3}"#).unwrap();
    std::fs::write(d.join("expr.json"), r#"{"members": [{"label": "x", "expression": "exp(("}]}"#).unwrap();
    for family in ["bad.json", "expr.json", "missing.json"] {
        let o = jacobi(d, &["probe-theorem", "--family", family, "--p", "2"]);
        assert_eq!(o.status.code(), Some(2), "{family}");
    }
}

#[test]
fn probe_theorem_instability_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = jacobi(
        dir.path(),
        &["probe-theorem", "--preset", "damek-ricci-like", "--family", "standard", "--p", "1.2"],
    );
    assert_eq!(o.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("verdict: FAIL"));
}

#[test]
fn probe_theorem_duality_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let o = jacobi(
        dir.path(),
        &["probe-theorem", "--preset", "h3", "--family", "standard", "--p", "1.5", "--duality"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let quotients: Vec<f64> = text
        .lines()
        .filter_map(|l| l.strip_prefix("# duality "))
        .map(|l| num(l.rsplit(' ').next().unwrap()))
        .collect();
    assert_eq!(quotients.len(), 5);
    assert!(quotients.iter().all(|q| q.is_finite() && *q > 0.0));
}
