use std::path::Path;
use std::process::{Command, Output};

use pacflab_core::special::zeta;
use serde_json::Value;

fn pacflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pacflab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let headers = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (headers, rows)
}

fn col(rows: &[Vec<String>], i: usize) -> Vec<f64> {
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr)
        .unwrap_or_else(|_| panic!("stderr: {}", String::from_utf8_lossy(&out.stderr)))
}

#[test]
fn pacf_both_methods_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = pacflab(&[
        "pacf",
        "--model",
        r#"{"d":0.3,"phi":[1],"theta":[1]}"#,
        "--n-max",
        "50",
        "--method",
        "both",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (headers, rows) = read_csv(&dir.path().join("pacf.csv"));
    assert_eq!(headers, ["n", "alpha_repr", "alpha_levinson", "abs_diff"]);
    assert_eq!(rows.len(), 50);
    assert!(col(&rows, 3).iter().all(|&d| d <= 1e-6));

    let manifest: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "pacf");
    assert_eq!(manifest["model"]["model"]["spec"]["d"], 0.3);
    assert_eq!(manifest["policy"]["inner_len"], 65536);
    assert_eq!(manifest["outputs"][0], "pacf.csv");
    assert!(manifest["diagnostics"]["repr"]["max_trunc_err"].is_number());
}

#[test]
fn verify_tau_identity_passes() {
    let out = pacflab(&["verify", "tau-identity"]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(
        v["scenarios"]["tau-identity"]["taus"]
            .as_array()
            .unwrap()
            .len(),
        6
    );
}

#[test]
fn power_law_tail_matches_summable_asymptote() {
    let out = pacflab(&[
        "pacf",
        "--model",
        "builtin:power_law",
        "--d",
        "-0.3",
        "--n-max",
        "200",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<Vec<String>> = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    let scale = 2.0 * zeta(1.6) - 1.0;
    for row in &rows[180..] {
        let n: f64 = row[0].parse().unwrap();
        let alpha: f64 = row[1].parse().unwrap();
        let ratio = alpha * n.powf(1.6) * scale;
        assert!((ratio - 1.0).abs() <= 0.1, "n={n}: ratio {ratio}");
    }
}

#[test]
fn compare_fractional_and_white_noise() {
    for (d, tol) in [("0.45", "1e-6"), ("-0.45", "1e-5")] {
        let out = pacflab(&["compare", "--d", d, "--n-max", "50", "--tol", tol]);
        assert!(out.status.success());
        let mut r = csv::Reader::from_reader(out.stdout.as_slice());
        assert!(r.records().all(|x| &x.unwrap()[6] == "true"));
    }
    let out = pacflab(&["compare", "--model", "builtin:white_noise", "--n-max", "10"]);
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    for rec in r.records() {
        let rec = rec.unwrap();
        assert_eq!(rec[1].parse::<f64>().unwrap(), 0.0);
        assert_eq!(rec[2].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn output_is_deterministic_with_lf_endings() {
    let args = ["pacf", "--d", "0.2", "--phi", "1,-0.4", "--n-max", "30"];
    let a = pacflab(&args);
    let b = pacflab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.contains(&b'\r'));
}

#[test]
fn json_format() {
    let out = pacflab(&[
        "coeffs", "--theta", "1,0.5", "--n-max", "3", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v[1]["c"], 0.5);
    assert_eq!(v[2]["c"], 0.0);
    assert_eq!(v[0]["gamma"], 1.25);
}

#[test]
fn csv_model_sources() {
    let dir = tempfile::tempdir().unwrap();
    let ma = dir.path().join("ma.csv");
    std::fs::write(&ma, "n,c\n0,1\n1,0.5\n2,0\n3,0\n").unwrap();
    let out = pacflab(&[
        "pacf",
        "--model",
        ma.to_str().unwrap(),
        "--method",
        "levinson",
        "--n-max",
        "2",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let first = r.records().next().unwrap().unwrap();
    assert!((first[1].parse::<f64>().unwrap() - 0.4).abs() < 1e-15);

    // γ that is not positive definite fails numerically.
    let bad = dir.path().join("gamma.csv");
    std::fs::write(&bad, "gamma\n1\n0.99\n0.5\n").unwrap();
    let out = pacflab(&[
        "pacf",
        "--model",
        bad.to_str().unwrap(),
        "--method",
        "levinson",
        "--n-max",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_json(&out)["error"]["category"], "numerical");
}

#[test]
fn exit_codes() {
    // Config: unknown flag, conflicting sources, bad policy, unwritable output.
    assert_eq!(pacflab(&["pacf", "--bogus"]).status.code(), Some(2));
    let out = pacflab(&[
        "pacf",
        "--model",
        r#"{"d":0.1,"phi":[1],"theta":[1]}"#,
        "--d",
        "0.2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["error"]["category"], "config");
    assert_eq!(
        pacflab(&["pacf", "--d", "0.2", "--abs-tol", "-1"])
            .status
            .code(),
        Some(2)
    );
    let file = tempfile::NamedTempFile::new().unwrap();
    let under_file = file.path().join("out");
    assert_eq!(
        pacflab(&["pacf", "--d", "0.2", "--out", under_file.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pacflab(&["pacf"]).status.code(), Some(2));

    // Model: out-of-range d, unit root, unknown builtin.
    assert_eq!(pacflab(&["pacf", "--d", "0.5"]).status.code(), Some(3));
    assert_eq!(
        pacflab(&["pacf", "--d", "0.1", "--phi", "1,-1"])
            .status
            .code(),
        Some(3)
    );
    let out = pacflab(&["pacf", "--model", "builtin:garch"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["error"]["category"], "model");
}

#[test]
fn thread_cap_from_environment() {
    let bin = env!("CARGO_BIN_EXE_pacflab");
    let bad = Command::new(bin)
        .args(["pacf", "--d", "0.1"])
        .env("PACFLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let one = Command::new(bin)
        .args(["pacf", "--d", "0.1", "--n-max", "20"])
        .env("PACFLAB_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(bin)
        .args(["pacf", "--d", "0.1", "--n-max", "20"])
        .env("PACFLAB_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn factorize_and_beta_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = pacflab(&[
        "factorize",
        "--theta",
        "1,0.5",
        "--n-max",
        "4",
        "--grid-size",
        "4096",
        "--out",
        d,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (_, rows) = read_csv(&dir.path().join("factorize.csv"));
    let c = col(&rows, 1);
    assert!((c[1] - 0.5).abs() < 1e-12 && c[2].abs() < 1e-12);

    let out = pacflab(&["beta", "--d", "0.3", "--n-max", "5", "--out", d]);
    assert!(out.status.success());
    let (_, rows) = read_csv(&dir.path().join("beta.csv"));
    let b = col(&rows, 1);
    let expect = (std::f64::consts::PI * 0.3).sin() / std::f64::consts::PI / (2.0 - 0.3);
    assert!((b[2] - expect).abs() < 1e-14);
}

#[test]
fn verify_arma_decay_writes_traces() {
    let dir = tempfile::tempdir().unwrap();
    let out = pacflab(&[
        "verify",
        "arma-decay",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(v["scenarios"]["arma-decay"]["pass"], true);
    assert!(dir.path().join("verify-arma-decay.csv").exists());
    assert!(dir.path().join("manifest.json").exists());
}
