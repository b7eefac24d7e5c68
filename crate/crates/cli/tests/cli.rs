use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn run_in(dir: &Path, config: &str, args: &[&str]) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_isogauge"))
        .arg("--config")
        .arg(&path)
        .args(args)
        .env_remove("ISOGAUGE_JOBS")
        .output()
        .unwrap()
}

fn run(config: &str, args: &[&str]) -> Output {
    let dir = TempDir::new().unwrap();
    run_in(dir.path(), config, args)
}

/// Rows of the first CSV table on stdout as header → value maps.
fn rows(out: &Output) -> Vec<std::collections::HashMap<String, String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let first = text.split("\n\n").next().unwrap();
    let mut r = csv::Reader::from_reader(first.as_bytes());
    let header = r.headers().unwrap().clone();
    r.records()
        .map(|rec| {
            header
                .iter()
                .zip(rec.unwrap().iter())
                .map(|(h, v)| (h.to_owned(), v.to_owned()))
                .collect()
        })
        .collect()
}

fn num(row: &std::collections::HashMap<String, String>, key: &str) -> f64 {
    row[key]
        .parse()
        .unwrap_or_else(|_| panic!("{key} = {:?}", row[key]))
}

#[test]
fn plane_hurwitz_equality_row() {
    let out = run(
        r#"{"command": "plane", "support": {"fourier": {"a0": 1.0, "cos": [0.0, 0.1]}}}"#,
        &[],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rows = rows(&out);
    let h = rows.iter().find(|r| r["report"] == "hurwitz").unwrap();
    // L = 2π, A = π(1 − 3·0.01/2)
    assert!((num(h, "lhs") - 0.06 * PI * PI).abs() < 1e-12);
    assert_eq!(h["equality"], "true");
    assert_eq!(h["resolution"], "512");
    assert!((num(h, "margin") - (num(h, "rhs") - num(h, "lhs"))).abs() == 0.0);
}

#[test]
fn surface_unit_sphere_is_all_zero() {
    let out = run(
        r#"{"command": "surface", "support": {"sphere": {"radius": 1.0}}, "settings": {"resolution": 16}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    let r = rows
        .iter()
        .find(|r| r["report"] == "reverse_minkowski")
        .unwrap();
    for key in ["deficit", "bound1", "bound2"] {
        assert!(num(r, key).abs() < 1e-12, "{key}");
    }
    assert!((num(r, "gauss") - 4.0 * PI).abs() < 1e-12);
}

#[test]
fn sphere_curve_json_identity() {
    let out = run(
        r#"{"command": "sphere-curve", "curve": {"gnomonic_ellipse": {"a": 0.5, "b": 0.3}}}"#,
        &["--format", "json"],
    );
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "sphere-curve");
    assert_eq!(v["status"], "pass");
    let r = &v["report"][0];
    let f = |k: &str| r[k].as_f64().unwrap();
    let residual = f("lhs") - (f("rhs") - f("remainder"));
    assert!(residual.abs() < 1e-8 * f("length").powi(2).max(4.0 * PI * PI));
    assert!(f("remainder") > 0.0);
}

#[test]
fn malformed_config_exits_one_with_position() {
    let out = run(
        "{\"command\": \"plane\",\n \"support\": {\"fourier\": {\"a0\": 1}},\n \"colour\": 1}",
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":3:2:") && err.contains("colour"), "{err}");

    let out = run("{\"command\": \"plane\", \"support\": ", &[]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(r#"{"command": "triangle"}"#, &[]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(
        r#"{"command": "plane", "random": {"count": 1}}"#,
        &["--format", "xml"],
    );
    assert_eq!(out.status.code(), Some(1));
    let help = Command::new(env!("CARGO_BIN_EXE_isogauge"))
        .arg("--help")
        .output()
        .unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("--jobs"));
}

#[test]
fn non_convex_input_exits_one() {
    let out = run(
        r#"{"command": "plane", "support": {"fourier": {"a0": 1.0, "cos": [0.0, 0.5]}}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("support"));
}

#[test]
fn certification_failure_exits_two() {
    let out = run(
        r#"{"command": "plane", "random": {"count": 4}}"#,
        &["--tolerance", "1e-300"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.lines().all(|l| l.starts_with("FAIL ")), "{err}");
    let rows = rows(&out);
    assert_eq!(rows.len(), 16);
    assert!(rows
        .iter()
        .any(|r| r["passed"] == "false" && !r["failures"].is_empty()));
}

#[test]
fn output_is_deterministic_across_worker_counts() {
    let config = r#"{"command": "plane", "random": {"count": 12}, "settings": {"seed": 99, "resolution": 128}}"#;
    let a = run(config, &["--jobs", "1"]);
    let b = run(config, &["--jobs", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let rows = rows(&a);
    let families: Vec<&str> = rows.iter().map(|r| r["family"].as_str()).collect();
    assert_eq!(families[0], "random-0");
    assert_eq!(families[families.len() - 1], "random-11");
    let c = run(config, &["--jobs", "1", "--seed", "100"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn jobs_fall_back_to_environment() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(
        &path,
        r#"{"command": "poincare", "circle": {"fourier": {"a0": 0, "sin": [0, 0, 1]}}}"#,
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_isogauge"))
        .arg("--config")
        .arg(&path)
        .env("ISOGAUGE_JOBS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let rows = rows(&out);
    // sin 3θ: middle = 8π, upper = 18π
    assert!((num(&rows[0], "lhs") - 8.0 * PI).abs() < 1e-12);
    assert!((num(&rows[0], "rhs") - 18.0 * PI).abs() < 1e-12);
    let bad = Command::new(env!("CARGO_BIN_EXE_isogauge"))
        .arg("--config")
        .arg(&path)
        .env("ISOGAUGE_JOBS", "many")
        .output()
        .unwrap();
    assert_eq!(
        bad.status.code(),
        Some(1),
        "bad flag values are input errors"
    );
}

#[test]
fn files_written_to_out_directory() {
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("reports");
    let config = r#"{"command": "poincare",
        "sphere": {"harmonics": [[2, 1, 1.0]]},
        "circle": {"samples": [0, 1, 0, -1, 0, 1, 0, -1]}}"#;
    let out = run_in(
        dir.path(),
        config,
        &["--out", out_dir.to_str().unwrap(), "--format", "json"],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("poincare.json")).unwrap())
            .unwrap();
    let rows = v["report"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    // sin 2θ sampled on 8 nodes: middle 3π, upper 3π
    assert!((rows[0]["lhs"].as_f64().unwrap() - 3.0 * PI).abs() < 1e-12);
    assert!((rows[1]["lhs"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert!((rows[1]["rhs"].as_f64().unwrap() - 2.0).abs() < 1e-10);
    assert_eq!(rows[1]["equality"], true);

    let out = run_in(dir.path(), config, &["--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    assert!(csv.starts_with("family,parameters,report,"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn converge_ladders() {
    let out = run(
        r#"{"command": "converge", "family": {"plane": {"support": {"ellipse": {"a": 0.5, "b": 0.3}}}}, "ladder": [16, 32, 64, 128]}"#,
        &[],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let table = rows(&out);
    let length: Vec<_> = table
        .iter()
        .filter(|r| r["report"] == "hurwitz" && r["functional"] == "length")
        .collect();
    assert_eq!(length.len(), 4);
    assert!(length[0]["difference"].is_empty());
    assert_eq!(length[3]["decayed"], "true");

    // band-limited: exact from the first resolving grid on
    let out = run(
        r#"{"command": "converge", "family": {"plane": {"support": {"fourier": {"a0": 1, "cos": [0, 0.05, 0.01]}}}}, "ladder": [16, 32, 64]}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0));
    for r in rows(&out)
        .iter()
        .filter(|r| r["functional"] == "area_curve" && !r["difference"].is_empty())
    {
        assert!(num(r, "difference") < 1e-13);
    }

    let out = run(
        r#"{"command": "converge", "family": {"surface": {"support": {"ellipsoid": {"axes": [1, 1, 1.2]}}}}, "ladder": [8, 16, 32]}"#,
        &[],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn converge_flags_under_resolution() {
    // steps far smaller than a doubling cannot shrink the differences tenfold
    let out = run(
        r#"{"command": "converge", "family": {"plane": {"support": {"ellipse": {"a": 0.5, "b": 0.3}}}}, "ladder": [16, 18, 20]}"#,
        &[],
    );
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("do not decay"));
}

#[test]
fn search_summary_and_trace() {
    let config = r#"{"command": "search", "normalization": "euclidean", "curve_degree": 3, "budget": 200, "restarts": 2}"#;
    let dir = TempDir::new().unwrap();
    let out_dir = dir.path().join("o");
    let a = run_in(
        dir.path(),
        config,
        &["--out", out_dir.to_str().unwrap(), "--seed", "5"],
    );
    assert!(matches!(a.status.code(), Some(0 | 2)));
    let summary = std::fs::read_to_string(out_dir.join("search.csv")).unwrap();
    let trace = std::fs::read_to_string(out_dir.join("trace.csv")).unwrap();
    assert!(trace.starts_with("evaluation,restart,objective\n"));
    let mut r = csv::Reader::from_reader(summary.as_bytes());
    let header = r.headers().unwrap().clone();
    let rec = r.records().next().unwrap().unwrap();
    let get = |k: &str| {
        rec.get(header.iter().position(|h| h == k).unwrap())
            .unwrap()
            .to_owned()
    };
    assert!(get("evaluations").parse::<usize>().unwrap() <= 200);
    let best: f64 = get("best_objective").parse().unwrap();
    assert!((0.0..=1.0 + 1e-9).contains(&best));

    let b = run_in(
        dir.path(),
        config,
        &["--out", out_dir.to_str().unwrap(), "--seed", "5"],
    );
    assert_eq!(a.status.code(), b.status.code());
    assert_eq!(
        trace,
        std::fs::read_to_string(out_dir.join("trace.csv")).unwrap()
    );
}

#[test]
fn bundled_configs_pass() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut names: Vec<_> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    names.sort();
    assert!(names.len() >= 8);
    for path in names {
        let out = Command::new(env!("CARGO_BIN_EXE_isogauge"))
            .arg("--config")
            .arg(&path)
            .arg("--format")
            .arg("json")
            .output()
            .unwrap();
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(0), "{}: {err}", path.display());
        assert!(err.lines().all(|l| l.starts_with("WARN ")), "{err}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(v["status"], "pass", "{}", path.display());
    }
}
