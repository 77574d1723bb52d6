use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ksub(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ksub"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("ksub runs")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

#[test]
fn one_dimensional_cubic_solves_in_one_step() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("one.json"),
        r#"{"kind":"cubic","matrix":{"type":"dense","rows":[[0.0]]},"b":[1.0],"rho":1.0,
            "provenance":{"generator":"manual","d":1}}"#,
    )
    .unwrap();
    let out = ksub(
        &["solve", "one.json", "--t-max", "5", "--out", "t.csv"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    assert!(csv.starts_with("# ksub "));
    assert!(csv.contains("# run_config {"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "1");
    // min −x + x³/3 at x = 1
    assert!((field(&rows[0], 1) + 2.0 / 3.0).abs() < 1e-12);
    assert!(field(&rows[0], 2).abs() < 1e-12);
}

#[test]
fn gen_then_solve_is_deterministic_and_within_bound() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ksub(
        &[
            "gen",
            "--family",
            "random-kappa",
            "--d",
            "150",
            "--kappa",
            "50",
            "--seed",
            "9",
            "--out",
            "i.json",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    assert!(String::from_utf8_lossy(&gen.stdout).contains("verified=true"));
    let mut traces = vec![];
    for name in ["a.csv", "b.csv"] {
        let out = ksub(
            &["solve", "i.json", "--t-max", "25", "--out", name],
            dir.path(),
        );
        assert!(out.status.success());
        traces.push(fs::read_to_string(dir.path().join(name)).unwrap());
    }
    assert_eq!(data_rows(&traces[0]), data_rows(&traces[1]));
    let rows = data_rows(&traces[0]);
    assert_eq!(rows.len(), 25);
    let mut prev = f64::INFINITY;
    for r in &rows {
        let gap = field(r, 2);
        assert!(gap >= -1e-12 && gap <= prev + 1e-12);
        assert!(gap <= field(r, 5) * (1.0 + 1e-6));
        prev = gap;
    }
}

#[test]
fn lower_bound_instance_reports_bound_and_gap_respects_it() {
    let dir = tempfile::tempdir().unwrap();
    let gen = ksub(
        &[
            "gen",
            "--family",
            "lb-linear",
            "--t",
            "8",
            "--kappa",
            "40",
            "--out",
            "lb.json",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let stdout = String::from_utf8_lossy(&gen.stdout).into_owned();
    let lb: f64 = stdout
        .lines()
        .find_map(|l| l.trim().strip_prefix("certified lower bound at t=8: "))
        .expect("lower bound line")
        .parse()
        .unwrap();
    let out = ksub(
        &["solve", "lb.json", "--t-max", "8", "--out", "t.csv"],
        dir.path(),
    );
    assert!(out.status.success());
    let rows = data_rows(&fs::read_to_string(dir.path().join("t.csv")).unwrap());
    assert!(field(rows.last().unwrap(), 2) >= lb);
}

#[test]
fn solution_file_and_rerun_reproduce_output() {
    let dir = tempfile::tempdir().unwrap();
    assert!(ksub(
        &[
            "gen",
            "--family",
            "hard-case",
            "--d",
            "60",
            "--gamma",
            "1e-3",
            "--tau",
            "10",
            "--out",
            "h.json"
        ],
        dir.path()
    )
    .status
    .success());
    let out = ksub(
        &[
            "solve",
            "h.json",
            "--scheme",
            "joint",
            "--seed",
            "3",
            "--t-max",
            "12",
            "--out",
            "t.csv",
            "--solution",
            "s.json",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let sol: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("s.json")).unwrap()).unwrap();
    assert_eq!(sol["run_config"]["scheme"], "joint");
    assert!(sol["ksub_version"].is_string());

    let again = ksub(&["rerun", "t.csv", "--out", "u.csv"], dir.path());
    assert!(
        again.status.success(),
        "{}",
        String::from_utf8_lossy(&again.stderr)
    );
    let a = fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let b = fs::read_to_string(dir.path().join("u.csv")).unwrap();
    assert_eq!(data_rows(&a), data_rows(&b));
}

#[test]
fn bench_writes_summary_and_fits() {
    let dir = tempfile::tempdir().unwrap();
    let out = ksub(
        &[
            "bench",
            "--d",
            "200",
            "--kappa",
            "64,256",
            "--instances",
            "3",
            "--t-max",
            "40",
            "--jobs",
            "2",
            "--out",
            "b.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert!(csv.contains("kappa,t,count,median,q_lo,q_hi,within_ub"));
    assert_eq!(csv.matches("# fit kappa=").count(), 4);
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 80);
    for r in &rows {
        assert_eq!(r[2], "3");
        assert!(field(r, 4) <= field(r, 3) && field(r, 3) <= field(r, 5));
        assert_eq!(field(r, 6), 1.0);
    }
}

#[test]
fn verify_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = ksub(
        &[
            "verify",
            "--lemma3",
            "--suite",
            "chebyshev",
            "--out",
            "v.csv",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("v.csv")).unwrap();
    let rows = data_rows(&csv);
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.last().unwrap() == "satisfied"));
}

#[test]
fn cheb_certificate_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let out = ksub(
        &["cheb", "--kind", "u", "--n", "6", "--beta", "25"],
        dir.path(),
    );
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let value = v["certificate"]["value"].as_f64().unwrap();
    let [lo, hi] = [0, 1].map(|i| v["closed_form_bounds"][i].as_f64().unwrap());
    assert!(lo <= value * (1.0 + 1e-9) && value <= hi * (1.0 + 1e-9));
    assert!(v["equioscillation_error"].as_f64().unwrap() < 1e-8 * value.max(1.0));
    assert!((v["dual_value"].as_f64().unwrap() - value * value).abs() < 1e-8 * value * value);
}

#[test]
fn parameter_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &[
            "gen",
            "--family",
            "random-kappa",
            "--d",
            "10",
            "--kappa",
            "1",
            "--out",
            "x.json",
        ],
        &[
            "gen",
            "--family",
            "hard-case",
            "--d",
            "10",
            "--out",
            "x.json",
        ],
        &["solve", "missing.json"],
        &["bench", "--instances", "0"],
        &["verify"],
        &["verify", "--suite", "nonsense"],
        &["cheb", "--kind", "t", "--n", "0", "--beta", "4"],
    ];
    for args in cases {
        let out = ksub(args, dir.path());
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    fs::write(dir.path().join("bad.json"), "{\"kind\":").unwrap();
    assert_eq!(
        ksub(&["solve", "bad.json"], dir.path()).status.code(),
        Some(2)
    );
}
