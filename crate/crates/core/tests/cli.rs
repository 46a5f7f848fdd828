use std::process::{Command, Output};

use shocksens::cli::{DiagramFile, MaxwellReport};
use shocksens::oscillator::BarrierPoint;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shocksens"))
        .args(args)
        .output()
        .unwrap()
}

fn data(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["barrier", "--system", "model", "--steps", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["barrier", "--system", "model", "--p-min", "1", "--p-max", "0.5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["barrier", "--system", "rod", "--params", "{\"gamma\": 1}"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["barrier", "--system", "bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["maxwell", "--system", "rod"]).status.code(), Some(4));
    assert_eq!(
        run(&["maxwell", "--system", "strut-amplitude"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(run(&["validate"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn json_barrier_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let st = run(&[
        "barrier",
        "--system",
        "model",
        "--p-min",
        "0.65",
        "--p-max",
        "0.95",
        "--steps",
        "7",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(st.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let file: DiagramFile<BarrierPoint> = serde_json::from_str(&text).unwrap();
    assert_eq!(file.rows.len(), 7);
    assert!(file.rows[0].e_lambda.is_none() && file.rows[1].e_lambda.is_none());
    assert!(text.contains("\"e_lambda\": null"));
    let m = file.maxwell.unwrap();
    assert!((m.p_m - 0.75).abs() < 1e-8 && (m.e_star - 0.25).abs() < 1e-8);
    assert_eq!(serde_json::to_string_pretty(&file).unwrap() + "\n", text);
}

#[test]
fn csv_rows_parse_back_exactly() {
    let out = run(&[
        "barrier", "--system", "rod", "--p-min", "0.5", "--p-max", "1.9", "--steps", "5",
    ]);
    assert!(out.status.success());
    let rows = data(&out);
    assert_eq!(rows.len(), 5);
    for r in &rows {
        assert_eq!(r.len(), 8);
        let e: f64 = r[2].parse().unwrap();
        let n: f64 = r[3].parse().unwrap();
        let total: f64 = r[4].parse().unwrap();
        assert_eq!(total, n * e);
    }
}

#[test]
fn params_file_and_maxwell_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    std::fs::write(&path, "{\"gamma\": 3.0, \"p_c\": 1.0}").unwrap();
    let out = run(&[
        "maxwell",
        "--system",
        "model",
        "--params",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let r: MaxwellReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!((r.e_star - 0.03125).abs() < 1e-8);
    assert!((r.p_m - 0.9375).abs() < 1e-8);
    assert!(r.collision_gap.unwrap() < 1e-2);
}

#[test]
fn phase_separatrix_extent() {
    let out = run(&["phase", "--system", "model", "--load", "0.9"]);
    assert!(out.status.success());
    let extent = data(&out)
        .iter()
        .filter(|r| r[0].parse::<f64>().unwrap() == 0.0 && r[2] == "true")
        .map(|r| r[3].parse::<f64>().unwrap())
        .fold(0.0f64, f64::max);
    assert!((extent - 0.4747666066168898).abs() < 1e-6, "{extent}");
}

#[test]
fn strut_direct_profile_is_symmetric() {
    let out = run(&["profile", "--system", "strut-direct", "--load", "1.8"]);
    assert!(out.status.success());
    let rows = data(&out);
    let n = rows.len();
    assert_eq!(n % 2, 1);
    let mid = n / 2;
    assert_eq!(rows[mid][0].parse::<f64>().unwrap(), 0.0);
    for k in [1, 10, 100] {
        assert_eq!(rows[mid - k][1], rows[mid + k][1]);
    }
}
