use std::io::Write;
use std::process::{Command, Output};

fn zeromode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeromode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn correlator_pair_in_ty_chart() {
    let o = zeromode(&["correlator", "--A", "2.718281828459045", "--chart", "ty", "--pair", "0.5,0.2;0.7,0.1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("A,L,chart,x1,x2,x1p,x2p,ReCp,ImCp,ReCm,ImCm,ReW,ImW,status\n"));
    assert_eq!(column(&out, "status"), ["OK"]);
    let re_cp: f64 = column(&out, "ReCp")[0].parse().unwrap();
    let re_w: f64 = column(&out, "ReW")[0].parse().unwrap();
    assert!((re_w - 0.5 * re_cp).abs() < 1e-15);
    let im_cm: f64 = column(&out, "ImCm")[0].parse().unwrap();
    assert!((im_cm.abs() - 0.5).abs() < 1e-12 || im_cm.abs() < 1e-12);
}

#[test]
fn correlator_grid_and_json() {
    let o = zeromode(&[
        "correlator", "--delta", "0.5", "--chart", "ty", "--grid", "0:0.2:3,0.1:0.3:2", "--ref", "0,0",
        "--format", "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 6);
    assert!(v[0]["ReCp"].is_f64());
}

#[test]
fn cylinder_correlator_needs_gamma() {
    let o = zeromode(&["correlator", "--A", "1", "--chart", "ty", "--pair", "0,0;0,0.25"]);
    assert_eq!(o.status.code(), Some(2));
    let o = zeromode(&["correlator", "--A", "1", "--gamma", "0.2", "--chart", "ty", "--pair", "0,0;0,0.25"]);
    assert!(o.status.success());
    assert_eq!(column(&stdout(&o), "status"), ["OK"]);
}

#[test]
fn limit_scan_has_one_row_per_delta() {
    let o = zeromode(&["limit-scan", "--delta-log", "1e-3:1e-1:9", "--pair-ty", "0,0;0,0.25"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let deltas: Vec<f64> = column(&out, "delta").iter().map(|s| s.parse().unwrap()).collect();
    assert_eq!(deltas.len(), 9);
    assert_eq!(deltas[0], 1e-3);
    assert_eq!(deltas[8], 1e-1);
    for s in column(&out, "cm_dev") {
        assert!(s.parse::<f64>().unwrap() < 5e-3);
    }
}

#[test]
fn rset_charts() {
    let o = zeromode(&["rset", "--delta", "0.01"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let t_mm: f64 = column(&out, "T_mm")[0].parse().unwrap();
    assert!((t_mm - (0.01 / (4.0 * std::f64::consts::PI) - std::f64::consts::PI / 12.0)).abs() < 1e-4);

    let o = zeromode(&["rset", "--A", "1", "--chart", "cylinder", "--gamma", "0.1"]);
    assert!(o.status.success());
    let t_mm: f64 = column(&stdout(&o), "T_mm")[0].parse().unwrap();
    assert!((t_mm - (0.1 / 8.0 - std::f64::consts::PI / 12.0)).abs() < 1e-15);

    let o = zeromode(&["rset", "--A", "2", "--chart", "zeta"]);
    assert!(o.status.success());
    assert_eq!(column(&stdout(&o), "chart"), ["zeta"]);
}

#[test]
fn verify_suite_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = zeromode(&["verify", "geometry", "--output", path.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"][0]["suite"], "geometry");
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
}

#[test]
fn output_is_deterministic() {
    let args = [
        "correlator", "--A", "1.5", "--chart", "ty", "--grid", "-0.3:0.3:7,0:0.4:5", "--ref", "0.05,0.2",
    ];
    let a = zeromode(&args);
    let b = zeromode(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let v1 = zeromode(&["verify", "correlators", "--pairs", "50"]);
    let v2 = zeromode(&["verify", "correlators", "--pairs", "50"]);
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["suites"][0]["elapsed_seconds"] = serde_json::Value::Null;
        v
    };
    assert_eq!(strip(&v1), strip(&v2));
}

#[test]
fn bad_input_is_a_usage_error() {
    for args in [
        vec!["correlator", "--A", "0.5", "--pair", "0,0;1,1"],
        vec!["correlator", "--A", "2", "--pair", "0,0"],
        vec!["correlator", "--A", "2", "--delta", "1", "--pair", "0,0;1,1"],
        vec!["correlator", "--A", "2", "--chart", "poincare", "--pair", "0,-1;0,1"],
        vec!["limit-scan", "--delta-log", "1e-3:1e-1", "--pair-ty", "0,0;0,0.25"],
        vec!["rset", "--A", "1", "--chart", "cylinder"],
        vec!["verify", "nonsense"],
        vec!["frobnicate"],
    ] {
        let o = zeromode(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn config_file_supplies_flags() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# warp\nA=2.718281828459045\nchart=ty\nformat=json").unwrap();
    let with_config = zeromode(&["correlator", "--config", f.path().to_str().unwrap(), "--pair", "0.5,0.2;0.7,0.1"]);
    assert!(with_config.status.success());
    let direct = zeromode(&[
        "correlator", "--A", "2.718281828459045", "--chart", "ty", "--format", "json", "--pair", "0.5,0.2;0.7,0.1",
    ]);
    assert_eq!(with_config.stdout, direct.stdout);
}
