//! Command-line contract: output, exit codes, determinism and manifests.

use std::f64::consts::PI;
use std::process::Command;

use cone_systole::cli::{run_with, EXIT_FAILED, EXIT_INPUT, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(
        std::iter::once("cone-systole").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("r,formulaArea,mcArea,mcStderr,propEndBound")
    );
    lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn validate_reports_invariants() {
    let (code, out, _) = run(&["validate", "--builtin", "staircase", "--genus", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("chi: -2"));
    assert!(out.contains("(-4pi)"));
    assert!(out.contains("gauss-bonnet residual: 0"));
    let (code, out, _) = run(&["validate", "--file", &data("two-cone-decagon.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("cone points: 2"));
}

#[test]
fn malformed_input_exits_two() {
    let (code, out, err) = run(&["validate", "--file", &data("edge-length-mismatch.json")]);
    assert_eq!(code, EXIT_INPUT);
    assert!(out.is_empty());
    assert!(
        err.starts_with("error kind=UnmatchedEdge message=\""),
        "{err}"
    );
    for args in [
        &["validate", "--file", "/nonexistent.json"][..],
        &["validate", "--builtin", "staircase"],
        &["validate", "--builtin", "staircase", "--genus", "1"],
        &["validate", "--builtin", "torus-hex", "--genus", "2"],
        &["validate", "--builtin", "sphere"],
        &["verify", "--builtin", "staircase", "--genus", "2"],
        &[
            "verify",
            "--builtin",
            "staircase",
            "--genus",
            "2",
            "--r",
            "-1",
        ],
        &[
            "verify",
            "--builtin",
            "staircase",
            "--genus",
            "2",
            "--r",
            "0.4",
            "--point",
            "0:9:9",
        ],
        &[
            "verify",
            "--builtin",
            "staircase",
            "--genus",
            "2",
            "--r",
            "0.4",
            "--point",
            "0:1:0",
        ],
        &[
            "verify",
            "--builtin",
            "staircase",
            "--genus",
            "2",
            "--r",
            "0.4",
            "--n",
            "10",
        ],
        &["ball-growth", "--builtin", "torus-square", "--r-max", "0"],
        &[
            "ball-growth",
            "--builtin",
            "torus-square",
            "--r-max",
            "0.3",
            "--steps",
            "0",
        ],
        &["ball-growth", "--builtin", "torus-square", "--r-max", "0.6"],
        &[
            "systole",
            "--builtin",
            "staircase",
            "--genus",
            "2",
            "--cutoff",
            "0.5",
        ],
        &["bounds"],
        &["bounds", "--chi", "2"],
        &["bounds", "--genus", "2", "--area", "-3", "--systole", "1"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, EXIT_INPUT, "{args:?}");
        assert!(err.starts_with("error kind="), "{args:?}: {err}");
        assert_eq!(err.lines().count(), 1);
    }
}

#[test]
fn radius_guard_and_force() {
    let args = [
        "verify",
        "--builtin",
        "staircase",
        "--genus",
        "2",
        "--r",
        "0.6",
        "--n",
        "2000",
    ];
    let (code, _, err) = run(&args);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("RadiusTooLarge"));
    let (code, out, _) = run(&[&args[..], &["--force"]].concat());
    assert_ne!(code, EXIT_INPUT);
    assert!(out.contains("advisory"));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = [
        "verify",
        "--builtin",
        "staircase",
        "--genus",
        "2",
        "--r",
        "0.4",
        "--n",
        "20000",
        "--seed",
        "7",
    ];
    let (code, first, _) = run(&args);
    assert_eq!(code, EXIT_OK, "{first}");
    assert_eq!(first.matches("[PASS]").count(), 4);
    let (_, second, _) = run(&args);
    assert_eq!(first, second);
    let (_, other, _) = run(&[&args[..8], &["--seed", "8"]].concat());
    assert_ne!(first, other);
}

#[test]
fn verify_on_flat_torus_is_degenerate() {
    let (code, out, _) = run(&[
        "verify",
        "--builtin",
        "torus-square",
        "--r",
        "0.4",
        "--n",
        "20000",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("integral-f: estimate=0 exact=0"));
    assert!(out.contains(&format!("formula={}", cone_systole::format::g9(PI * 0.16))));
}

#[test]
fn impossible_tolerance_fails_with_three() {
    let (code, out, _) = run(&[
        "verify",
        "--builtin",
        "staircase",
        "--genus",
        "2",
        "--r",
        "0.4",
        "--n",
        "2000",
        "--mc-tol",
        "1e-9",
        "--exact-tol",
        "0",
    ]);
    assert_eq!(code, EXIT_FAILED);
    assert!(out.contains("[FAIL]") && out.contains("result: fail"));
}

#[test]
fn ball_growth_rows() {
    let (code, out, _) = run(&[
        "ball-growth",
        "--builtin",
        "staircase",
        "--genus",
        "2",
        "--point",
        "cone-offset:0.3:0.5",
        "--r-max",
        "0.45",
        "--steps",
        "9",
        "--n",
        "5000",
    ]);
    assert_eq!(code, EXIT_OK);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 9);
    // CSV values carry nine significant digits
    for row in &rows {
        assert!(row[1] >= PI * row[0] * row[0] * (1.0 - 1e-8));
    }
    assert!((rows[8][0] - 0.45).abs() < 1e-12);
    assert!((rows[8][1] - 0.777544182).abs() < 1e-9);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("torus.csv");
    let (code, out, _) = run(&[
        "ball-growth",
        "--builtin",
        "torus-hex",
        "--r-max",
        "0.4",
        "--steps",
        "4",
        "--n",
        "2000",
        "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("wrote 4 rows"));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    for row in csv_rows(&text) {
        assert_eq!(row[1], row[4]);
        assert!((row[1] - PI * row[0] * row[0]).abs() < 1e-8);
    }
}

#[test]
fn systole_table_bounds() {
    let (code, out, _) = run(&[
        "systole",
        "--builtin",
        "staircase",
        "--genus",
        "2",
        "--cutoff",
        "1.5",
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("systole: 1\n") && out.contains("status: certified-below-cutoff"));
    let (code, out, _) = run(&["systole", "--file", &data("two-square-torus.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("systole: 1\n"));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let (code, out, _) = run(&["table", "--csv", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("note:"));
    let csv = std::fs::read_to_string(&path).unwrap();
    assert!(csv.starts_with("surface,chi,value,kind,source\n"));
    assert!(csv.contains("3RP2,-1,1.15279435,exact-min"));

    let (code, out, _) = run(&["bounds", "--chi", "-1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sigma lower bound: 0.899671416"));
    let (_, out, _) = run(&["bounds", "--genus", "3", "--area", "5", "--systole", "1"]);
    assert!(out.contains("loewner disk criterion: true"));
    assert!(out.contains("ball area bound at r=0.5: "));
}

#[test]
fn manifest_records_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let (code, _, _) = run(&[
        "verify",
        "--builtin",
        "staircase",
        "--genus",
        "2",
        "--r",
        "0.3",
        "--n",
        "5000",
        "--seed",
        "3",
        "--manifest",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK);
    let m: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(m["command"], "verify");
    assert_eq!(m["seed"], 3);
    assert_eq!(m["samples"], 5000);
    assert_eq!(m["source"]["builtin"], "staircase");
    assert_eq!(m["checks"].as_array().unwrap().len(), 4);
    assert_eq!(m["tolerances"]["mc_stderr_multiple"], 3.0);
    assert!(m["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
    assert_eq!(m["exit_code"], 0);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_cone-systole");
    let ok = Command::new(bin)
        .args(["bounds", "--chi", "-2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin)
        .args(["validate", "--file", &data("edge-length-mismatch.json")])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("UnmatchedEdge"));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(EXIT_OK));
}
