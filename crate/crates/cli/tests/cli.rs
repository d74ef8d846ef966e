use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn nctorus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nctorus"))
        .args(args)
        .output()
        .expect("spawn nctorus")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn sl2_identity_is_eight_pi_squared() {
    let o = nctorus(&["action", "--sl2", "1", "0", "0", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("78.95683520871"), "{text}");
    assert!(text.contains("8π²"), "{text}");

    let v = json(&nctorus(&[
        "action", "--sl2", "2", "1", "1", "1", "--format", "json",
    ]));
    assert_eq!(v["pi_squared_coefficient"], 28);
    let expected = 28.0 * std::f64::consts::PI.powi(2);
    assert!((v["action"].as_f64().unwrap() - expected).abs() < 1e-9);
}

#[test]
fn sl2_rejects_bad_determinant() {
    let o = nctorus(&["action", "--sl2", "1", "1", "0", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = nctorus(&["action", "--sl2", "0", "1", "1", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn euler_identity_gives_four() {
    let v = json(&nctorus(&[
        "action", "--euler", "0", "0", "0", "--r", "1", "--format", "json",
    ]));
    assert!((v["action"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    assert!((v["matrix_trace"].as_f64().unwrap() - 4.0).abs() < 1e-12);
    let o = nctorus(&["action", "--euler", "0", "4", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn action_requires_a_source() {
    assert_eq!(nctorus(&["action"]).status.code(), Some(2));
}

#[test]
fn images_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("phi.json");
    let theta = 0.3;
    let body = serde_json::json!({
        "theta_source": theta,
        "image_u": {"theta": theta, "terms": [{"m": 1, "n": 0, "re": 1.0, "im": 0.0}]},
        "image_v": {"theta": theta, "terms": [{"m": 0, "n": 1, "re": 1.0, "im": 0.0}]},
    });
    std::fs::write(&path, body.to_string()).unwrap();
    let v = json(&nctorus(&[
        "action",
        "--images",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]));
    let expected = 8.0 * std::f64::consts::PI.powi(2);
    assert!((v["action"].as_f64().unwrap() - expected).abs() < 1e-9);
    assert_eq!(v["well_defined"], true);

    std::fs::write(&path, "{not json").unwrap();
    assert_eq!(
        nctorus(&["action", "--images", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

fn thermo(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "thermo",
        "--grid",
        "8",
        "8",
        "8",
        "--out-dir",
        dir.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    nctorus(&args)
}

#[test]
fn thermo_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = thermo(dir.path(), &["--r-count", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let mut rdr = csv::Reader::from_path(dir.path().join("thermo.csv")).unwrap();
    let header: Vec<_> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(
        header,
        [
            "r",
            "Z",
            "E",
            "E_abs",
            "varE_paper",
            "varE_std",
            "Cv",
            "entropy"
        ]
    );
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[0][0], "1.0");
    assert_eq!(&rows[4][0], "3.0");

    let summary: Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("thermo_summary.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["schema_version"], 1);
    let exponent = summary["fits"]["E_abs"]["exponent"].as_f64().unwrap();
    assert!((-3.2..-2.7).contains(&exponent), "{exponent}");
    assert_eq!(summary, json(&o));
}

#[test]
fn thermo_json_format_and_grid_dump() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    let o = thermo(
        dir.path(),
        &[
            "--r-count",
            "3",
            "--format",
            "json",
            "--dump-grid",
            grid.to_str().unwrap(),
        ],
    );
    assert!(o.status.success());
    let table: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("thermo.json")).unwrap())
            .unwrap();
    assert_eq!(table["rows"].as_array().unwrap().len(), 3);
    assert!(table["rows"][0]["Z"].as_f64().unwrap() > 0.0);

    let mut rdr = csv::Reader::from_path(&grid).unwrap();
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["phi", "theta", "psi", "weight"]
    );
    let weights: Vec<f64> = rdr
        .records()
        .map(|r| r.unwrap()[3].parse().unwrap())
        .collect();
    assert_eq!(weights.len(), 512);
    let total: f64 = weights.iter().sum();
    assert!((total - 1.0).abs() < 1e-12, "{total}");
}

#[test]
fn thermo_usage_and_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        thermo(dir.path(), &["--r-count", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        thermo(dir.path(), &["--r-start", "2", "--r-stop", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        thermo(dir.path(), &["--step-rel", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        nctorus(&[
            "thermo",
            "--grid",
            "1",
            "8",
            "8",
            "--out-dir",
            dir.path().to_str().unwrap()
        ])
        .status
        .code(),
        Some(2)
    );

    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let o = thermo(&blocker.join("sub"), &["--r-count", "2"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn scan_stays_in_band() {
    for (r, lo, hi) in [("1", 4.0, 6.0), ("2", 1.0, 1.5)] {
        let o = nctorus(&[
            "scan", "--fixed", "theta", "--value", "0.7", "--r", r, "--points", "21",
        ]);
        assert!(o.status.success());
        let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
        assert_eq!(rdr.headers().unwrap(), vec!["phi", "psi", "S"]);
        let mut n = 0;
        for rec in rdr.records() {
            let s: f64 = rec.unwrap()[2].parse().unwrap();
            assert!(s >= lo - 1e-12 && s <= hi + 1e-12, "{s}");
            n += 1;
        }
        assert_eq!(n, 21 * 21);
    }
    assert_eq!(
        nctorus(&["scan", "--fixed", "phi", "--value", "7"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn scan_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let o = nctorus(&[
        "scan",
        "--fixed",
        "phi",
        "--value",
        "0",
        "--points",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("theta,psi,S\n"));
    assert_eq!(text.lines().count(), 17);
}

#[test]
fn extremize_finds_band_edges() {
    let v = json(&nctorus(&["extremize", "--r", "1"]));
    assert!((v["min"].as_f64().unwrap() - 4.0).abs() < 1e-6);
    assert!((v["max"].as_f64().unwrap() - 6.0).abs() < 1e-6);
}

#[test]
fn existence_finds_identity_relation() {
    let theta = "0.41421356237309515";
    let v = json(&nctorus(&[
        "existence",
        "--big-theta",
        theta,
        "--theta",
        theta,
    ]));
    assert_eq!(v["schema_version"], 1);
    let first = &v["hits"][0];
    assert_eq!(
        (
            first["n"].as_i64(),
            first["c"].as_i64(),
            first["d"].as_i64()
        ),
        (Some(1), Some(1), Some(0))
    );
    assert_eq!(first["isomorphism_candidate"], true);
}

#[test]
fn existence_recovers_constructed_relation() {
    let theta: f64 = 2f64.sqrt() - 1.0;
    let big = ((2.0 * theta + 1.0) / 3.0).fract();
    let v = json(&nctorus(&[
        "existence",
        "--big-theta",
        &big.to_string(),
        "--theta",
        &theta.to_string(),
    ]));
    let hits = v["hits"].as_array().unwrap();
    assert!(hits
        .iter()
        .any(|h| h["n"] == 3 && h["c"] == 2 && h["d"].as_i64().is_some()));
}

#[test]
fn existence_edge_cases() {
    let o = nctorus(&[
        "existence",
        "--big-theta",
        "0.3",
        "--theta",
        "0.2",
        "--tol",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&nctorus(&[
        "existence",
        "--big-theta",
        "0.41421356237309515",
        "--theta",
        "0.7320508075688772",
        "--n-max",
        "2",
        "--c-max",
        "2",
        "--d-max",
        "2",
    ]));
    assert!(v["hits"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(thermo(a.path(), &["--r-count", "4"]).status.success());
    assert!(thermo(b.path(), &["--r-count", "4"]).status.success());
    for f in ["thermo.csv", "thermo_summary.json"] {
        assert_eq!(
            std::fs::read(a.path().join(f)).unwrap(),
            std::fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    let args = ["extremize", "--scan", "8", "--seeds", "3"];
    assert_eq!(nctorus(&args).stdout, nctorus(&args).stdout);
}

#[test]
fn print_config_lists_defaults() {
    let v = json(&nctorus(&["print-config"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["grid"], serde_json::json!([32, 32, 32]));
    assert_eq!(v["r_range"]["count"], 20);
    assert_eq!(v["existence"]["d_max"], 20);
}
