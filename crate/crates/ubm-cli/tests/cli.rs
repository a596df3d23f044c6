//! End-to-end tests of the `ubm` binary: output schemas, determinism,
//! round-tripping of moment files, and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn ubm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ubm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn moments_of_the_point_mass_are_all_one() {
    let out = ubm(&["moments", "--family", "monotone", "--t", "0", "--order", "5"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["schema_version"], 1);
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 5);
    for r in records {
        assert_eq!(r["moment"].as_f64().unwrap(), 1.0);
    }
}

#[test]
fn boolean_moments_match_the_known_values() {
    let out = ubm(&["moments", "--family", "boolean", "--t", "1", "--order", "2"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = doc["records"].as_array().unwrap();
    let m1 = records[0]["moment"].as_f64().unwrap();
    let m2 = records[1]["moment"].as_f64().unwrap();
    assert!((m1 - 0.6065306597126334).abs() < 1e-12);
    assert!((m2 - (-0.23865121854119106)).abs() < 1e-12);
}

#[test]
fn monotone_moments_at_the_half_circle_time() {
    // at t = 2 ln 2 the first two moments are 1/2 and -1/4
    let out = ubm(&[
        "moments",
        "--family",
        "monotone",
        "--t",
        "1.3862943611198906",
        "--order",
        "2",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = doc["records"].as_array().unwrap();
    assert!((records[0]["moment"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((records[1]["moment"].as_f64().unwrap() + 0.25).abs() < 1e-12);
}

#[test]
fn density_output_is_even_and_zero_outside_the_support() {
    let out = ubm(&[
        "density",
        "--t",
        "1.3862943611198906", // 2 ln 2: support half-angle pi/2
        "--samples",
        "40",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let half = doc["support"]["theta_max"].as_f64().unwrap();
    assert!((half - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 40);
    for k in 0..records.len() {
        let theta = records[k]["theta"].as_f64().unwrap();
        let dens = records[k]["density"].as_f64().unwrap();
        let mirror = records[records.len() - 1 - k]["density"].as_f64().unwrap();
        assert_eq!(dens, mirror, "density must be even in theta");
        if theta.abs() > half {
            assert_eq!(dens, 0.0);
        } else {
            assert!(dens > 0.0);
        }
    }
}

#[test]
fn atoms_summary_reports_the_captured_mass() {
    let out = ubm(&["atoms", "--t", "1", "--truncation-mass", "0.999"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let mass = doc["summary"]["captured_mass"].as_f64().unwrap();
    assert!((0.999..=1.0).contains(&mass));
    let records = doc["records"].as_array().unwrap();
    assert_eq!(
        records.len(),
        doc["summary"]["truncation_index"].as_u64().unwrap() as usize + 1
    );
    // angles strictly decreasing
    let mut prev = f64::INFINITY;
    for r in records {
        let alpha = r["alpha"].as_f64().unwrap();
        assert!(alpha < prev);
        prev = alpha;
    }
}

#[test]
fn unreachable_mass_target_exits_with_numerical_failure() {
    // 1 - 1e-9 needs ~5e7 atoms at t = 3, far past the index cap
    let out = ubm(&["atoms", "--t", "3", "--truncation-mass", "0.999999999"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn convolve_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("a.json");
    let f2 = dir.path().join("b.json");
    write_moment_file(&f1, "monotone", 0.5, 12);
    write_moment_file(&f2, "monotone", 1.0, 12);
    let out = ubm(&[
        "convolve",
        f1.to_str().unwrap(),
        f2.to_str().unwrap(),
        "--mode",
        "monotone",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["order"], 12);
    // the convolved sequence is the t = 1.5 marginal
    let reference = ubm(&[
        "moments",
        "--family",
        "monotone",
        "--t",
        "1.5",
        "--order",
        "12",
    ]);
    let ref_doc: serde_json::Value = serde_json::from_str(&stdout(&reference)).unwrap();
    for (k, pair) in doc["moments"].as_array().unwrap().iter().enumerate() {
        let re = pair[0].as_f64().unwrap();
        let im = pair[1].as_f64().unwrap();
        let want = ref_doc["records"][k]["moment"].as_f64().unwrap();
        assert!((re - want).abs() < 1e-9, "moment {}", k + 1);
        assert!(im.abs() < 1e-12);
    }
}

#[test]
fn convolve_accepts_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("a.csv");
    let f2 = dir.path().join("b.csv");
    // point mass at 1 (all moments 1) is the boolean unit
    std::fs::write(&f1, "n,re,im\n1,1,0\n2,1,0\n3,1,0\n").unwrap();
    let probe = ubm(&["moments", "--family", "boolean", "--t", "0.7", "--order", "3", "--format", "csv"]);
    let mut csv = String::from("n,re,im\n");
    for line in stdout(&probe).lines().skip(1) {
        let mut parts = line.split(',');
        let n = parts.next().unwrap();
        let m = parts.next().unwrap();
        csv.push_str(&format!("{n},{m},0\n"));
    }
    std::fs::write(&f2, csv).unwrap();
    let out = ubm(&[
        "convolve",
        f1.to_str().unwrap(),
        f2.to_str().unwrap(),
        "--mode",
        "boolean",
        "--format",
        "csv",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // unit element: output equals the second input
    let got = stdout(&out);
    let expect = std::fs::read_to_string(&f2).unwrap();
    for (a, b) in got.lines().skip(1).zip(expect.lines().skip(1)) {
        let va: Vec<f64> = a.split(',').map(|v| v.parse().unwrap()).collect();
        let vb: Vec<f64> = b.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((va[1] - vb[1]).abs() < 1e-13);
        assert!(va[2].abs() < 1e-13);
    }
}

#[test]
fn identical_configuration_gives_byte_identical_output() {
    let args = ["moments", "--family", "boolean", "--t", "0.9", "--order", "20"];
    let a = ubm(&args);
    let b = ubm(&args);
    assert_eq!(a.stdout, b.stdout);

    let atoms_args = ["atoms", "--t", "2", "--truncation-mass", "0.9999"];
    let a = ubm(&atoms_args);
    let b = ubm(&atoms_args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn usage_errors_exit_with_code_two() {
    // bad flag value (clap)
    assert_eq!(
        ubm(&["moments", "--family", "nonsense", "--t", "1", "--order", "3"])
            .status
            .code(),
        Some(2)
    );
    // violated bound, named in the message
    let out = ubm(&["moments", "--family", "monotone", "--t", "-1", "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--t"));
    let out = ubm(&["density", "--t", "1", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--samples"));
    // missing input file
    assert_eq!(
        ubm(&["convolve", "/nonexistent/a.json", "/nonexistent/b.json", "--mode", "boolean"])
            .status
            .code(),
        Some(2)
    );
    // convolution order above the supported cap
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("m.csv");
    std::fs::write(&f, "1,1,0\n").unwrap();
    let out = ubm(&[
        "convolve",
        f.to_str().unwrap(),
        f.to_str().unwrap(),
        "--mode",
        "boolean",
        "--order",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("maximum"));
}

#[test]
fn verify_suites_pass_and_exit_zero() {
    let out = ubm(&["verify", "--suite", "semigroup"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], true);
    assert!(doc["checks"].as_array().unwrap().len() >= 4);
}

#[test]
fn verify_with_impossible_tolerance_exits_three() {
    let out = ubm(&["verify", "--suite", "ode", "--tolerance", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], false);
}

#[test]
fn output_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = ubm(&[
        "moments",
        "--family",
        "monotone",
        "--t",
        "1",
        "--order",
        "4",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 4);
}

fn write_moment_file(path: &Path, family: &str, t: f64, order: usize) {
    let out = ubm(&[
        "moments",
        "--family",
        family,
        "--t",
        &t.to_string(),
        "--order",
        &order.to_string(),
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let moments: Vec<[f64; 2]> = doc["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| [r["moment"].as_f64().unwrap(), 0.0])
        .collect();
    let file = serde_json::json!({ "order": order, "moments": moments });
    std::fs::write(path, serde_json::to_string(&file).unwrap()).unwrap();
}
