use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn cylpack(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylpack")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cylpack-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_global_96() {
    let out = cylpack(&["verify", "--family", "global", "--R", "96", "--L", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rep = &v["verification"];
    assert!((rep["min_distance"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(rep["violation_count"], 0);
    assert_eq!(rep["parallel_count"], 0);
    assert_eq!(v["run_config"]["command"], "verify");
    assert_eq!(v["run_config"]["R"], 96);
}

#[test]
fn quartic_certificate() {
    let out = cylpack(&["lemmas", "--which", "quartic", "--n-max", "1000000"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["lemmas"]["quartic"]["failures"].as_array().unwrap().len(), 0);
    assert_eq!(v["lemmas"]["quartic"]["coefficients_checked"], 5_000_005);
}

#[test]
fn other_lemmas() {
    let out = cylpack(&["lemmas", "--which", "all", "--n-max", "1000", "--identity-pairs", "2000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    for key in ["quartic", "cos", "gap", "lemma1", "identities"] {
        assert!(v["lemmas"][key].is_object(), "{key}");
    }
    assert_eq!(v["passed"], true);
}

#[test]
fn figure_counts() {
    let path = scratch("rings.svg");
    let out = cylpack(&["figure", "--R", "150", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<circle").count(), 48384);
    assert!(svg.contains("run_config"));

    let out = cylpack(&["figure", "--R", "32"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().matches("<circle").count(), 192);
}

#[test]
fn empty_figure_is_rejected() {
    let path = scratch("empty.csv");
    std::fs::write(&path, "x,y\n").unwrap();
    let out = cylpack(&["figure", "--points", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["verify", "--R", "10"][..],
        &["verify", "--eps", "2"],
        &["verify", "--eps", "abc"],
        &["verify", "--bogus"],
        &["verify", "--format", "svg"],
        &["figure", "--format", "json"],
        &["density", "--samples", "10"],
        &["density", "--family", "perp", "--congruence", "--samples", "10000"],
        &["verify", "--family", "global", "--L", "1"],
        &["hole", "--z-max", "-1"],
    ] {
        assert_eq!(cylpack(args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn overlapping_family_exits_2() {
    let path = scratch("close.csv");
    std::fs::write(&path, "x,y\n40,0\n40.5,0\n0,60\n").unwrap();
    let out = cylpack(&["verify", "--family", "global", "--unsafe", "--points", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert!(v["verification"]["violation_count"].as_u64().unwrap() >= 1);
    assert_eq!(v["verification"]["exact_certificate"], false);
    // Without --unsafe the free points are refused outright.
    let out = cylpack(&["verify", "--family", "global", "--points", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn density_reruns_are_byte_identical() {
    let args = ["density", "--family", "global", "--R", "64", "--samples", "200000", "--seed", "7"];
    let a = cylpack(&args);
    let b = cylpack(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut one = args.to_vec();
    one.extend(["--threads", "1"]);
    let mut two = args.to_vec();
    two.extend(["--threads", "2"]);
    let (x, y) = (json(&cylpack(&one)), json(&cylpack(&two)));
    assert_eq!(x["density"], y["density"]);
}

#[test]
fn density_csv() {
    let out = cylpack(&["density", "--family", "perp", "--R", "64", "--samples", "100000", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# run_config: {"));
    assert_eq!(lines.next(), Some("R,family,density,std_error,samples,seed"));
    assert!(lines.next().unwrap().starts_with("64,perpendicular,"));
}

#[test]
fn congruence_run() {
    let out = cylpack(&["density", "--family", "local", "--R", "40", "--congruence", "--samples", "10000", "--seed", "42"]);
    assert_eq!(out.status.code().map(|c| c != 1), Some(true));
    let v = json(&out);
    assert_eq!(v["congruence"]["cylinders"].as_array().unwrap().len(), 1728);
    assert_eq!(v["congruence"]["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn rings_and_construct() {
    let v = json(&cylpack(&["rings", "--R", "64"]));
    assert_eq!(v["rings"]["count"], 6528);
    assert_eq!(v["rings"]["closed_form_count"], 6528);

    let csv = String::from_utf8(cylpack(&["rings", "--R", "32", "--format", "csv"]).stdout).unwrap();
    assert_eq!(csv.lines().nth(1), Some("d,m,k,x,y"));
    assert_eq!(csv.lines().count(), 2 + 192);

    let v = json(&cylpack(&["construct", "--family", "local", "--R", "40", "--r", "0.5"]));
    let eps = v["family"]["params"]["eps"].as_f64().unwrap();
    assert!((eps - 8.0 * 0.25 / 40f64.powi(4)).abs() < 1e-18);
    assert_eq!(v["family"]["lines"].as_array().unwrap().len(), 1728);
}

#[test]
fn points_roundtrip_keeps_provenance() {
    let path = scratch("ring.csv");
    let csv = cylpack(&["rings", "--R", "40", "--format", "csv"]).stdout;
    std::fs::write(&path, csv).unwrap();
    // Ring provenance survives, so the global construction needs no --unsafe.
    let out = cylpack(&["verify", "--points", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verification"]["exact_certificate"], true);
}

#[test]
fn hole_profile() {
    let v = json(&cylpack(&["hole", "--R", "64", "--z-max", "1000", "--steps", "11"]));
    let c: Vec<f64> = v["clearance"]["clearance"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!(c[0] >= 31.5 - 1e-9);
    assert!(c.windows(2).all(|w| w[1] > w[0]));
    let csv = String::from_utf8(cylpack(&["hole", "--R", "64", "--format", "csv", "--steps", "3"]).stdout).unwrap();
    assert_eq!(csv.lines().nth(1), Some("z,clearance"));
}
