use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use affinelens::fixtures::random_mlp;
use affinelens::oracle::enumerate_patterns_bruteforce;
use affinelens::{HPolytope, LayerSpec, Network, Parallelism, Tolerances};
use nets::*;
use serde_json::Value;
use tempfile::TempDir;

mod nets {
    pub fn zero_net() -> String {
        r#"{"input_dim": 2, "layers": [
            {"kind": "dense", "W": [[0, 0], [0, 0]], "b": [0, 0]},
            {"kind": "activation", "a": 1, "b": 0},
            {"kind": "dense", "W": [[0, 0]], "b": [0]}
        ]}"#
        .to_string()
    }

    pub fn quadrant_net() -> String {
        r#"{"input_dim": 2, "layers": [
            {"kind": "dense", "W": [[1, 0], [0, 1]], "b": [0, 0]},
            {"kind": "activation", "a": 1, "b": 0},
            {"kind": "dense", "W": [[1, -1], [-1, 1]], "b": [0, 0]}
        ]}"#
        .to_string()
    }
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_affinelens"))
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report_keys(path: &Path) -> BTreeSet<String> {
    let v: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    v["regions"].as_array().unwrap().iter().map(|r| r["sign_key"].as_str().unwrap().to_string()).collect()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_zero_net() {
    let dir = TempDir::new().unwrap();
    let net = write(dir.path(), "net.json", &zero_net());
    let o = run(&["enumerate", "--network", s(&net), "--box", "2", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("regions: 1"));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(v["regions"].as_array().unwrap().len(), 1);
    assert_eq!(v["per_layer_counts"], serde_json::json!([1]));
    assert_eq!(v["regions"][0]["sign_key"], "00");
    for field in ["lp_calls", "skipped_candidates", "wall_ms"] {
        assert!(v["stats"][field].is_u64());
    }
}

#[test]
fn enumerate_matches_oracle_and_is_worker_independent() {
    let dir = TempDir::new().unwrap();
    let model = random_mlp(2, &[3, 3], 2, 0.0, 4);
    let net = write(dir.path(), "net.json", &model.to_json());
    let (one, four) = (dir.path().join("w1"), dir.path().join("w4"));
    for (out, w) in [(&one, "1"), (&four, "4")] {
        let o = run(&["enumerate", "--network", s(&net), "--box", "2", "1", "--workers", w, "--out", s(out)]);
        assert_eq!(code(&o), 0);
    }
    let keys = report_keys(&one.join("report.json"));
    assert_eq!(keys, report_keys(&four.join("report.json")));
    let oracle = enumerate_patterns_bruteforce(
        &model,
        &HPolytope::cube(2, 1.0).unwrap(),
        Tolerances::default(),
        Parallelism::Sequential,
    )
    .unwrap();
    let truth: BTreeSet<String> = oracle.patterns.iter().map(|p| p.to_bitstring()).collect();
    assert_eq!(keys, truth);
}

#[test]
fn domain_file_and_seed_point() {
    let dir = TempDir::new().unwrap();
    let net = write(dir.path(), "net.json", &quadrant_net());
    let dom = write(dir.path(), "dom.json", r#"{"dim": 2, "A": [[1,0],[-1,0],[0,1],[0,-1]], "b": [1,1,1,1]}"#);
    let o = run(&["enumerate", "--network", s(&net), "--domain", s(&dom), "--seed-point", "0.3,-0.4", "--strict", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("regions: 4"));
    let o = run(&["enumerate", "--network", s(&net), "--domain", s(&dom), "--seed-point", "3,0", "--out", s(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    let net = write(dir.path(), "net.json", &quadrant_net());
    let bad_json = write(dir.path(), "bad.json", "{ not json");
    let missing = dir.path().join("missing.json");
    let out = s(dir.path());
    for args in [
        vec!["enumerate", "--network", s(&missing), "--box", "2", "--out", out],
        vec!["enumerate", "--network", s(&bad_json), "--box", "2", "--out", out],
        vec!["enumerate", "--network", s(&net), "--out", out],
        vec!["enumerate", "--network", s(&net), "--box", "3", "--out", out],
        vec!["enumerate", "--network", s(&net), "--box", "two", "--out", out],
        vec!["enumerate", "--network", s(&net), "--box", "2", "--workers", "0", "--out", out],
        vec!["enumerate", "--bogus-flag"],
        vec!["render", "--network", s(&net), "--box", "2", "--mode", "rainbow", "--out", out],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 2, "args {args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let net = write(dir.path(), "net.json", &random_mlp(2, &[3, 3], 2, 0.0, 1).to_json());
    let out = dir.path().join("ok");
    let o = run(&["verify", "--network", s(&net), "--box", "2", "--resolution", "64", "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(v["oracle"]["match"], Value::Bool(true));
    assert_eq!(v["oracle"]["method"], "exhaustive_lp");

    // Drop one region and verify the damaged report.
    let mut damaged = v.clone();
    damaged["regions"].as_array_mut().unwrap().pop();
    damaged.as_object_mut().unwrap().remove("oracle");
    let damaged_path = write(dir.path(), "damaged.json", &damaged.to_string());
    let out2 = dir.path().join("bad");
    let o = run(&["verify", "--network", s(&net), "--box", "2", "--report", s(&damaged_path), "--out", s(&out2)]);
    assert_eq!(code(&o), 1);
    let v2: Value = serde_json::from_str(&fs::read_to_string(out2.join("report.json")).unwrap()).unwrap();
    assert_eq!(v2["oracle"]["match"], Value::Bool(false));
    assert_eq!(v2["oracle"]["missing"].as_array().unwrap().len(), 1);

    let big = write(dir.path(), "big.json", &random_mlp(2, &[15, 15], 1, 0.0, 0).to_json());
    let o = run(&["verify", "--network", s(&big), "--box", "2", "--out", s(dir.path())]);
    assert_eq!(code(&o), 2);
}

#[test]
fn render_outputs() {
    let dir = TempDir::new().unwrap();
    let net = write(dir.path(), "net.json", &quadrant_net());
    for mode in ["region_id", "class_label", "boundary_band"] {
        let o = run(&["render", "--network", s(&net), "--box", "2", "--mode", mode, "--band", "0.1", "--out", s(dir.path())]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains("regions: 4"));
        let svg = fs::read_to_string(dir.path().join("render.svg")).unwrap();
        assert_eq!(svg.matches(r#"class="region""#).count(), 4);
    }

    let first = fs::read_to_string(dir.path().join("render.svg")).unwrap();
    run(&["render", "--network", s(&net), "--box", "2", "--mode", "boundary_band", "--band", "0.1", "--out", s(dir.path())]);
    assert_eq!(first, fs::read_to_string(dir.path().join("render.svg")).unwrap());
}

#[test]
fn render_slices_higher_dimensions() {
    let dir = TempDir::new().unwrap();
    let net5 = write(dir.path(), "net5.json", &random_mlp(5, &[4, 4], 2, 0.0, 2).to_json());
    let o = run(&["render", "--network", s(&net5), "--box", "5", "--out", s(dir.path())]);
    assert_eq!(code(&o), 2);
    let o = run(&[
        "render", "--network", s(&net5), "--box", "2",
        "--slice", "0,0,0,0,0", "1,0,0.5,0,0", "0,1,0,0,-0.5",
        "--out", s(dir.path()),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let n: usize = stdout(&o).lines().find_map(|l| l.strip_prefix("regions: ")).unwrap().parse().unwrap();
    let svg = fs::read_to_string(dir.path().join("render.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="region""#).count(), n);
    let o = run(&[
        "render", "--network", s(&net5), "--box", "2",
        "--slice", "0,0,0,0,0", "1,2,0,0,0", "2,4,0,0,0",
        "--out", s(dir.path()),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn stats_csv() {
    let dir = TempDir::new().unwrap();
    let net = write(dir.path(), "net.json", r#"{"input_dim": 2, "layers": [
        {"kind": "dense", "W": [[0, 0]], "b": [1]},
        {"kind": "activation", "a": 1, "b": 0},
        {"kind": "dense", "W": [[1]], "b": [0]}
    ]}"#);
    let o = run(&["stats", "--network", s(&net), "--box", "2", "--out", s(dir.path())]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(dir.path().join("counts.csv")).unwrap(), "layer,count\n1,1\n");

    let deep = Network::new(2, random_mlp(2, &[3, 3], 1, 0.0, 6).layers().to_vec()).unwrap();
    assert!(matches!(deep.layers()[1], LayerSpec::Activation { .. }));
    let deep_path = write(dir.path(), "deep.json", &deep.to_json());
    let out = dir.path().join("deep");
    assert_eq!(code(&run(&["enumerate", "--network", s(&deep_path), "--box", "2", "--out", s(&out)])), 0);
    let o = run(&["stats", "--report", s(&out.join("report.json")), "--out", s(&out)]);
    assert_eq!(code(&o), 0);
    let csv = fs::read_to_string(out.join("counts.csv")).unwrap();
    let rows: Vec<u64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 2);
    let v: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let counts: Vec<u64> = v["per_layer_counts"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).collect();
    assert_eq!(rows, counts);
}

#[test]
fn tolerance_override_from_environment() {
    let dir = TempDir::new().unwrap();
    let net = write(dir.path(), "net.json", &quadrant_net());
    let o = bin()
        .env("AFFINELENS_EPS_FEAS", "1e-7")
        .args(["enumerate", "--network", s(&net), "--box", "2", "--out", s(dir.path())])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("regions: 4"));
}
