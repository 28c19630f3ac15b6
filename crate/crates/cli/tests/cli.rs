use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_subfreeze"))
}

fn spec(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../specs").join(name)
}

fn run(out: &Path, args: &[&str]) -> Output {
    let o = bin().arg("--out").arg(out).args(args).output().unwrap();
    if !o.status.success() {
        eprintln!("{}", String::from_utf8_lossy(&o.stderr));
    }
    o
}

fn json(path: PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn spec_validate_round_trip_is_byte_identical() {
    for name in [
        "golden_mean.json",
        "hard_squares.json",
        "thue_morse.json",
        "single_point_one_sided.json",
        "full_shift_2.json",
    ] {
        let dir = tempfile::tempdir().unwrap();
        let o = run(dir.path(), &["spec", "validate", "--spec", spec(name).to_str().unwrap()]);
        assert!(o.status.success(), "{name}");
        let a = std::fs::read(spec(name)).unwrap();
        let b = std::fs::read(dir.path().join("spec.json")).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn golden_curve_has_brackets_and_freezes() {
    let dir = tempfile::tempdir().unwrap();
    let s = spec("golden_mean.json");
    let o = run(
        dir.path(),
        &["pressure", "curve", "--spec", s.to_str().unwrap(), "--R", "10", "--beta-grid", "0.05:8:24"],
    );
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    for col in ["beta", "estimate", "lower", "upper", "method"] {
        assert!(header.split(',').any(|c| c == col), "missing {col}");
    }
    assert_eq!(lines.count(), 25);

    let curve = dir.path().join("curve.csv");
    let o = run(dir.path(), &["freeze", "detect", "--curve", curve.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(dir.path().join("freeze.json"));
    assert_eq!(v["report"]["verdict"]["verdict"], "FrozenBeyond");
    let hi = v["report"]["verdict"]["beta_c_upper"].as_f64().unwrap();
    assert!(hi < 1.0);
    let m = json(dir.path().join("manifest.json"));
    assert_eq!(m["command"], "freeze detect");
    assert!(m["input_hash"].is_string());
}

#[test]
fn nogo_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["nogo", "--sequence", "1/n^2", "--d", "1"]);
    assert!(o.status.success());
    assert_eq!(json(dir.path().join("nogo.json"))["verdict"], "no_go");
    let o = run(dir.path(), &["nogo", "--sequence", "log^2n/n", "--d", "1"]);
    assert!(o.status.success());
    assert_eq!(json(dir.path().join("nogo.json"))["verdict"], "candidate_freezing");
    let o = run(dir.path(), &["nogo", "--sequence", "1/n^2", "--d", "2"]);
    assert!(o.status.success());
    assert_eq!(json(dir.path().join("nogo.json"))["verdict"], "candidate_freezing");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let golden = spec("golden_mean.json");
    let g = golden.to_str().unwrap();

    let o = run(dir.path(), &["frobnicate"]);
    assert_eq!(o.status.code(), Some(64));
    let o = run(dir.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(dir.path(), &["spec", "validate", "--spec", "/nonexistent/spec.json"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"alphabet\": [\"0\"], ").unwrap();
    let o = run(dir.path(), &["spec", "validate", "--spec", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["tile", "--spec", g, "--word", "0102"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["nogo", "--sequence", "n^2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(dir.path(), &["pressure", "curve", "--spec", g, "--R", "40"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(dir.path(), &["pressure", "curve", "--spec", g, "--R", "4", "--max-windows", "100"]);
    assert_eq!(o.status.code(), Some(3));
    let hs = spec("hard_squares.json");
    let o = run(
        dir.path(),
        &["pressure", "curve", "--spec", hs.to_str().unwrap(), "--method", "torus-2d", "--torus-n", "3", "--R", "1", "--max-torus", "100"],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn outputs_and_manifest_hashes_are_deterministic() {
    let golden = spec("golden_mean.json");
    let hs = spec("hard_squares.json");
    let mut hashes = Vec::new();
    for _ in 0..2 {
        let dir = tempfile::tempdir().unwrap();
        let o = run(
            dir.path(),
            &[
                "sample", "--spec", hs.to_str().unwrap(), "--beta", "2", "--n", "8", "--steps", "20000", "--chains", "2",
                "--seed", "5", "--telemetry-every", "5000",
            ],
        );
        assert!(o.status.success());
        let m = json(dir.path().join("manifest.json"));
        assert_eq!(m["outputs"].as_array().unwrap().len(), 3);
        let o = run(dir.path(), &["potential", "build", "--spec", golden.to_str().unwrap(), "--upto", "40"]);
        assert!(o.status.success());
        let m2 = json(dir.path().join("manifest.json"));
        assert!(m2["spec_hash"].as_str().unwrap().len() == 64);
        hashes.push((m["outputs"].clone(), m["params"].clone(), m2["outputs"].clone()));
    }
    assert_eq!(hashes[0], hashes[1]);
}

#[test]
fn lang_entropy_tiling_pins_weights() {
    let dir = tempfile::tempdir().unwrap();
    let golden = spec("golden_mean.json");
    let g = golden.to_str().unwrap();

    assert!(run(dir.path(), &["lang", "count", "--spec", g, "--n", "10"]).status.success());
    let counts = std::fs::read_to_string(dir.path().join("counts.csv")).unwrap();
    assert!(counts.lines().any(|l| l.starts_with("10,144")));

    assert!(run(dir.path(), &["entropy", "--spec", g]).status.success());
    let h = json(dir.path().join("entropy.json"))["reference"].as_f64().unwrap();
    assert!((h - 0.5f64.mul_add(5f64.sqrt(), 0.5).ln()).abs() < 1e-12);

    let o = run(
        dir.path(),
        &["tile", "--spec", g, "--word", "01001010011010010100100101001010", "--offset", "3", "--depth", "6", "--window", "8:16"],
    );
    assert!(o.status.success());
    let t = json(dir.path().join("tiling.json"));
    let covered: u64 = t["tiles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| 1u64 << x["level"].as_u64().unwrap())
        .sum();
    assert_eq!(covered + t["margin"].as_array().unwrap().len() as u64, 16);

    let sp = spec("single_point_one_sided.json");
    assert!(run(dir.path(), &["pins", "--spec", sp.to_str().unwrap(), "--word", "000010000000"]).status.success());
    assert!(json(dir.path().join("pins.json"))["pins"]["pins"].is_array());

    assert!(run(dir.path(), &["gibbs", "weights", "--spec", g, "--box", "3", "--beta", "1"]).status.success());
    let w = json(dir.path().join("weights.json"));
    let total: f64 = w["weights"].as_array().unwrap().iter().map(|r| r["weight"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert_eq!(w["rho_check"]["holds"], true);
}
