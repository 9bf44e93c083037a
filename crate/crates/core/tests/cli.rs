use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lagindex"))
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn scene(name: &str, text: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn index_on_chekanov() {
    let p = scene("chekanov.scene", "surface chekanov r=1.0\n");
    let v = json(&bin().arg("index").arg(&p).output().unwrap());
    assert_eq!(v["schema"], "v1");
    assert_eq!(v["result"]["index"]["mu2"], 0);
    assert_eq!(v["result"]["index"]["y"], 4);
    assert_eq!(v["result"]["oracles"]["preimage_majority"], 0);
    assert!(v.get("timing_seconds").is_none());
}

#[test]
fn an_tori_table() {
    let v = json(&bin().args(["an-tori", "--n", "3"]).output().unwrap());
    let ys: Vec<i64> = v["result"]["tori"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["y"].as_i64().unwrap())
        .collect();
    assert_eq!(ys, [4, 0, -4, -8, -12]);
}

#[test]
fn twist_and_fiber() {
    let v = json(
        &bin()
            .args(["twist", "--n", "2", "--sign", "-"])
            .output()
            .unwrap(),
    );
    assert_eq!(v["result"]["y_relative"], 8);
    assert_eq!(v["result"]["mu2_before"], v["result"]["mu2_after"]);
    let v = json(
        &bin()
            .args(["fiber", "--a", "0", "--b", "-0.125"])
            .output()
            .unwrap(),
    );
    assert_eq!(v["result"]["indices"]["mu2"], 0);
    assert_eq!(v["result"]["indices"]["y_bar"], 4);
}

#[test]
fn surgery_round_trip() {
    let p = scene("surgery.scene", "surface chekanov r=2\n");
    let v = json(&bin().arg("surgery").arg(&p).output().unwrap());
    assert_eq!(v["result"]["relative_y"].as_i64().unwrap().abs(), 4);
    assert_eq!(v["result"]["mu2_before"], v["result"]["mu2_after"]);
    assert_eq!(v["result"]["dual_restores_input"], true);
}

#[test]
fn output_is_deterministic() {
    let p = scene("det.scene", "surface clifford r=1\nop plot\n");
    let (s1, s2) = (tmp("det1.svg"), tmp("det2.svg"));
    let a = bin().arg("index").arg(&p).output().unwrap();
    let b = bin().arg("index").arg(&p).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert!(bin()
        .arg("plot")
        .arg(&p)
        .arg("--out")
        .arg(&s1)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .arg("plot")
        .arg(&p)
        .arg("--out")
        .arg(&s2)
        .status()
        .unwrap()
        .success());
    let (x, y) = (std::fs::read(&s1).unwrap(), std::fs::read(&s2).unwrap());
    assert_eq!(x, y);
    assert!(x.len() < 2 << 20);
}

#[test]
fn timing_is_opt_in() {
    let v = json(
        &bin()
            .args(["an-tori", "--n", "1", "--timing"])
            .output()
            .unwrap(),
    );
    assert!(v["timing_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn exit_codes() {
    let bad = scene("bad.scene", "surface chekanov r=-1\n");
    let o = bin().arg("index").arg(&bad).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["code"], "scene_validation");

    let unknown = scene("unknown.scene", "surface whitney\nzoom 2\n");
    assert_eq!(
        bin().arg("index").arg(&unknown).status().unwrap().code(),
        Some(2)
    );
    assert_eq!(bin().arg("frobnicate").status().unwrap().code(), Some(2));
    assert_eq!(bin().args(["an-tori"]).status().unwrap().code(), Some(2));

    // A tangency point is not a valid reference point.
    let irregular = scene(
        "irregular.scene",
        "surface chekanov r=1\nrefpoint arc=0 s=0\n",
    );
    let o = bin().arg("index").arg(&irregular).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["code"], "index");
    assert_eq!(
        bin()
            .args(["fiber", "--a", "5", "--b", "0"])
            .status()
            .unwrap()
            .code(),
        Some(1)
    );
}
