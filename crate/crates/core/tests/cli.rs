use std::path::PathBuf;
use std::process::{Command, Output};

fn qfs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfs")).args(args).output().unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn holonomy_reports_residual() {
    let out = qfs(&["holonomy", &data("genus2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["relator_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["generators"].as_object().unwrap().len(), 4);
}

#[test]
fn lengths_by_curve_and_word() {
    let out = qfs(&["lengths", &data("genus2_quasifuchsian.json"), "--curve", "c2"]);
    assert_eq!(out.status.code(), Some(0));
    let l = &json(&out)["c2"];
    assert!((l[0].as_f64().unwrap() - 2.5).abs() < 1e-9);
    assert!((l[1].as_f64().unwrap() + 0.05).abs() < 1e-9);

    let holo = json(&qfs(&["holonomy", &data("genus2.json")]));
    let word = holo["markings"]["c3"].as_str().unwrap().to_string();
    let out = qfs(&["lengths", &data("genus2.json"), "--word", &word]);
    assert!((json(&out)[&word][0].as_f64().unwrap() - 3.0).abs() < 1e-9);

    let out = qfs(&["lengths", &data("genus2.json"), "--word", "a1 zz"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qfs(&["lengths", &data("genus2.json"), "--curve", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gram_and_darboux_check() {
    let out = qfs(&["gram", &data("genus2.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["matrix"].as_array().unwrap().len(), 6);
    assert_eq!(v["basis"][3], "tau_c1");

    let out = qfs(&["darboux-check", &data("genus2.json")]);
    let v = json(&out);
    let pass = v["pass"].as_bool().unwrap();
    assert_eq!(out.status.code(), Some(if pass { 0 } else { 1 }));
    assert!(v["scaled_residual"].as_f64().unwrap() < 1e-4);
}

#[test]
fn twist_emits_a_valid_config() {
    let out = qfs(&["twist", &data("genus2.json"), "--curve", "c1", "--t", "-0.5,0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let c = qfs_core::config::parse_config(&text).unwrap();
    assert!((c.fn_.tau[0] - qfs_core::C64::new(-0.2, 0.2)).norm() < 1e-15);
    let out = qfs(&["twist", &data("genus2.json"), "--curve", "c1", "--t", "oops"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn limitset_formats() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("cloud.svg");
    let out = qfs(&["limitset", &data("genus2.json"), "--depth", "3", "--format", "svg", "-o", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    let out = qfs(&["limitset", &data("genus2.json"), "--depth", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("re,im,word_length"));
    assert!(text.lines().count() > 8);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"genus\": 2, \"pants\": []}").unwrap();
    assert_eq!(qfs(&["holonomy", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(qfs(&["holonomy", "/definitely/missing.json"]).status.code(), Some(2));
    assert_eq!(qfs(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn schwarzian_selftest_uses_seed() {
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_qfs"))
            .arg("schwarzian-selftest")
            .env("QFS_SEED", seed)
            .output()
            .unwrap()
    };
    let (a, b, c) = (run("7"), run("7"), run("8"));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(run("seven").status.code(), Some(2));
}
