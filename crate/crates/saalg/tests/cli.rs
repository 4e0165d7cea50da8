use std::path::PathBuf;
use std::process::Command;

use saalg::cli::{run, Outcome};
use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn saalg(args: &[&str]) -> Outcome {
    run(std::iter::once("saalg").chain(args.iter().copied()))
}

fn json(out: &Outcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out.stdout))
}

#[test]
fn classify_reports_label_and_params() {
    let out = saalg(&["classify", &data("p8_23_r1.json")]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    assert_eq!(v["label"], "P8(2,3)");
    assert_eq!(v["params"]["r"], "1");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    let text = saalg(&["--format", "text", "classify", &data("p8_23_moved.txt")]);
    assert_eq!(text.stdout.trim(), "P8(2,3)[1]");
}

#[test]
fn catalog_totals() {
    let v = json(&saalg(&["catalog", "--field", "gf3", "--dim", "10"]));
    assert_eq!(v["non_abelian_total"], 25);
    assert_eq!(v["members"].as_array().unwrap().len(), 26);
    let v = json(&saalg(&["catalog", "--field", "gf3", "--dim", "8"]));
    assert_eq!(v["non_abelian_total"], 3);
}

#[test]
fn census_dim8() {
    let v = json(&saalg(&["census", "--field", "gf3", "--n", "4", "--exhaustive", "--quiet"]));
    assert_eq!(v["total"], 6561);
    assert_eq!(v["no_match"], 0);
    assert_eq!(v["counts"].as_object().unwrap().len(), 4);
}

#[test]
fn output_is_deterministic() {
    let args = ["census", "--field", "gf3", "--n", "5", "--samples", "40", "--seed", "9", "--quiet"];
    let a = saalg(&args);
    let b = saalg(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let c = saalg(&["census", "--field", "gf3", "--n", "5", "--samples", "40", "--seed", "9", "--threads", "1", "--quiet"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn iso_verdicts() {
    let none = json(&saalg(&["iso", &data("p8_23_gf7_r1.txt"), &data("p8_23_gf7_r2.txt")]));
    assert_eq!(none["verdict"], "none (exhaustive)");
    let same = json(&saalg(&["iso", &data("p8_23_r1.json"), &data("p8_23_moved.txt")]));
    assert_eq!(same["verdict"], "isomorphic");
    assert_eq!(same["witness"].as_array().unwrap().len(), 8);
    let budget = json(&saalg(&["iso", &data("p8_23_r1.json"), &data("p8_23_moved.txt"), "--budget", "0"]));
    assert_eq!(budget["verdict"], "unknown (budget)");
    let mixed = saalg(&["iso", &data("p8_23_r1.json"), &data("p8_23_gf7_r1.txt")]);
    assert_eq!((mixed.code, json(&mixed)["error"].as_str().unwrap()), (1, "FieldMismatch"));
}

#[test]
fn analyze_and_group() {
    let out = saalg(&["--format", "text", "analyze", &data("dim4.txt")]);
    assert!(out.stdout.contains("not nilpotent"));
    let v = json(&saalg(&["analyze", &data("p6_31.txt")]));
    assert_eq!(v["class"], 2);
    assert_eq!(v["fingerprint"]["branch"], "dim6");
    let g = json(&saalg(&["group", &data("dim4.txt"), "--samples", "200"]));
    let pres = g["presentation"].as_str().unwrap();
    assert!(pres.contains("[h1(x1), h2(y1)] = h3^3 x^3"));
    assert!(pres.contains("[h1(x1), h4(y2)] = h1^-3"));
    assert_eq!(g["laws"]["order"], "177147");
    let wrong = saalg(&["group", &data("p8_23_gf7_r1.txt")]);
    assert_eq!((wrong.code, json(&wrong)["error"].as_str().unwrap()), (1, "WrongField"));
}

#[test]
fn oracle() {
    let v = json(&saalg(&["oracle-dim4", "--field", "gf3"]));
    assert_eq!((v["forms"].as_u64(), v["orbits"].as_u64()), (Some(81), Some(2)));
}

#[test]
fn errors_and_exit_codes() {
    let bad = saalg(&["classify", &data("malformed.json")]);
    assert_eq!(bad.code, 1);
    assert_eq!(json(&bad)["error"], "ParseError");
    let missing = saalg(&["analyze", "/nonexistent/file.json"]);
    assert_eq!((missing.code, json(&missing)["error"].as_str().unwrap()), (1, "Io"));
    assert_eq!(saalg(&["catalog", "--field", "gf9", "--dim", "10"]).code, 2);
    assert_eq!(saalg(&["census", "--field", "gf3", "--n", "4"]).code, 2);
    assert_eq!(saalg(&["frobnicate"]).code, 2);
    let too_big = saalg(&["census", "--field", "gf3", "--n", "5", "--exhaustive"]);
    assert_eq!((too_big.code, json(&too_big)["error"].as_str().unwrap()), (1, "TooLargeForExhaustive"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_saalg");
    let ok = Command::new(bin).args(["classify", &data("p8_23_r1.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin).args(["classify", &data("malformed.json")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let usage = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
