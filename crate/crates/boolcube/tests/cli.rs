use std::process::Command;

fn boolcube(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_boolcube")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("boolcube-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn analyze_majority() {
    let (code, out, _) = boolcube(&["analyze", "maj:3"]);
    assert_eq!(code, 0);
    assert!(out.contains("mean      1/2"));
    assert!(out.contains("I_max     1/2"));
    assert!(out.contains("W1        3/16"));
}

#[test]
fn spectrum_csv() {
    let p = tmp("spec.csv");
    let (code, _, _) = boolcube(&["spectrum", "dict:2", "--csv", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(text, "mask,numerator,denominator_log2\n0,1,1\n1,1,1\n");
}

#[test]
fn chernoff_query() {
    let (code, out, _) = boolcube(&["chernoff", "ltf:1,1,1;0", "--t", "0", "--c", "1/2"]);
    assert_eq!(code, 0);
    assert!(out.contains("F(t)      1/2"), "{out}");
    assert!(out.contains("strong"));
}

#[test]
fn chernoff_rejects_non_halfspace() {
    let (code, _, err) = boolcube(&["chernoff", "tribes:2,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("not a halfspace"));
}

#[test]
fn correlate_paper5() {
    let (code, out, _) = boolcube(&["correlate", "paper5"]);
    assert_eq!(code, 0);
    assert!(out.contains("cov=1/8 (unflipped -1/16)"), "{out}");
}

#[test]
fn corpus_gen_is_deterministic() {
    let a = boolcube(&["corpus", "gen", "--kind", "random-halfspace", "--seed", "5", "--n", "10", "--count", "4"]).1;
    let b = boolcube(&["corpus", "gen", "--kind", "random-halfspace", "--seed", "5", "--n", "10", "--count", "4"]).1;
    assert_eq!(a, b);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&a).unwrap()["members"].as_array().unwrap().len(), 4);
}

#[test]
fn corpus_gen_empty_band() {
    let (code, _, err) = boolcube(&["corpus", "gen", "--kind", "random-halfspace", "--n", "4", "--band", "1/4096,1/1024", "--count", "1"]);
    assert_eq!(code, 2);
    assert!(err.contains("empty band"), "{err}");
}

#[test]
fn verify_writes_report_and_csv() {
    let corpus = tmp("c.json");
    let (code, _, _) = boolcube(&["corpus", "gen", "--kind", "monotone-random", "--n", "6", "--count", "5", "--out", corpus.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (out, csv) = (tmp("r.json"), tmp("r.csv"));
    let (code, stdout, _) = boolcube(&["verify", "--suite", "exact-identities", "--corpus", corpus.to_str().unwrap(), "--out", out.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suite_id"], "exact-identities");
    assert_eq!(v["summary"]["fail"], 0);
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count();
    assert_eq!(rows, v["records"].as_array().unwrap().len() + 1);
}

#[test]
fn verify_exit_code_reflects_failures() {
    let out = tmp("fail.json");
    let (code, stdout, _) = boolcube(&["verify", "--suite", "paper-examples", "--corpus", "builtin", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(stdout.contains("FAIL LEM32-LOWER"));
}

#[test]
fn pin_then_assert() {
    let (pins, out) = (tmp("pins.json"), tmp("pinned.json"));
    let args = ["verify", "--suite", "pinned", "--corpus", "builtin", "--out", out.to_str().unwrap(), "--pins", pins.to_str().unwrap()];
    let mut first = args.to_vec();
    first.push("--pin");
    assert_eq!(boolcube(&first).0, 0);
    assert_eq!(boolcube(&args).0, 0);
    let (code, _, err) = boolcube(&["verify", "--suite", "pinned", "--corpus", "small-rational", "--out", out.to_str().unwrap(), "--pins", pins.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("pinned constants were computed on corpus"));
}

#[test]
fn unknown_suite() {
    let (code, _, err) = boolcube(&["verify", "--suite", "nope", "--out", tmp("x.json").to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"));
}
