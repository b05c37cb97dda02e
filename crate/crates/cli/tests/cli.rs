use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn forge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drinfeld-forge")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn build_a1_writes_six_labels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a1.json");
    let out = forge(&["build", "--series", "A", "--rank", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let labels: Vec<&str> = v["basis"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(labels, ["H1", "H2", "I1", "I2", "F1,2", "F2,1"]);
    assert!(!dir.path().join("a1.rotated.json").exists());
}

#[test]
fn build_with_mixed_spec_writes_rotated_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d2.json");
    let out = forge(&["build", "--series", "D", "--rank", "2", "--spec", "mixed:pairs=1-2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("d2.rotated.json")).unwrap()).unwrap();
    let labels: Vec<&str> = v["basis"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert!(labels.contains(&"Y1,2") && labels.contains(&"y^1,2"), "{labels:?}");
    assert_eq!(labels.len(), 6);
}

#[test]
fn rank_gate_exits_two() {
    assert_eq!(code(&forge(&["build", "--series", "D", "--rank", "1"])), 2);
    assert_eq!(code(&forge(&["build", "--series", "E", "--rank", "2"])), 2);
    assert_eq!(code(&forge(&["build", "--series", "A"])), 2);
    assert_eq!(code(&forge(&["frobnicate"])), 2);
}

#[test]
fn verify_b2_suite_passes() {
    let out = forge(&["verify", "--series", "B", "--rank", "2", "--checks", "cybe,cocycle,jacobi,compatibility"]);
    assert_eq!(code(&out), 0, "{out:?}");
    let lines: Vec<String> = stdout(&out).lines().map(str::to_owned).collect();
    // structural checks run first regardless of the order requested
    let names: Vec<&str> = lines.iter().map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(names, ["jacobi", "compatibility", "cocycle", "cybe"]);
    assert!(lines.iter().all(|l| l.starts_with("PASS ")));
}

#[test]
fn simple_part_of_gl_fails_sub_bialgebra() {
    let out = forge(&["verify", "--series", "A", "--rank", "2", "--checks", "subbialg", "--sub", "An"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).starts_with("FAIL subbialg"));
    let d = forge(&["verify", "--series", "B", "--rank", "2", "--checks", "subbialg", "--sub", "Dn"]);
    assert_eq!(code(&d), 1);
    let plus = forge(&["verify", "--series", "B", "--rank", "2", "--checks", "subbialg"]);
    assert_eq!(code(&plus), 0);
}

#[test]
fn bosonic_rep_check_passes_for_c2() {
    let out = forge(&["verify", "--series", "C", "--rank", "2", "--checks", "rep,casimir", "--cutoff", "6"]);
    assert_eq!(code(&out), 0, "{out:?}");
}

#[test]
fn unknown_check_rejected_before_work() {
    let out = forge(&["verify", "--series", "A", "--rank", "1", "--checks", "jacobi,bogus"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn json_report_is_machine_readable() {
    let out = forge(&["verify", "--series", "D", "--rank", "2", "--spec", "mixed:pairs=1-2", "--checks", "closure,compatibility,reconstruction,selfdual", "--json"]);
    assert_eq!(code(&out), 0, "{out:?}");
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["spec"], "mixed:pairs=1-2;central=");
    assert_eq!(v["reports"].as_array().unwrap().len(), 4);
    assert_eq!(v["reports"][0]["check"], "closure");
    assert!(v["reports"][0]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn every_check_runs_on_a_small_instance() {
    let all = "jacobi,closure,pairing,reconstruction,compatibility,selfdual,forminv,delta-agree,cocycle,cojacobi,subbialg,coboundary,cybe,twist,chain,rep,casimir";
    for (s, n) in [("A", "1"), ("B", "1"), ("C", "1"), ("D", "2")] {
        let out = forge(&["verify", "--series", s, "--rank", n, "--checks", all, "--jobs", "2"]);
        assert_eq!(code(&out), 0, "{s}{n}: {}", stdout(&out));
        assert_eq!(stdout(&out).lines().count(), 17);
    }
}

#[test]
fn b1_rmatrix_export_contains_closed_form_terms() {
    let out = forge(&["export", "--series", "B", "--rank", "1", "--what", "rmatrix"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let terms = v.as_array().unwrap();
    assert!(terms.iter().any(|t| t["a"] == "U1" && t["b"] == "V1" && t["coeff"][0] == "-1/2"));
    assert!(terms.iter().any(|t| t["part"] == "r_t" && t["a"] == "H1" && t["b"] == "I1" && t["coeff"][1] == "1/2"));
}

#[test]
fn delta_text_export_lists_every_generator() {
    let out = forge(&["export", "--series", "B", "--rank", "2", "--what", "delta", "--format", "text"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 12);
    assert!(stdout(&out).lines().any(|l| l.starts_with("δ(U1)")), "{}", stdout(&out));
}

#[test]
fn exports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for what in ["brackets", "delta", "rmatrix", "pairing", "matrices", "discrepancies"] {
        for format in ["json", "text"] {
            let a = dir.path().join(format!("{what}-a.{format}"));
            let b = dir.path().join(format!("{what}-b.{format}"));
            for p in [&a, &b] {
                let out = forge(&["export", "--series", "C", "--rank", "2", "--what", what, "--format", format, "--out", p.to_str().unwrap()]);
                assert_eq!(code(&out), 0, "{what} {format}: {out:?}");
            }
            assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap(), "{what} {format}");
        }
    }
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.json");
    let out = forge(&["export", "--series", "A", "--rank", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn bad_export_arguments_exit_two() {
    assert_eq!(code(&forge(&["export", "--series", "A", "--rank", "1", "--what", "everything"])), 2);
    assert_eq!(code(&forge(&["export", "--series", "A", "--rank", "1", "--format", "xml"])), 2);
    assert_eq!(code(&forge(&["verify", "--series", "A", "--rank", "1", "--cutoff", "2", "--checks", "rep"])), 2);
    assert_eq!(code(&forge(&["verify", "--series", "A", "--rank", "1", "--spec", "mixed:pairs=1-9"])), 2);
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"series":"B","rank":1,"checks":"jacobi,cybe"}"#).unwrap();
    let out = forge(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{out:?}");
    assert_eq!(stdout(&out).lines().count(), 2);
    // flags win over the file
    let out = forge(&["verify", "--config", cfg.to_str().unwrap(), "--checks", "jacobi"]);
    assert_eq!(stdout(&out).lines().count(), 1);
    fs::write(&cfg, r#"{"series":"B","rank":1,"colour":"red"}"#).unwrap();
    assert_eq!(code(&forge(&["verify", "--config", cfg.to_str().unwrap()])), 2);
}
