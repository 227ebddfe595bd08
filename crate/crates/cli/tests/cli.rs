use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn wgroups(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wgroups"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("wgroups-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn padic_socle_q2() {
    let out = wgroups(&["padic", "socle", "--base", "q2", "--precision", "32"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["schema"], 1);
    assert_eq!(r["status"], "pass");
    assert_eq!(r["results"]["dimJ"], 10);
    assert_eq!(r["results"]["layers"], serde_json::json!([5, 5]));
    assert_eq!(r["results"]["l"], 2);
    assert_eq!(r["provenance"][0], "criterion:9");
}

#[test]
fn report_fields_are_present() {
    let out = wgroups(&["padic", "formula", "--n", "4"]);
    let r = &lines(&out)[0];
    for key in [
        "schema",
        "command",
        "inputs",
        "results",
        "provenance",
        "status",
    ] {
        assert!(r.get(key).is_some(), "{key}");
    }
    assert_eq!(r["results"]["dim_j"], 34);
}

#[test]
fn hilbert_symbol_values() {
    let sym = |a: &str, b: &str, p: &str| {
        lines(&wgroups(&["padic", "symbol", "--a", a, "--b", b, "--p", p]))[0]["results"]["symbol"]
            .as_i64()
            .unwrap()
    };
    assert_eq!(sym("-1", "-1", "2"), -1);
    assert_eq!(sym("2", "5", "2"), -1);
    assert_eq!(sym("2", "7", "2"), 1);
    assert_eq!(sym("2", "5", "5"), -1);
    assert_eq!(sym("3", "7", "5"), 1);
}

#[test]
fn group_build_roundtrips_through_a_file() {
    let path = tmp("v2.txt");
    let out = wgroups(&[
        "group",
        "build",
        "--family",
        "v",
        "--n",
        "2",
        "--save",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(lines(&out)[0]["results"]["order"], 128);
    let out = wgroups(&[
        "--max-degree",
        "4",
        "cohom",
        "betti",
        "--group",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        lines(&out)[0]["results"]["ranks"],
        serde_json::json!([1, 2, 6, 11, 22])
    );
}

#[test]
fn betti_of_v2_verifies_the_series() {
    let out = wgroups(&[
        "--max-degree",
        "6",
        "cohom",
        "betti",
        "--family",
        "v",
        "--n",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(r["results"]["series_verified"], true);
}

#[test]
fn einfty_and_cfield() {
    let out = wgroups(&["cohom", "einfty11", "--family", "w", "--n", "3"]);
    assert_eq!(lines(&out)[0]["results"]["dim"], 8);
    let path = tmp("q2.field");
    std::fs::write(&path, "3\n100\n100\n001\n010\n").unwrap();
    let out = wgroups(&["field", "cfield", "--in", path.to_str().unwrap()]);
    let r = &lines(&out)[0];
    assert_eq!(r["results"]["is_c_field"], false);
    assert_eq!(r["results"]["einfty11_dim"], 5);
    let out = wgroups(&["field", "cfield", "--base", "qp", "--p", "5"]);
    assert_eq!(lines(&out)[0]["results"]["is_c_field"], true);
}

#[test]
fn module_decompose_and_socle() {
    let out = wgroups(&["module", "decompose", "--trivial", "2", "--shift", "2"]);
    assert_eq!(lines(&out)[0]["results"]["decomposition"], "Omega^2k");
    let out = wgroups(&["module", "socle", "--trivial", "3", "--shift", "-2"]);
    assert_eq!(lines(&out)[0]["results"]["length"], 3);
}

#[test]
fn j90_assignment_file() {
    let path = tmp("asg.txt");
    std::fs::write(&path, "# j3 at s1, j1 at s2\n1 00100\n2 10000\n").unwrap();
    let out = wgroups(&[
        "j90",
        "verify",
        "--family",
        "v",
        "--n",
        "2",
        "--assignment",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = &lines(&out)[0];
    assert_eq!(
        r["results"]["witness"],
        serde_json::json!([false, false, false, true, false])
    );
}

#[test]
fn spectral_sequence_grid_and_failed_e3() {
    let out = wgroups(&["ss", "x2", "--pmax", "8"]);
    let rs = lines(&out);
    assert_eq!(rs[0]["results"]["page"], 2);
    assert!(rs[0]["results"]["entries"]
        .as_array()
        .unwrap()
        .contains(&serde_json::json!([0, 3, 5])));
    assert_eq!(rs[1]["status"], "fail");
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn suite_subset_passes_and_writes_out_file() {
    let path = tmp("suite.jsonl");
    let out = wgroups(&[
        "--threads",
        "2",
        "--out",
        path.to_str().unwrap(),
        "suite",
        "--criterion",
        "10,12",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rs: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rs.len(), 3);
    assert_eq!(rs[2]["command"], "suite summary");
    assert_eq!(rs[2]["results"]["pass"], 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(wgroups(&["suite", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        wgroups(&["suite", "--criterion", "15"]).status.code(),
        Some(2)
    );
    let out = wgroups(&["padic", "socle", "--base", "qp", "--p", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        wgroups(&["cohom", "betti", "--group", "/nonexistent/g.txt"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn non_central_extension_is_a_runtime_error() {
    let out = wgroups(&["cohom", "einfty11", "--family", "v", "--n", "2"]);
    assert_eq!(out.status.code(), Some(4));
}
