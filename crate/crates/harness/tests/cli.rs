use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bochner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bochner"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn empty_scenario_passes_with_empty_body() {
    let out = bochner(&["run", &scenario("empty.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 0);
}

#[test]
fn krein_1d_passes_and_writes_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("out");
    let out = bochner(&["run", &scenario("krein_1d.toml"), "--out-dir", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read(dir.join("report.json")).unwrap();
    assert_eq!(report, out.stdout);
    let meta: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.join("metadata.json")).unwrap()).unwrap();
    assert!(meta["wall_clock_seconds"].is_number());
    let names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().any(|n| n.ends_with("complex_inversion_inversion.csv")));
    assert!(names.iter().any(|n| n.ends_with("spectral_shift_shift_atoms.csv")));
    assert!(names.iter().any(|n| n.ends_with("determinant_determinant.csv")));
    let csv = std::fs::read_to_string(
        dir.join(names.iter().find(|n| n.ends_with("complex_inversion_inversion.csv")).unwrap()),
    )
    .unwrap();
    assert!(csv.starts_with("t,xi,xi_recovered,abs_error"));
}

#[test]
fn bound_suite_writes_seeded_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bochner(&["run", &scenario("bounds.toml"), "--out-dir", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let suite = std::fs::read_to_string(tmp.path().join("check002_bound_suite_suite.csv")).unwrap();
    let mut lines = suite.lines();
    assert_eq!(lines.next(), Some("seed,lhs,rhs,margin,pass"));
    assert_eq!(lines.count(), 100);
}

#[test]
fn undefined_function_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let f = write(
        tmp.path(),
        "bad.toml",
        r#"
name = "bad"
[[tuple]]
id = "A"
kind = "diagonal"
diagonals = [[-1.0]]
[[check]]
op = "psi_of"
psi = "missing"
tuple = "A"
tolerance = 1e-8
"#,
    );
    let out = bochner(&["run", &f]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing"));
}

#[test]
fn malformed_file_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let f = write(tmp.path(), "broken.toml", "name = \n[[check]]\nop = 3\n");
    assert_eq!(bochner(&["run", &f]).status.code(), Some(2));
    let f = write(
        tmp.path(),
        "unknown_op.toml",
        "name = \"x\"\n[[check]]\nop = \"no_such_op\"\n",
    );
    assert_eq!(bochner(&["run", &f]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let f = write(
        tmp.path(),
        "fail.toml",
        r#"
name = "fail"
[[psi]]
id = "half"
kind = "frac_power"
alpha = 0.5
[[tuple]]
id = "A"
kind = "diagonal"
diagonals = [[-1.0, -2.0]]
[[tuple]]
id = "B"
kind = "diagonal"
diagonals = [[-1.5, -2.5]]
[[check]]
op = "trace_formula"
psi = "half"
a = "A"
b = "B"
tolerance = 1e-8
"#,
    );
    let out = bochner(&["run", &f]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert!(v["checks"][0]["error"].as_str().unwrap().starts_with("moment_infinite"));
}

#[test]
fn csv_format_lists_checks() {
    let out = bochner(&["run", &scenario("trace_nd.toml"), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("index,op,label,pass,residual,budget,tolerance,error,inputs_digest"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn list_catalog_text_and_json_agree() {
    let text = String::from_utf8(bochner(&["list-catalog"]).stdout).unwrap();
    for name in ["dirac", "frac_power", "log_resolvent", "tempered_stable", "sum", "scale"] {
        assert!(text.contains(name), "{name} missing");
    }
    let v: serde_json::Value =
        serde_json::from_slice(&bochner(&["list-catalog", "--json"]).stdout).unwrap();
    for entry in v["functions"].as_array().unwrap() {
        let name = entry["name"].as_str().unwrap();
        assert!(text.contains(name));
    }
    for entry in v["tuple_generators"].as_array().unwrap() {
        assert!(text.contains(entry["name"].as_str().unwrap()));
    }
}

#[test]
fn list_catalog_reflects_scenario_combinators() {
    let out = bochner(&["list-catalog", "--scenario", &scenario("calculus.toml")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("scenario functions:"));
    assert!(text.lines().any(|l| l.trim_start().starts_with("mix") && l.contains("sum(")));
}

#[test]
fn digests_change_with_inputs_only() {
    let a = bochner(&["run", &scenario("krein_1d.toml")]);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    let digests: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["inputs_digest"].as_str().unwrap())
        .collect();
    assert!(digests.iter().all(|d| d.len() == 64));
    let mut unique = digests.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), digests.len());
}
