use std::path::PathBuf;
use std::process::Command;

use hardy_cli::Report;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardy-forge"))
}

fn run_to_file(args: &[&str], extra_env: Option<(&str, &str)>) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("report.out");
    let mut cmd = bin();
    cmd.args(args).arg("--out").arg(&out);
    if let Some((k, v)) = extra_env {
        cmd.env(k, v);
    }
    let status = cmd.status().unwrap();
    let text = std::fs::read_to_string(&out).unwrap_or_default();
    (status.code().unwrap(), text)
}

#[test]
fn constants_exit_zero() {
    let (code, text) = run_to_file(&["constants", "--k", "5"], None);
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(r.summary.failed, 0);
    // rows i = 0..=5 plus the positivity check
    assert_eq!(r.results.len(), 7);
}

#[test]
fn identity_up_to_hundred() {
    let (code, text) = run_to_file(&["identity", "--k-max", "100"], None);
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(r.summary.failed, 0);
    assert!(r.summary.passed > 0);
}

#[test]
fn rellich_suite_passes() {
    let (code, text) = run_to_file(&["verify", "--id", "cor26", "--trials", "1000", "--seed", "7"], None);
    assert_eq!(code, 0);
    let r: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(r.summary.passed, 1000);
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let args = ["verify", "--id", "cor22", "--k", "2", "--trials", "300", "--seed", "11"];
    let (_, one) = run_to_file(&[&args[..], &["--threads", "1"]].concat(), None);
    let (_, four) = run_to_file(&[&args[..], &["--threads", "4"]].concat(), None);
    let (_, env) = run_to_file(&args, Some(("HARDY_FORGE_THREADS", "3")));
    assert!(!one.is_empty());
    assert_eq!(one, four);
    assert_eq!(one, env);
}

#[test]
fn json_report_round_trips() {
    let (_, text) = run_to_file(&["parseval", "--trials", "4", "--seed", "3"], None);
    let r: Report = serde_json::from_str(&text).unwrap();
    assert_eq!(r.to_json(), text);
    assert_eq!(r.config["command"]["command"], "parseval");
    assert_eq!(r.summary.wall_ms, 0);
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        vec!["verify", "--id", "no_such_inequality"],
        vec!["verify", "--id", "cor22"],
        vec!["constants", "--k", "0"],
        vec!["spectrum", "--id", "hardy_11", "--N", "1000,100"],
        vec!["frobnicate"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unreadable_input_exits_two() {
    let out = bin().args(["verify", "--id", "hardy_11", "--input", "/nonexistent/seq.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_has_expected_columns() {
    let (code, text) = run_to_file(&["spectrum", "--id", "hardy_11", "--N", "50,100", "--format", "csv"], None);
    assert_eq!(code, 0);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["N", "lambda_min", "paper_constant", "gap"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    let lambda: f64 = rows[1][1].parse().unwrap();
    assert!(lambda >= 0.25);
}

#[test]
fn sequence_input_is_checked() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.json");
    std::fs::write(&seq, r#"{"lo":1,"hi":1,"values":[[1,"1","0"]]}"#).unwrap();
    let (code, text) =
        run_to_file(&["verify", "--id", "hardy_11", "--input", seq.to_str().unwrap(), "--format", "csv"], None);
    assert_eq!(code, 0);
    assert!(text.starts_with("id,admissible,lhs,rhs,margin,holds"));
    assert!(text.contains("7/4"));
}
