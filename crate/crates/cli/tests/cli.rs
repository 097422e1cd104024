use std::io::Write;
use std::process::{Command, Output};

use locce_cli::{emit, parse, Cell, Format, Row, Status};

fn locce(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locce"))
        .args(args)
        .env_remove("LOCCE_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn scenario_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn sample_row() -> Row {
    Row {
        scenario: "s".into(),
        family: "ghz".into(),
        protocol: "partitioned".into(),
        fidelity: Cell::Num(1.0),
        bound: Cell::text("n/a (perfect)"),
        expected: Cell::Num(1.0),
        status: Status::Pass,
        ms: 3,
    }
}

#[test]
fn ghz_partitioned_is_perfect() {
    let out = locce(&["ghz", "--n", "4", "--sizes", "2,2", "--format", "csv"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], "1.00000000000");
    assert_eq!(row[4], "n/a (perfect)");
    assert_eq!(row[6], "pass");
}

#[test]
fn lattice_half_with_quarter_bound() {
    let out = locce(&["lattice", "--n", "2", "--m", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "scenario,family,protocol,fidelity,bound,expected,status,ms");
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row.len(), 8);
    assert_eq!(row[3], "0.500000000000");
    assert_eq!(row[4], "0.250000000000");
    assert_eq!(row[7], "-");
}

#[test]
fn json_rows_have_eight_keys() {
    let out = locce(&["parametric", "--alpha", "0.9", "--gamma", "0.8", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    let obj = rows[0].as_object().unwrap();
    assert_eq!(obj.len(), 8);
    assert_eq!(obj["fidelity"], "0.725000000000");
}

#[test]
fn empty_result_is_header_only() {
    for (format, want) in [
        (Format::Csv, "scenario,family,protocol,fidelity,bound,expected,status,ms\n"),
        (Format::Json, "[]\n"),
        (Format::Table, "scenario  family  protocol  fidelity  bound  expected  status  ms\n"),
    ] {
        assert_eq!(emit(format, &[], false).unwrap(), want);
    }
}

#[test]
fn csv_row_has_eight_fields() {
    let text = emit(Format::Csv, &[sample_row()], true).unwrap();
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row.split(',').count(), 8);
    assert!(row.ends_with(",3"));
}

#[test]
fn twelve_significant_digits() {
    use locce_cli::emit::sig12;
    assert_eq!(sig12(0.5), "0.500000000000");
    assert_eq!(sig12(1.0), "1.00000000000");
    assert_eq!(sig12(0.9999999999999996), "1.00000000000");
    assert_eq!(sig12(2.0 / 3.0), "0.666666666667");
    assert_eq!(sig12(1.5e-7), "1.50000000000e-7");
    assert_eq!(sig12(0.0), "0.00000000000");
}

#[test]
fn identical_seed_gives_identical_bytes() {
    let file = scenario_file(
        r#"{"format": "csv", "scenarios": [
            {"id": "skew", "family": "oneway", "lambdas": [1.6, 0.4], "outcomes": 4, "restarts": 3},
            {"id": "bell", "family": "oneway", "restarts": 2},
            {"family": "graph", "n": 3, "shape": "path"}
        ]}"#,
    );
    let path = file.path().to_str().unwrap();
    let a = locce(&["run", "--scenario", path, "--seed", "9"]);
    let b = locce(&["run", "--scenario", path, "--seed", "9"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let ids: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids, ["skew", "bell", "graph-3"]);
}

#[test]
fn seed_comes_from_environment() {
    let file = scenario_file(r#"{"scenarios": [{"family": "oneway", "lambdas": [1.5, 0.5], "restarts": 2}]}"#);
    let path = file.path().to_str().unwrap();
    let flag = locce(&["run", "--scenario", path, "--seed", "42"]);
    let env = Command::new(env!("CARGO_BIN_EXE_locce"))
        .args(["run", "--scenario", path])
        .env("LOCCE_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, env.stdout);
}

#[test]
fn flags_override_file_format() {
    let file = scenario_file(r#"{"format": "json", "scenarios": [{"family": "example4"}]}"#);
    let path = file.path().to_str().unwrap();
    let json = locce(&["run", "--scenario", path]);
    assert!(stdout(&json).starts_with('['));
    let csv = locce(&["run", "--scenario", path, "--format", "csv"]);
    assert!(stdout(&csv).starts_with("scenario,"));
}

#[test]
fn unknown_field_is_named() {
    let file = scenario_file(r#"{"scenarios": [{"family": "parametric", "alpah": 0.9, "gamma": 0.8}]}"#);
    let out = locce(&["run", "--scenario", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("alpah"), "{err}");
    assert!(err.contains("scenarios[0]"), "{err}");
}

#[test]
fn parse_reports_bad_value_path() {
    let err = parse(r#"{"scenarios": [{"family": "ghz", "n": "four"}]}"#).unwrap_err();
    assert!(err.to_string().contains("scenarios[0].n"), "{err}");
    let err = parse(r#"{"scenarios": [{"family": "circle"}]}"#).unwrap_err();
    assert!(err.to_string().contains("scenarios[0].family"), "{err}");
}

#[test]
fn precondition_failures_exit_nonzero() {
    let out = locce(&["lattice", "--n", "2", "--m", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`m`"));

    let out = locce(&["parametric", "--alpha", "0.5", "--gamma", "0.8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("alpha"));

    let out = locce(&["ghz", "--n", "4", "--sizes", "2,1"]);
    assert_eq!(out.status.code(), Some(2));

    let file = scenario_file(r#"{"scenarios": [{"family": "lattice", "protocol": "decode", "n": 2}]}"#);
    let out = locce(&["run", "--scenario", file.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not available"));
}

#[test]
fn failing_expectation_exits_one() {
    let out = locce(&["lattice", "--n", "2", "--m", "1", "--expected", "0.9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("fail"));
}

#[test]
fn timing_fills_ms_column() {
    let out = locce(&["example4", "--timing", "--format", "csv"]);
    let row = stdout(&out).lines().nth(1).unwrap().to_string();
    assert!(row.rsplit(',').next().unwrap().parse::<u128>().is_ok());
}

#[test]
fn paper_suite_passes() {
    let out = locce(&["paper-suite"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(!text.contains(" fail "));
    assert!(text.trim_end().lines().last().unwrap().starts_with("paper-suite: "));
}

#[test]
fn bundled_sample_passes() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/sample.json");
    let out = locce(&["run", "--scenario", path, "--format", "csv"]);
    assert!(out.status.success(), "{}{}", stdout(&out), stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 11);
}
