use std::path::Path;
use std::process::{Command, Output};

const EMBEDDED_COUNTS: &str = include_str!("../../core/data/point_counts.txt");

fn tetra(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tetra")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write_table(dir: &Path, text: &str) -> String {
    let p = dir.join("counts.txt");
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn strata_prints_summary_line() {
    let o = tetra(&["strata", "--skip-rules"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().next(), Some("1424 strata, 23 divisors, max codim 6"));
}

#[test]
fn strata_reports_rule_disagreement_as_failure() {
    let o = tetra(&["strata"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL strata/rule_enumeration_equals_cliques"));
    assert!(out.contains("got 1880 diagrams, 0 missing, 456 extra"));
}

#[test]
fn strata_csv_has_one_row_per_stratum() {
    let o = tetra(&["strata", "--skip-rules", "--emit", "csv"]);
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("index,clique,split,shift,codim,orbit_id"));
    assert_eq!(lines.count(), 1424);
}

#[test]
fn counts_prints_betti_line() {
    let o = tetra(&["counts"]);
    assert_eq!(o.status.code(), Some(0));
    let first = stdout(&o).lines().next().unwrap().to_string();
    assert!(first.starts_with("b: 1 0 26 0 188 0 652"), "{first}");
    assert!(first.ends_with("188 0 26 0 1"));
}

#[test]
fn counts_csv_lists_all_rows() {
    let o = tetra(&["counts", "--emit", "csv"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 161);
    assert!(out.lines().skip(1).all(|l| l.ends_with("true,true,true,true")));
}

#[test]
fn oracle_json_uses_documented_fields() {
    let o = tetra(&["oracle", "--primes", "2,3", "--types", "X0,Astar,B"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for r in rows {
        for key in ["type", "q", "oracleCount", "tableCount", "match"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["match"], true);
    }
    assert_eq!(rows[4]["type"], "Astar");
    assert_eq!(rows[4]["oracleCount"], 108);
}

#[test]
fn oracle_rejects_non_prime() {
    let o = tetra(&["oracle", "--primes", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not a prime"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tetra(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(tetra(&["oracle", "--types", "Z"]).status.code(), Some(2));
    assert_eq!(tetra(&["ring", "--field", "f3"]).status.code(), Some(2));
    assert_eq!(tetra(&["counts", "--table", "/nonexistent/table.txt"]).status.code(), Some(2));
}

#[test]
fn validate_accepts_embedded_data() {
    let o = tetra(&["validate"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn validate_rejects_wrong_degree_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let bad = EMBEDDED_COUNTS.replace("X0        100  1   0,0,0,1,-2,1 ", "X0        100  1   0,0,0,1,-2,0,1");
    assert_ne!(bad, EMBEDDED_COUNTS);
    let p = write_table(dir.path(), &bad);
    let o = tetra(&["validate", "--table", &p]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 7") && err.contains("degree"), "{err}");
}

#[test]
fn validate_rejects_duplicate_row() {
    let dir = tempfile::tempdir().unwrap();
    let dup = format!("{EMBEDDED_COUNTS}X0        000  1   0,0,0,0,0,0,1        -\n");
    let p = write_table(dir.path(), &dup);
    let o = tetra(&["counts", "--table", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("duplicate row"), "{}", stderr(&o));
}

#[test]
fn substituted_table_changes_verdict_not_exit_2() {
    // The open stratum is self-dual, so this row edit still parses.
    let dir = tempfile::tempdir().unwrap();
    let changed = EMBEDDED_COUNTS.replacen("X0        000  1   0,0,0,0,0,0,1 ", "X0        000  1   0,0,0,0,0,1,1 ", 1);
    let p = write_table(dir.path(), &changed);
    let o = tetra(&["counts", "--table", &p]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stdout(&o).contains("FAIL counts/fiber_sum"));
}

#[test]
fn report_is_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = ["report", "--primes", "2,3", "--types", "X0,B"];
    let oa = Command::new(env!("CARGO_BIN_EXE_tetra"))
        .args(["--threads", "1"])
        .args(args)
        .args(["--out", a.to_str().unwrap()])
        .output()
        .unwrap();
    let ob = Command::new(env!("CARGO_BIN_EXE_tetra"))
        .args(["--threads", "6"])
        .args(args)
        .args(["--out", b.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(oa.status.code(), ob.status.code());
    let (ja, jb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ja, jb);
    let v: serde_json::Value = serde_json::from_slice(&ja).unwrap();
    assert_eq!(v["schema_version"], 1);
    let names: Vec<&str> = v["sections"].as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["data", "strata", "counts", "oracle", "ring"]);
    assert!(v["sections"][1]["seconds"].is_null());
}

#[test]
fn report_without_rule_comparison_passes() {
    let o = tetra(&["report", "--skip-rules", "--primes", "5", "--emit", "text"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).ends_with("overall: pass\n"));
}
