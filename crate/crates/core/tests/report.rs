use std::path::PathBuf;

use tetra_core::counting::CountTable;
use tetra_core::data;
use tetra_core::diagram::enumerate_strata;
use tetra_core::projgeom::OracleKind;
use tetra_core::report::*;

#[test]
fn check_equal_compares_rendered_values() {
    assert!(Check::equal("x", 1424, "1424").passed);
    let c = Check::equal("x", 1424, 1880);
    assert!(!c.passed);
    assert_eq!((c.expected.as_str(), c.actual.as_str()), ("1424", "1880"));
}

#[test]
fn strata_section_isolates_rule_disagreement() {
    let without = strata_section(false);
    assert!(without.passed, "{:?}", without.checks);
    let with = strata_section(true);
    let failing: Vec<&str> = with.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert_eq!(failing, ["rule_enumeration_equals_cliques"]);
    assert_eq!(with.details["rule_comparison"]["extra"], 456);
    assert_eq!(with.details["summary"], "1424 strata, 23 divisors, max codim 6");
}

#[test]
fn counts_section_passes_on_embedded_table() {
    let s = counts_section(&CountTable::embedded());
    assert!(s.passed, "{:?}", s.checks);
    assert_eq!(s.details["euler_characteristic"], "11160");
    assert!(s.details["betti_line"].as_str().unwrap().starts_with("b: 1 0 26 0 188 "));
}

#[test]
fn counts_section_flags_a_changed_row() {
    let text = data::POINT_COUNTS.replacen("0,0,0,0,0,0,1 ", "0,0,0,0,0,2,1 ", 1);
    let table = CountTable::parse(&text).unwrap();
    let s = counts_section(&table);
    let failing: Vec<&str> = s.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    assert!(failing.contains(&"fiber_sum") && failing.contains(&"even_betti"), "{failing:?}");
}

#[test]
fn oracle_section_names_checks_by_type_and_prime() {
    let s = oracle_section(&[2, 3], &[OracleKind::A, OracleKind::Arrangement], &CountTable::embedded());
    let names: Vec<&str> = s.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["A@q=2", "arrangement@q=2", "A@q=3", "arrangement@q=3"]);
    assert!(s.passed);
    assert!(!oracle_section(&[9], &[OracleKind::A], &CountTable::embedded()).passed);
}

#[test]
fn validate_data_reports_path_and_line() {
    let dir = std::env::temp_dir().join(format!("tetra-report-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p: PathBuf = dir.join("divisors.txt");
    std::fs::write(&p, data::DIVISORS.replacen("C1", "Q9", 1)).unwrap();
    let err = validate_data(&DataPaths { divisors: Some(p.clone()), ..DataPaths::default() }).unwrap_err();
    let msg = err.to_string();
    assert!(msg.starts_with(&p.display().to_string()) && msg.contains("unknown divisor `Q9`"), "{msg}");
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(validate_data(&DataPaths::default()).unwrap().checks.len(), 3);
}

#[test]
fn csv_rows_cover_every_stratum_and_row() {
    let records = enumerate_strata().unwrap();
    let rows = strata_csv_rows(&records);
    assert_eq!(rows.len(), 1424);
    assert_eq!(rows[0].clique, "");
    assert_eq!(count_csv_rows(&CountTable::embedded()).unwrap().len(), 160);
    assert_eq!(type_multiplicities(&records).len(), 160);
}

#[test]
fn report_json_is_stable_and_ordered() {
    let sections = vec![
        counts_section(&CountTable::embedded()),
        oracle_section(&[2], &[OracleKind::X0], &CountTable::embedded()),
    ];
    let a = VerificationReport::new(sections.clone()).to_json();
    let b = VerificationReport::new(sections).to_json();
    assert_eq!(a, b);
    assert!(a.find("\"schema_version\"").unwrap() < a.find("\"sections\"").unwrap());
    assert!(!a.contains("\"seconds\""));
}
