//! Machine-readable verification report assembled from every module.
//!
//! Sections and checks appear in a fixed order and maps serialize with
//! sorted keys, so identical inputs give byte-identical JSON. Timings are
//! only included on request.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{run_ring_checks, RingOptions};
use crate::counting::{
    expected_fiber_sum, fiber_sum, total_poincare, verify_table, zeta_exponents, CountTable,
};
use crate::data::{self, DataError};
use crate::diagram::divisor::parse_divisor_table;
use crate::diagram::types::parse_type_table;
use crate::diagram::{
    check_poset, compare_with_strata, enumerate_strata, exhaustive_rule_enumeration, orbit_sizes,
    StratumRecord,
};
use crate::projgeom::{run_oracle, OracleKind};

pub const SCHEMA_VERSION: u32 = 1;

pub const EXPECTED_STRATA: usize = 1424;
pub const EXPECTED_SPLIT_CLIQUES: usize = 178;
pub const EXPECTED_TYPES: usize = 160;
pub const EXPECTED_CODIM3_SPLIT_CLIQUES: usize = 78;
pub const EXPECTED_DIVISORS: usize = 23;
pub const EXPECTED_MAX_CODIM: usize = 6;
pub const EXPECTED_BETTI: [i64; 13] = [1, 26, 188, 652, 1394, 2112, 2414, 2112, 1394, 652, 188, 26, 1];
pub const EXPECTED_EULER: i64 = 11160;

/// One exact comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub actual: String,
}

impl Check {
    /// Passes when both sides render identically.
    pub fn equal(name: &str, expected: impl Display, actual: impl Display) -> Check {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Check { name: name.into(), passed: expected == actual, expected, actual }
    }

    pub fn with(name: &str, passed: bool, expected: impl Display, actual: impl Display) -> Check {
        Check { name: name.into(), passed, expected: expected.to_string(), actual: actual.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Section {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl Section {
    pub fn new(name: &str, checks: Vec<Check>, details: Value) -> Section {
        Section { name: name.into(), passed: checks.iter().all(|c| c.passed), checks, details, seconds: None }
    }

    pub fn failures(&self) -> impl Iterator<Item = String> + '_ {
        self.checks.iter().filter(|c| !c.passed).map(move |c| {
            format!("{}/{}: expected {}, got {}", self.name, c.name, c.expected, c.actual)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub passed: bool,
    pub failures: Vec<String>,
    pub sections: Vec<Section>,
}

impl VerificationReport {
    pub fn new(sections: Vec<Section>) -> VerificationReport {
        let failures: Vec<String> = sections.iter().flat_map(|s| s.failures()).collect();
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            passed: failures.is_empty(),
            failures,
            sections,
        }
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn joined<T: Display>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn timed(timings: bool, f: impl FnOnce() -> Section) -> Section {
    let t = Instant::now();
    let mut s = f();
    if timings {
        s.seconds = Some(t.elapsed().as_secs_f64());
    }
    s
}

/// Optional replacement data files; `None` means the embedded copy.
#[derive(Clone, Debug, Default)]
pub struct DataPaths {
    pub divisors: Option<PathBuf>,
    pub counts: Option<PathBuf>,
    pub types: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum DataFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Invalid { path: String, source: DataError },
}

fn read_or(path: &Option<PathBuf>, embedded: &'static str) -> Result<(String, String), DataFileError> {
    match path {
        Some(p) => std::fs::read_to_string(p)
            .map(|t| (p.display().to_string(), t))
            .map_err(|source| DataFileError::Io { path: p.display().to_string(), source }),
        None => Ok(("<embedded>".into(), embedded.into())),
    }
}

/// Loaded and validated reference data.
#[derive(Clone, Debug)]
pub struct ValidatedData {
    pub table: CountTable,
    pub checks: Vec<Check>,
}

/// Parses every data file and runs its schema and consistency checks.
pub fn validate_data(paths: &DataPaths) -> Result<ValidatedData, DataFileError> {
    let mut checks = Vec::new();
    let (src, text) = read_or(&paths.divisors, data::DIVISORS)?;
    parse_divisor_table(&text).map_err(|source| DataFileError::Invalid { path: src.clone(), source })?;
    checks.push(Check::equal("divisor_table", "valid", "valid"));
    let (src, text) = read_or(&paths.types, data::STRATUM_TYPES)?;
    parse_type_table(&text).map_err(|source| DataFileError::Invalid { path: src.clone(), source })?;
    checks.push(Check::equal("type_table", "valid", "valid"));
    let (src, text) = read_or(&paths.counts, data::POINT_COUNTS)?;
    let table = CountTable::parse(&text).map_err(|source| DataFileError::Invalid { path: src, source })?;
    checks.push(Check::equal("count_table", "valid", "valid"));
    Ok(ValidatedData { table, checks })
}

pub fn data_section(v: &ValidatedData) -> Section {
    Section::new("data", v.checks.clone(), json!({ "count_rows": v.table.rows.len() }))
}

/// Human summary of the stratification, e.g. "1424 strata, 23 divisors, max codim 6".
pub fn strata_summary(records: &[StratumRecord]) -> String {
    let divisors = records.iter().filter(|r| r.codim == 1).count();
    let max = records.iter().map(|r| r.codim).max().unwrap_or(0);
    format!("{} strata, {divisors} divisors, max codim {max}", records.len())
}

pub fn strata_section(include_rules: bool) -> Section {
    let records = match enumerate_strata() {
        Ok(r) => r,
        Err(e) => {
            return Section::new("strata", vec![Check::with("enumeration", false, "ok", e)], Value::Null)
        }
    };
    let mut checks = vec![Check::equal("enumeration", "ok", "ok")];
    checks.push(Check::equal("strata_total", EXPECTED_STRATA, records.len()));
    let split: Vec<&StratumRecord> = records.iter().filter(|r| r.shift().0 == 0).collect();
    checks.push(Check::equal("split_cliques", EXPECTED_SPLIT_CLIQUES, split.len()));
    let mut types: Vec<_> = records.iter().map(|r| r.type_name).collect();
    types.sort();
    types.dedup();
    checks.push(Check::equal("types", EXPECTED_TYPES, types.len()));
    let codim3 = split.iter().filter(|r| r.codim == 3).count();
    checks.push(Check::equal("codim3_split_cliques", EXPECTED_CODIM3_SPLIT_CLIQUES, codim3));
    let divisors = records.iter().filter(|r| r.codim == 1).count();
    checks.push(Check::equal("divisors", EXPECTED_DIVISORS, divisors));
    let max = records.iter().map(|r| r.codim).max().unwrap_or(0);
    checks.push(Check::equal("max_codim", EXPECTED_MAX_CODIM, max));
    let poset = check_poset(&records);
    checks.push(Check::equal("codim_equals_divisors_above", 0, poset.codim_mismatches.len()));
    checks.push(Check::equal("downsets_are_supercliques", 0, poset.downset_mismatches));

    let mut by_codim = vec![0usize; max + 1];
    for r in &records {
        by_codim[r.codim] += 1;
    }
    let mut details = json!({
        "summary": strata_summary(&records),
        "strata_by_codim": by_codim,
        "orbits": orbit_sizes(&records).len(),
    });
    if include_rules {
        let cmp = compare_with_strata(&exhaustive_rule_enumeration());
        checks.push(Check::with(
            "rule_enumeration_equals_cliques",
            cmp.equal(),
            format!("{} diagrams, 0 missing, 0 extra", cmp.clique_count),
            format!("{} diagrams, {} missing, {} extra", cmp.rule_count, cmp.missing.len(), cmp.extra),
        ));
        details["rule_comparison"] = serde_json::to_value(&cmp).expect("serializes");
    }
    Section::new("strata", checks, details)
}

pub fn counts_section(table: &CountTable) -> Section {
    let mut checks = Vec::new();
    let sum = fiber_sum(table);
    checks.push(Check::equal("fiber_sum", expected_fiber_sum(), &sum));
    let betti = total_poincare(table);
    let even = betti.even_i64();
    checks.push(Check::equal("even_betti", joined(EXPECTED_BETTI), joined(&even)));
    checks.push(Check::equal("euler_characteristic", EXPECTED_EULER, betti.euler_characteristic()));
    checks.push(Check::equal("palindromic", true, betti.is_palindromic()));
    let zeta = zeta_exponents(table);
    checks.push(Check::equal("zeta_exponents", joined(&even), joined(zeta.iter().map(|(_, a)| a))));
    let table_report = match enumerate_strata() {
        Ok(records) => Some(verify_table(table, &records)),
        Err(_) => None,
    };
    let failures = table_report.as_ref().map(|r| r.failures.clone());
    checks.push(Check::with(
        "table_rows",
        failures.as_ref().is_some_and(|f| f.is_empty()),
        "0 failures",
        match &failures {
            Some(f) => format!("{} failures", f.len()),
            None => "strata unavailable".into(),
        },
    ));
    let details = json!({
        "betti_line": betti_line(table),
        "even_betti": even,
        "euler_characteristic": betti.euler_characteristic().to_string(),
        "fiber_sum": sum.to_string(),
        "zeta_exponents": zeta.iter().map(|(i, a)| json!([i, a.to_string()])).collect::<Vec<_>>(),
        "row_failures": failures.unwrap_or_default(),
    });
    Section::new("counts", checks, details)
}

/// "b: 1 0 26 0 188 ..." over all topological degrees.
pub fn betti_line(table: &CountTable) -> String {
    format!("b: {}", joined(total_poincare(table).full()))
}

pub fn oracle_section(primes: &[u32], kinds: &[OracleKind], table: &CountTable) -> Section {
    let results = match run_oracle(primes, kinds, table) {
        Ok(r) => r,
        Err(e) => return Section::new("oracle", vec![Check::with("primes", false, "primes", e)], Value::Null),
    };
    let checks = results
        .iter()
        .map(|r| {
            Check::with(
                &format!("{}@q={}", r.kind, r.q),
                r.matches,
                &r.table_count,
                format!("{} (alternate flag {})", r.oracle_count, r.alternate_flag_count),
            )
        })
        .collect();
    Section::new("oracle", checks, json!({ "results": results }))
}

pub fn ring_section(opts: &RingOptions) -> Section {
    let (report, _) = match run_ring_checks(opts, &EXPECTED_BETTI) {
        Ok(r) => r,
        Err(e) => return Section::new("ring", vec![Check::with("computation", false, "ok", e)], Value::Null),
    };
    let mut checks = vec![Check::with(
        "hilbert_function",
        report.hilbert_matches,
        format!("{} | 0", joined(EXPECTED_BETTI)),
        format!("{} | {}", joined(&report.hilbert.dims), report.hilbert.next),
    )];
    if let Some(ranks) = &report.pairing_ranks {
        checks.push(Check::equal("pairing_ranks", joined(&report.hilbert.dims), joined(ranks)));
    }
    if let Some(w) = &report.witness {
        checks.push(Check::equal("witness_nonzero", true, w.nonzero));
        checks.push(Check::equal("witness_in_socle", true, w.annihilated_by_generators));
        checks.push(Check::equal("witness_transposed_nonzero", true, w.transposed_nonzero));
    }
    if let Some(s) = &report.s4 {
        checks.push(Check::equal("s4_violations", 0, s.violations.len()));
    }
    if let Some(c) = &report.chain {
        checks.push(Check::equal("single_chain_equivalent", true, c.equal()));
    }
    let details = serde_json::to_value(&report).expect("serializes");
    Section::new("ring", checks, details)
}

/// What the full pipeline runs.
#[derive(Clone, Debug)]
pub struct ReportOptions {
    pub data: DataPaths,
    pub primes: Vec<u32>,
    pub kinds: Vec<OracleKind>,
    pub ring: RingOptions,
    pub include_rules: bool,
    pub timings: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            data: DataPaths::default(),
            primes: vec![2, 3, 5, 7],
            kinds: OracleKind::ALL.to_vec(),
            ring: RingOptions::default(),
            include_rules: true,
            timings: false,
        }
    }
}

/// Runs every section. Independent sections run concurrently; assembly is ordered.
pub fn full_report(opts: &ReportOptions) -> Result<VerificationReport, DataFileError> {
    let data = validate_data(&opts.data)?;
    let t = opts.timings;
    let ((strata, counts), (oracle, ring)) = rayon::join(
        || {
            (
                timed(t, || strata_section(opts.include_rules)),
                timed(t, || counts_section(&data.table)),
            )
        },
        || {
            rayon::join(
                || timed(t, || oracle_section(&opts.primes, &opts.kinds, &data.table)),
                || timed(t, || ring_section(&opts.ring)),
            )
        },
    );
    Ok(VerificationReport::new(vec![data_section(&data), strata, counts, oracle, ring]))
}

/// Flat CSV rows for strata.
#[derive(Clone, Debug, Serialize)]
pub struct StratumCsvRow {
    pub index: usize,
    pub clique: String,
    pub split: String,
    pub shift: String,
    pub codim: usize,
    pub orbit_id: usize,
}

pub fn strata_csv_rows(records: &[StratumRecord]) -> Vec<StratumCsvRow> {
    records
        .iter()
        .enumerate()
        .map(|(index, r)| StratumCsvRow {
            index,
            clique: crate::diagram::clique_names(r.clique).join(" "),
            split: r.type_name.split.to_string(),
            shift: r.type_name.shift.to_string(),
            codim: r.codim,
            orbit_id: r.orbit_id,
        })
        .collect()
}

/// Flat CSV rows for the per-row table checks.
#[derive(Clone, Debug, Serialize)]
pub struct CountCsvRow {
    pub split: String,
    pub shift: String,
    pub multiplicity: usize,
    pub count: String,
    pub degree_ok: bool,
    pub dual_ok: bool,
    pub multiplicity_ok: bool,
    pub fibers_ok: bool,
}

pub fn count_csv_rows(table: &CountTable) -> Result<Vec<CountCsvRow>, crate::diagram::StrataError> {
    let records = enumerate_strata()?;
    Ok(verify_table(table, &records)
        .rows
        .into_iter()
        .map(|r| CountCsvRow {
            split: r.ty.split.to_string(),
            shift: r.ty.shift.to_string(),
            multiplicity: r.multiplicity,
            count: r.count,
            degree_ok: r.degree_ok,
            dual_ok: r.dual_ok,
            multiplicity_ok: r.multiplicity_ok,
            fibers_ok: r.fibers_ok,
        })
        .collect())
}

/// Number of strata per type, keyed by display name.
pub fn type_multiplicities(records: &[StratumRecord]) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for r in records {
        *m.entry(r.type_name.to_string()).or_default() += 1;
    }
    m
}

/// Reads a count table from disk with full validation.
pub fn load_table(path: &Path) -> Result<CountTable, DataFileError> {
    validate_data(&DataPaths { counts: Some(path.to_path_buf()), ..DataPaths::default() }).map(|v| v.table)
}
