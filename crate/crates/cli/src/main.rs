//! `tetra`: command-line front end for the verification engine.
//!
//! Exit status: 0 when every check passes, 1 when a verification fails,
//! 2 on usage or data errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use tetra_core::algebra::{Budget, GbOptions, RingCheck, RingField, RingOptions};
use tetra_core::counting::CountTable;
use tetra_core::diagram::enumerate_strata;
use tetra_core::projgeom::{run_oracle, OracleKind};
use tetra_core::report::{
    self, betti_line, count_csv_rows, counts_section, full_report, oracle_section, ring_section,
    strata_csv_rows, strata_section, strata_summary, validate_data, DataPaths, ReportOptions,
    Section, VerificationReport,
};

#[derive(Parser, Debug)]
#[command(name = "tetra", version, about = "Exact verification of the stratification, point counts and cohomology ring of compactified tetrahedra in P3")]
struct Cli {
    /// Worker threads (default: all cores). Output does not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Include wall-clock timings in reports (breaks byte-identical output).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate and verify the strata.
    Strata {
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
        /// Skip the comparison with exhaustive rule enumeration.
        #[arg(long)]
        skip_rules: bool,
    },
    /// Verify the point-count table and derive Betti numbers and zeta exponents.
    Counts {
        /// Replacement count table.
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Brute-force point counts over small prime fields.
    Oracle {
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "X0,A,Astar,B,arrangement")]
        types: Vec<OracleKind>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Gröbner basis checks on the cohomology ring presentation.
    Ring {
        #[arg(long, default_value = "f2")]
        field: RingField,
        #[arg(long, value_delimiter = ',', default_value = "hilbert,pairing,witness,s4,chain")]
        check: Vec<RingCheck>,
        /// Skip the Hilbert function of the base relations alone.
        #[arg(long)]
        no_probe: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long, value_enum, default_value = "text")]
        emit: Emit,
    },
    /// Run the full pipeline and emit the JSON report.
    Report {
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
        primes: Vec<u32>,
        #[arg(long, value_delimiter = ',', default_value = "X0,A,Astar,B,arrangement")]
        types: Vec<OracleKind>,
        #[arg(long, default_value = "f2")]
        field: RingField,
        #[arg(long)]
        skip_rules: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        emit: Emit,
    },
    /// Parse and validate reference data files.
    Validate {
        #[arg(long)]
        divisors: Option<PathBuf>,
        #[arg(long)]
        table: Option<PathBuf>,
        #[arg(long)]
        types: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct BudgetArgs {
    /// Gröbner truncation degree.
    #[arg(long, default_value_t = 13)]
    max_degree: u32,
    #[arg(long)]
    max_seconds: Option<f64>,
    #[arg(long)]
    max_basis: Option<usize>,
}

impl BudgetArgs {
    fn gb(&self, threads: Option<usize>) -> GbOptions {
        GbOptions {
            max_degree: self.max_degree,
            threads,
            budget: Budget { max_seconds: self.max_seconds, max_basis: self.max_basis, max_columns: None },
            ..GbOptions::default()
        }
    }
}

enum Failure {
    Usage(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_table(path: &Option<PathBuf>) -> Result<CountTable, Failure> {
    let paths = DataPaths { counts: path.clone(), ..DataPaths::default() };
    validate_data(&paths).map(|v| v.table).map_err(|e| Failure::Usage(e.to_string()))
}

fn with_seconds(mut s: Section, timings: bool, start: std::time::Instant) -> Section {
    if timings {
        s.seconds = Some(start.elapsed().as_secs_f64());
    }
    s
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let start = std::time::Instant::now();
    match &cli.command {
        Command::Strata { emit, skip_rules } => {
            let section = with_seconds(strata_section(!skip_rules), cli.timings, start);
            match emit {
                Emit::Text => {
                    let records = enumerate_strata().map_err(|e| Failure::Usage(e.to_string()))?;
                    out(&format!("{}\n", strata_summary(&records)));
                    print_checks(&section);
                }
                Emit::Json => print_json(&section),
                Emit::Csv => {
                    let records = enumerate_strata().map_err(|e| Failure::Usage(e.to_string()))?;
                    print_csv(&strata_csv_rows(&records))?;
                }
            }
            Ok(section.passed)
        }
        Command::Counts { table, emit } => {
            let t = load_table(table)?;
            let section = with_seconds(counts_section(&t), cli.timings, start);
            match emit {
                Emit::Text => {
                    out(&format!("{}\n", betti_line(&t)));
                    print_checks(&section);
                }
                Emit::Json => print_json(&section),
                Emit::Csv => print_csv(&count_csv_rows(&t).map_err(|e| Failure::Usage(e.to_string()))?)?,
            }
            Ok(section.passed)
        }
        Command::Oracle { primes, types, table, emit } => {
            let t = load_table(table)?;
            match emit {
                Emit::Text => {
                    let section = oracle_section(primes, types, &t);
                    print_checks(&section);
                    Ok(section.passed)
                }
                Emit::Json | Emit::Csv => {
                    let results = run_oracle(primes, types, &t).map_err(|e| Failure::Usage(e.to_string()))?;
                    if *emit == Emit::Json {
                        print_json(&results);
                    } else {
                        print_csv(&results)?;
                    }
                    Ok(results.iter().all(|r| r.matches))
                }
            }
        }
        Command::Ring { field, check, no_probe, budget, emit } => {
            let opts = RingOptions {
                field: *field,
                checks: check.iter().copied().collect(),
                gb: budget.gb(cli.threads),
                probe_base: !no_probe,
            };
            let section = with_seconds(ring_section(&opts), cli.timings, start);
            match emit {
                Emit::Text => print_checks(&section),
                Emit::Json => print_json(&section),
                Emit::Csv => return Err(Failure::Usage("ring has no CSV form".into())),
            }
            Ok(section.passed)
        }
        Command::Report { table, primes, types, field, skip_rules, budget, out: out_path, emit } => {
            let opts = ReportOptions {
                data: DataPaths { counts: table.clone(), ..DataPaths::default() },
                primes: primes.clone(),
                kinds: types.clone(),
                ring: RingOptions { field: *field, gb: budget.gb(cli.threads), ..RingOptions::default() },
                include_rules: !skip_rules,
                timings: cli.timings,
            };
            let report = full_report(&opts).map_err(|e| Failure::Usage(e.to_string()))?;
            let text = match emit {
                Emit::Json => report.to_json(),
                Emit::Text => report_text(&report),
                Emit::Csv => return Err(Failure::Usage("report has no CSV form".into())),
            };
            match out_path {
                Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
                None => out(&text),
            }
            for f in &report.failures {
                eprintln!("FAIL {f}");
            }
            Ok(report.passed)
        }
        Command::Validate { divisors, table, types } => {
            let paths = DataPaths { divisors: divisors.clone(), counts: table.clone(), types: types.clone() };
            let v = validate_data(&paths).map_err(|e| Failure::Usage(e.to_string()))?;
            print_checks(&report::data_section(&v));
            Ok(true)
        }
    }
}

fn check_lines(section: &Section) -> String {
    let mut s = String::new();
    for c in &section.checks {
        if c.passed {
            s += &format!("ok   {}/{}: {}\n", section.name, c.name, c.actual);
        } else {
            s += &format!("FAIL {}/{}: expected {}, got {}\n", section.name, c.name, c.expected, c.actual);
        }
    }
    if let Some(t) = section.seconds {
        s += &format!("time {}: {t:.3}s\n", section.name);
    }
    s
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn out(text: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn print_checks(section: &Section) {
    out(&check_lines(section));
}

fn report_text(report: &VerificationReport) -> String {
    let mut s = String::new();
    for section in &report.sections {
        s += &check_lines(section);
    }
    s += if report.passed { "overall: pass\n" } else { "overall: FAIL\n" };
    s
}

fn print_json<T: Serialize + ?Sized>(v: &T) {
    out(&format!("{}\n", serde_json::to_string_pretty(v).expect("serializes")));
}

fn print_csv<T: Serialize>(rows: &[T]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    out(&String::from_utf8(bytes).expect("csv is utf-8"));
    Ok(())
}
