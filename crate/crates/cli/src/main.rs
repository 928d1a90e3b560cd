//! Command-line runner for the identity registry.
//!
//! Orders are integers in half-units: `--order 60` means truncation at `q^30`.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::process::ExitCode;

use baileykit::bailey::{parse_pair, verify_pair};
use baileykit::partitions::theorem_1_1_table;
use baileykit::{check_identity, list_identities, run_suite, Error, HalfExponent, Status, SuiteSummary, VerificationReport};
use clap::{Parser, Subcommand, ValueEnum};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Parser)]
#[command(name = "baileykit", version, about = "Exact verification of q-series identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Print the identity registry.
    List,
    /// Check a single identity.
    Run {
        #[arg(long)]
        id: String,
        /// Truncation order in half-units.
        #[arg(long)]
        order: Option<i64>,
        /// Parameter binding `name=value`; value is a monomial or `symbolic`.
        #[arg(long = "param", value_parser = parse_binding)]
        params: Vec<(String, String)>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run every registered check.
    Suite {
        /// Override the default orders (half-units).
        #[arg(long)]
        order: Option<i64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// CSV table of ω(n), the Hecke coefficient and I(24n+2).
    Partitions {
        #[arg(long = "max-n")]
        max_n: i64,
    },
    /// Check the Bailey pair relation for a named pair.
    Pair {
        #[arg(long)]
        name: String,
        #[arg(long = "n-max")]
        n_max: usize,
        #[arg(long)]
        order: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

fn parse_binding(s: &str) -> Result<(String, String), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

fn usage(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(EXIT_USAGE)
}

fn positive_order(order: i64) -> Result<HalfExponent, ExitCode> {
    if order < 1 {
        eprintln!("error: order must be a positive number of half-units");
        return Err(ExitCode::from(EXIT_USAGE));
    }
    Ok(HalfExponent(order))
}

fn emit(reports: &[VerificationReport], format: Format) -> io::Result<()> {
    let mut out = io::stdout().lock();
    for r in reports {
        match format {
            Format::Json => writeln!(out, "{}", serde_json::to_string(r).map_err(io::Error::other)?)?,
            Format::Text => writeln!(out, "{r}")?,
        }
    }
    out.flush()
}

fn finish(reports: &[VerificationReport], format: Format) -> ExitCode {
    if let Err(e) = emit(reports, format) {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_INTERNAL);
    }
    let s = SuiteSummary::tally(reports);
    eprintln!(
        "{} passed, {} failed, {} errors; diagnostics: {} passed, {} failed",
        s.passed, s.failed, s.errors, s.diagnostics_passed, s.diagnostics_failed
    );
    if s.errors > 0 {
        ExitCode::from(EXIT_INTERNAL)
    } else if s.failed > 0 {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn list() -> ExitCode {
    for c in list_identities() {
        let params: Vec<String> = c.params.iter().map(|p| p.to_string()).collect();
        let mode = if c.is_diagnostic() { " [diagnostic]" } else { "" };
        let order = if c.exact { "exact".to_string() } else { format!("order {}", c.default_order.0) };
        println!("{}{mode}  ({order})  {}", c.id, c.summary);
        if !params.is_empty() {
            println!("    {}", params.join("; "));
        }
    }
    ExitCode::SUCCESS
}

fn partitions(max_n: i64) -> ExitCode {
    if max_n < 0 {
        eprintln!("error: --max-n must be non-negative");
        return ExitCode::from(EXIT_USAGE);
    }
    let rows = match theorem_1_1_table(max_n) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    };
    println!("n,omega,hecke_coeff,I,status");
    let mut bad = 0;
    for r in &rows {
        let status = if r.agrees() { Status::Pass } else { Status::Fail };
        if status != Status::Pass {
            bad += 1;
        }
        println!("{},{},{},{},{}", r.n, r.omega, r.hecke, r.class_excess, status);
    }
    eprintln!("{} rows, {} disagreements", rows.len(), bad);
    if bad > 0 {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match cli.command {
        Command::List => list(),
        Command::Run { id, order, params, format } => {
            let order = match order.map(positive_order).transpose() {
                Ok(o) => o,
                Err(code) => return code,
            };
            let params: BTreeMap<String, String> = params.into_iter().collect();
            match check_identity(&id, &params, order) {
                Ok(r) => finish(&[r], format),
                Err(e) => usage(&e),
            }
        }
        Command::Suite { order, format } => {
            let order = match order.map(positive_order).transpose() {
                Ok(o) => o,
                Err(code) => return code,
            };
            finish(&run_suite(order), format)
        }
        Command::Partitions { max_n } => partitions(max_n),
        Command::Pair { name, n_max, order, format } => {
            let order = match positive_order(order) {
                Ok(o) => o,
                Err(code) => return code,
            };
            match parse_pair(&name) {
                Ok(p) => finish(&[verify_pair(&p, n_max, order)], format),
                Err(e) => usage(&e),
            }
        }
    }
}
