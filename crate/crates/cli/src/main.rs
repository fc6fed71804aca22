//! `adele-lab`: batch verifiers for congruences over finite prime windows.
//!
//! Data goes to stdout (or `--out`); progress and timing go to stderr.
//! Exit status: 0 clean, 1 when a checked congruence fails, 2 on usage or
//! precondition errors.

/// `eprintln!` that ignores a closed stderr.
macro_rules! note {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stderr(), $($arg)*);
    }};
}

mod element;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use adele_lab::adele::{compare_on_window, EquivalenceVerdict};
use adele_lab::bernoulli::{glaisher_report, wolstenholme_prime_scan, wolstenholme_report};
use adele_lab::finite_log::{finite_log_report, sqrt2_report, wieferich_scan};
use adele_lab::frobenius::{
    ap_zero_census, trace_report, CurveParams, CENSUS_DEFAULT_LIMIT, CENSUS_SOFT_LIMIT,
};
use adele_lab::qfib::{case_statistics, fibonacci_mod, qfib_matrix, qfib_mod, verify_af};
use adele_lab::report::serialize_or_inf;
use adele_lab::{occurrence_census, Error, PrimeWindow, Residue};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::element::{parse_element, ELEMENT_HELP};
use crate::output::{Format, Output};

#[derive(Parser, Debug)]
#[command(name = "adele-lab", version, about = "Congruence verifiers over prime windows")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Worker threads; output does not depend on it.
    #[arg(long, env = "ADELE_LAB_JOBS", default_value_t = 1, global = true,
          value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Write data here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct WindowArgs {
    #[arg(long, default_value_t = 2)]
    min_p: u64,
    #[arg(long)]
    max_p: u64,
}

impl WindowArgs {
    fn window(self) -> adele_lab::Result<PrimeWindow> {
        PrimeWindow::new(self.min_p, self.max_p)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check F_p(q) against the predicted Fibonacci residue.
    VerifyAf {
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// F_n(q) mod p by recurrence and by matrix product (n defaults to p).
    Qfib {
        #[arg(long, allow_negative_numbers = true)]
        q: i64,
        #[arg(long)]
        n: Option<u64>,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Fibonacci numbers F_m mod p (m defaults to p).
    Fib {
        #[arg(long)]
        m: Option<u64>,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Count small integers occurring as components of an element.
    #[command(after_help = ELEMENT_HELP)]
    Census {
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long)]
        bound: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Compare two elements prime by prime.
    #[command(after_help = ELEMENT_HELP)]
    Equiv {
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// B_{p-m} mod p by two independent routes.
    Bernoulli {
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// H_{p-1} mod p^2 and its p^3 refinement.
    Wolstenholme {
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Primes with B_{p-3} = 0 mod p.
    ScanWolstenholmePrimes {
        #[arg(long)]
        limit: u64,
    },
    /// Components B_{p-k}/k mod p of the finite zeta value of weight k.
    Fmzv {
        #[arg(long)]
        k: u64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Finite logarithm of 2 against the Fermat quotient.
    FiniteLog {
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Primes with 2^(p-1) = 1 mod p^2.
    ScanWieferich {
        #[arg(long)]
        limit: u64,
    },
    /// Truncated sqrt(1+x) series at x = 1 next to 2 (2/p).
    Sqrt2Demo {
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Frobenius traces of y^2 = x^3 + a x + b.
    Ap {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Good primes with a_p = 0.
    ScanApZero {
        #[arg(long, allow_negative_numbers = true)]
        a: i64,
        #[arg(long, allow_negative_numbers = true)]
        b: i64,
        #[arg(long, default_value_t = CENSUS_DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Split the primes selected in [X, 2X] into the three proof cases.
    CaseStats {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        r: u64,
    },
}

/// Failure that maps onto an exit status.
enum Failure {
    Congruence(String),
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_congruence_failure() {
            Failure::Congruence(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

#[derive(Serialize)]
struct QfibRow {
    p: u64,
    n: u64,
    q: i64,
    recurrence: Residue,
    #[serde(serialize_with = "serialize_or_inf")]
    matrix: Option<Residue>,
    status: adele_lab::Status,
}

#[derive(Serialize)]
struct FibRow {
    p: u64,
    m: u64,
    value: Residue,
}

#[derive(Serialize)]
struct ValueRow {
    p: u64,
    #[serde(serialize_with = "serialize_or_inf")]
    value: Option<Residue>,
}

#[derive(Serialize)]
struct CensusRow {
    value: i64,
    count: u64,
    fraction: f64,
}

#[derive(Serialize)]
struct EquivJson<'a> {
    lhs: &'a str,
    rhs: &'a str,
    #[serde(flatten)]
    verdict: &'a EquivalenceVerdict,
    records: &'a [adele_lab::adele::ComparisonRecord],
}

fn params<'a>(pairs: &[(&'a str, String)]) -> std::collections::BTreeMap<&'a str, String> {
    pairs.iter().cloned().collect()
}

/// Runs the command; `Ok(true)` means at least one checked congruence failed.
fn run(cli: &Cli, out: &mut Output) -> Result<bool, Failure> {
    let jobs = usize::from(cli.jobs);
    match &cli.command {
        Command::VerifyAf { q, window } => {
            let report = verify_af(*q, window.window()?, jobs)?;
            out.report(&report)?;
            Ok(report.has_failures())
        }
        Command::Qfib { q, n, window } => {
            let w = window.window()?;
            let rows = adele_lab::shard::map_primes(w, jobs, |p| {
                let n = n.unwrap_or(p);
                let recurrence = qfib_mod(n, *q, p).expect("prime modulus");
                let matrix = (n > 0).then(|| qfib_matrix(n, *q, p).expect("prime modulus"));
                let status = match matrix {
                    Some(m) => adele_lab::Status::from_agreement(m == recurrence),
                    None => adele_lab::Status::Undefined,
                };
                QfibRow { p, n, q: *q, recurrence, matrix, status }
            });
            let failed = rows.iter().any(|r| r.status == adele_lab::Status::Mismatch);
            let mut ps = vec![("q", q.to_string()), ("min_p", w.min_p().to_string()), ("max_p", w.max_p().to_string())];
            if let Some(n) = n {
                ps.push(("n", n.to_string()));
            }
            out.values("qfib", params(&ps), &rows)?;
            Ok(failed)
        }
        Command::Fib { m, window } => {
            let w = window.window()?;
            let rows = adele_lab::shard::map_primes(w, jobs, |p| {
                let m = m.unwrap_or(p);
                FibRow { p, m, value: fibonacci_mod(m, p).expect("prime modulus") }
            });
            let mut ps = vec![("min_p", w.min_p().to_string()), ("max_p", w.max_p().to_string())];
            if let Some(m) = m {
                ps.push(("m", m.to_string()));
            }
            out.values("fib", params(&ps), &rows)?;
            Ok(false)
        }
        Command::Census { element, bound, window } => {
            let x = parse_element(element).map_err(Failure::Usage)?;
            let census = occurrence_census(&x, window.window()?, *bound, jobs)?;
            let rows: Vec<CensusRow> = census
                .counts
                .iter()
                .map(|(&value, &count)| CensusRow { value, count, fraction: census.fraction(value) })
                .collect();
            out.either(&rows, &census)?;
            note!(
                "census {element}: {} primes considered, {} undefined, {} excluded (p <= {})",
                census.considered,
                census.undefined_primes.len(),
                census.excluded_small_primes.len(),
                2 * bound
            );
            Ok(false)
        }
        Command::Equiv { lhs, rhs, window } => {
            let (x, y) = (
                parse_element(lhs).map_err(Failure::Usage)?,
                parse_element(rhs).map_err(Failure::Usage)?,
            );
            let w = window.window()?;
            let records = compare_on_window(&x, &y, w, jobs);
            let verdict = EquivalenceVerdict::from_records(w, &records);
            let json = EquivJson { lhs, rhs, verdict: &verdict, records: &records };
            out.either(&records, &json)?;
            note!(
                "equiv: {} mismatches, {} undefined primes",
                verdict.mismatches.len(),
                verdict.undefined_primes.len()
            );
            Ok(!verdict.is_equivalent())
        }
        Command::Bernoulli { m, window } => {
            let report = glaisher_report(*m, window.window()?, jobs)?;
            out.report(&report)?;
            Ok(report.has_failures())
        }
        Command::Wolstenholme { window } => {
            let report = wolstenholme_report(window.window()?, jobs)?;
            out.report(&report)?;
            Ok(report.has_failures())
        }
        Command::ScanWolstenholmePrimes { limit } => {
            out.primes(&wolstenholme_prime_scan(*limit, jobs)?)?;
            Ok(false)
        }
        Command::Fmzv { k, window } => {
            let x = adele_lab::bernoulli::fmzv_element(*k)?;
            let w = window.window()?;
            let rows: Vec<ValueRow> = x
                .values(w, jobs)
                .into_iter()
                .map(|(p, value)| ValueRow { p, value })
                .collect();
            let ps = [("k", k.to_string()), ("min_p", w.min_p().to_string()), ("max_p", w.max_p().to_string())];
            out.values("fmzv", params(&ps), &rows)?;
            Ok(false)
        }
        Command::FiniteLog { window } => {
            let report = finite_log_report(window.window()?, jobs)?;
            out.report(&report)?;
            Ok(report.has_failures())
        }
        Command::ScanWieferich { limit } => {
            out.primes(&wieferich_scan(*limit, jobs)?)?;
            Ok(false)
        }
        Command::Sqrt2Demo { window } => {
            let report = sqrt2_report(window.window()?, jobs);
            out.report(&report)?;
            Ok(report.has_failures())
        }
        Command::Ap { a, b, window } => {
            let report = trace_report(CurveParams::new(*a, *b)?, window.window()?, jobs);
            out.report(&report)?;
            Ok(report.has_failures())
        }
        Command::ScanApZero { a, b, limit } => {
            if *limit > CENSUS_SOFT_LIMIT {
                note!("warning: traces cost O(p) each; limit {limit} will be slow");
            }
            out.primes(&ap_zero_census(CurveParams::new(*a, *b)?, *limit, jobs)?)?;
            Ok(false)
        }
        Command::CaseStats { q, x, r } => {
            let stats = case_statistics(*q, *x, *r, jobs)?;
            out.either(&stats.triples, &stats)?;
            note!(
                "case-stats: {} selected = {} + {} + {} (threshold {:.3}, delta {:.6})",
                stats.selected, stats.case1, stats.case2, stats.case3, stats.threshold, stats.delta
            );
            Ok(false)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let started = Instant::now();
    let mut out = Output::new(cli.format);
    let result = run(&cli, &mut out).and_then(|failed| {
        out.finish(cli.out.as_deref())?;
        Ok(failed)
    });
    note!("elapsed {:.3}s", started.elapsed().as_secs_f64());
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            note!("error: congruence check failed");
            ExitCode::from(1)
        }
        Err(Failure::Congruence(msg)) => {
            note!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) | Err(Failure::Io(msg)) => {
            note!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
