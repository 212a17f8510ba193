//! Command-line front end for `qsverify`.
//!
//! Exit codes: 0 on success, 1 on a mathematical failure (an expected-pass
//! identity fails, a residual exceeds its tolerance, a congruence has
//! violations, no basis combination exists), 2 on a usage error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;

use qsverify::analytic::formulas::{check_evaluation, check_grid, evaluation_formulas, ResidualReport, DEFAULT_PRECISION, DEFAULT_TOLERANCE, GRID};
use qsverify::analytic::{make_point, EllipticPoint};
use qsverify::arith::{sieve_with_capacity, DivisorFamily, DivisorKind};
use qsverify::generators::{build_with, rep_series, BuildOptions, SeriesName};
use qsverify::identity::convolutions::{check_all, convolution_theorems};
use qsverify::identity::verify::rational_string;
use qsverify::identity::{builtin_registry, combination_expr, express_in_basis, parse, parse_expr, run_suite, IdentityRecord, SuiteEntry};
use qsverify::partitions::{congruence_scan, CongruenceClaim, Violation};
use qsverify::representations::{rep_bruteforce, rep_formula, RepKind};
use qsverify::Error;

pub const SIEVE_CEILING: usize = 100_000;
pub const SERIES_CEILING: usize = 5_000;
pub const DEFAULT_ORDER: usize = 200;

#[derive(Debug, Parser)]
#[command(name = "qsverify", version, about = "Exact q-series identity verification")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Tsv, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divisor-sum table for n = 1..=max.
    Sieve {
        #[arg(long, value_parser = parse_family)]
        family: DivisorFamily,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        max: usize,
    },
    /// Coefficients of a named series for n = 0..=order.
    Series {
        #[arg(long, value_parser = parse_name)]
        name: SeriesName,
        #[arg(long)]
        order: usize,
    },
    /// Verify the built-in registry or an identity file; fails on any
    /// expected-pass identity that does not hold.
    Verify {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Verify every registered identity and convolution theorem and report
    /// the status of each; always exits 0.
    Audit {
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
    /// Representation counts for n = 0..=max.
    Reps {
        #[arg(long, value_parser = parse_rep_kind)]
        kind: RepKind,
        #[arg(long)]
        s: u32,
        #[arg(long)]
        max: usize,
        #[arg(long, value_enum, default_value_t = RepMethod::Formula)]
        method: RepMethod,
    },
    /// Scan the mod-3 congruences for violations.
    Congruences {
        #[arg(long, value_enum, default_value_t = Which::Both)]
        which: Which,
        #[arg(long)]
        max: usize,
    },
    /// Residuals of the closed-form evaluations at one x or on the grid.
    Elliptic(EllipticArgs),
    /// Solve target = Σ c_i basis_i over the rationals.
    Express {
        #[arg(long)]
        target: String,
        /// Comma-separated expressions; may be repeated.
        #[arg(long, required = true)]
        basis: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_ORDER)]
        order: usize,
    },
}

#[derive(Debug, Args)]
pub struct EllipticArgs {
    #[arg(long, required_unless_present = "grid")]
    x: Option<f64>,
    /// Use x = 0.1, 0.2, ..., 0.9.
    #[arg(long)]
    grid: bool,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepMethod {
    Formula,
    Bruteforce,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Mu,
    Nu,
    Both,
}

fn parse_family(s: &str) -> Result<DivisorFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_name(s: &str) -> Result<SeriesName, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rep_kind(s: &str) -> Result<RepKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Why a command stopped early.
enum Failure {
    Usage(String),
    Math(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain(_) | Error::Capacity { .. } | Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Math(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Math(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
    }
}

fn ceiling(flag: &str, value: usize, max: usize) -> Result<(), Failure> {
    if value > max {
        Err(Failure::Usage(format!("--{flag} {value} exceeds the ceiling {max}")))
    } else {
        Ok(())
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let format = cli.format;
    match &cli.command {
        Command::Sieve { family, s, max } => {
            ceiling("max", *max, SIEVE_CEILING)?;
            let kind = DivisorKind::new(*family, *s)?;
            let table = sieve_with_capacity(kind, (*max).max(1), SIEVE_CEILING)?;
            write_table(out, format, 1, &table.as_slice()[1..=*max])?;
            Ok(true)
        }
        Command::Series { name, order } => {
            ceiling("order", *order, SERIES_CEILING)?;
            let series = build_with(*name, *order, BuildOptions::default())?;
            write_table(out, format, 0, series.coeffs())?;
            Ok(true)
        }
        Command::Verify { order, file } => {
            ceiling("order", *order, SERIES_CEILING)?;
            let records = match file {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
                    parse(&text).map_err(|e| Failure::Usage(format!("{}:{e}", path.display())))?
                }
                None => builtin_registry(),
            };
            verify_cmd(out, format, &records, *order)
        }
        Command::Audit { order } => {
            ceiling("order", *order, SERIES_CEILING)?;
            audit_cmd(out, format, *order)?;
            Ok(true)
        }
        Command::Reps { kind, s, max, method } => {
            ceiling("max", *max, SERIES_CEILING)?;
            let counts = reps(*kind, *s, *max, *method)?;
            write_table(out, format, 0, &counts)?;
            Ok(true)
        }
        Command::Congruences { which, max } => {
            ceiling("max", *max, SERIES_CEILING)?;
            congruences_cmd(out, format, *which, *max)
        }
        Command::Elliptic(args) => elliptic_cmd(out, format, args),
        Command::Express { target, basis, order } => {
            ceiling("order", *order, SERIES_CEILING)?;
            express_cmd(out, format, target, basis, *order)
        }
    }
}

fn write_table(out: &mut dyn Write, format: Format, start: usize, values: &[BigInt]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            let v: Vec<String> = values.iter().map(BigInt::to_string).collect();
            writeln!(out, "{}", serde_json::to_string(&v).expect("strings serialize"))?;
        }
        Format::Tsv => {
            for (i, v) in values.iter().enumerate() {
                writeln!(out, "{}\t{v}", start + i)?;
            }
        }
    }
    Ok(())
}

fn entry_row(e: &SuiteEntry) -> String {
    let status = serde_json::to_value(e.status).expect("status serializes");
    let expected = serde_json::to_value(e.expected).expect("expected serializes");
    let (n, lhs, rhs) = match &e.first_failure {
        Some(f) => {
            let v = serde_json::to_value(f).expect("failure serializes");
            (v["n"].to_string(), v["lhs"].as_str().unwrap_or("").to_string(), v["rhs"].as_str().unwrap_or("").to_string())
        }
        None => ("-".into(), "-".into(), "-".into()),
    };
    format!(
        "{}\t{}\t{}\t{}\t{n}\t{lhs}\t{rhs}",
        e.name,
        expected.as_str().unwrap_or(""),
        status.as_str().unwrap_or(""),
        e.order
    )
}

fn verify_cmd(out: &mut dyn Write, format: Format, records: &[IdentityRecord], order: usize) -> Outcome {
    let report = run_suite(records, order);
    match format {
        Format::Json => writeln!(out, "{}", report.to_json())?,
        Format::Tsv => {
            for e in &report.entries {
                writeln!(out, "{}", entry_row(e))?;
            }
        }
    }
    Ok(report.success())
}

#[derive(Serialize)]
struct AuditEntry<'a> {
    route: &'static str,
    #[serde(flatten)]
    entry: &'a SuiteEntry,
}

fn audit_cmd(out: &mut dyn Write, format: Format, order: usize) -> Result<(), Failure> {
    let series = run_suite(&builtin_registry(), order);
    let conv = check_all(&convolution_theorems(), order.max(1))?;
    let entries: Vec<AuditEntry> = series
        .entries
        .iter()
        .map(|entry| AuditEntry { route: "series", entry })
        .chain(conv.iter().map(|entry| AuditEntry { route: "convolution", entry }))
        .collect();
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&entries).expect("report serializes"))?,
        Format::Tsv => {
            for e in &entries {
                writeln!(out, "{}\t{}", e.route, entry_row(e.entry))?;
            }
        }
    }
    Ok(())
}

fn reps(kind: RepKind, s: u32, max: usize, method: RepMethod) -> Result<Vec<BigInt>, Failure> {
    Ok(match method {
        RepMethod::Bruteforce => rep_bruteforce(kind, s, max)?.counts,
        RepMethod::Series => rep_series(kind, s, max)?.into_coeffs(),
        RepMethod::Formula => (0..=max as i64)
            .map(|n| match (kind, n) {
                // The empty sum is the only representation of 0 by squares.
                (RepKind::Squares, 0) if s == 4 || s == 8 => Ok(BigInt::from(1)),
                _ => rep_formula(kind, s, n),
            })
            .collect::<qsverify::Result<Vec<_>>>()?,
    })
}

#[derive(Serialize)]
struct ScanReport {
    claim: &'static str,
    limit: usize,
    violations: Vec<Violation>,
}

fn congruences_cmd(out: &mut dyn Write, format: Format, which: Which, max: usize) -> Outcome {
    let mut claims = Vec::new();
    if which != Which::Nu {
        claims.push(("mu", CongruenceClaim::mu_mod3(max)));
    }
    if which != Which::Mu {
        claims.push(("nu", CongruenceClaim::nu_mod3(max)));
    }
    let mut reports = Vec::new();
    for (name, claim) in claims {
        reports.push(ScanReport { claim: name, limit: max, violations: congruence_scan(&claim)? });
    }
    match format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&reports).expect("report serializes"))?,
        Format::Tsv => {
            for r in &reports {
                writeln!(out, "{}\t{}\t{}", r.claim, r.limit, r.violations.len())?;
                for v in &r.violations {
                    writeln!(out, "{}\tviolation\t{}\t{}\t{}\t{}", r.claim, v.n, v.sequence_index, v.residue, v.expected)?;
                }
            }
        }
    }
    Ok(reports.iter().all(|r| r.violations.is_empty()))
}

fn elliptic_cmd(out: &mut dyn Write, format: Format, args: &EllipticArgs) -> Outcome {
    if !(args.tol > 0.0) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let xs: Vec<f64> = if args.grid { GRID.to_vec() } else { vec![args.x.expect("clap enforces --x")] };
    let points: Vec<EllipticPoint> = xs.iter().map(|&x| make_point(x, DEFAULT_PRECISION)).collect::<qsverify::Result<_>>()?;
    let formulas = evaluation_formulas();
    let reports: Vec<ResidualReport> = if args.grid {
        check_grid(&formulas, &xs, DEFAULT_PRECISION, args.tol)?
    } else {
        formulas.iter().map(|f| check_evaluation(f, xs[0], DEFAULT_PRECISION, args.tol)).collect::<qsverify::Result<_>>()?
    };
    match format {
        Format::Json => {
            let v = json!({ "points": points, "reports": reports });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("report serializes"))?;
        }
        Format::Tsv => {
            for r in &reports {
                let expected = serde_json::to_value(r.expected).expect("expected serializes");
                writeln!(
                    out,
                    "{}\t{}\t{}\t{:e}\t{}",
                    r.id,
                    expected.as_str().unwrap_or(""),
                    r.x,
                    r.residual,
                    if r.pass { "pass" } else { "fail" }
                )?;
            }
        }
    }
    Ok(!reports.iter().any(ResidualReport::is_regression))
}

/// Split on commas outside parentheses.
fn split_top_level(text: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    parts.push(cur);
    parts
}

fn express_cmd(out: &mut dyn Write, format: Format, target: &str, basis: &[String], order: usize) -> Outcome {
    let target_expr = parse_expr(target).map_err(|e| Failure::Usage(format!("--target: {e}")))?;
    let mut basis_exprs = Vec::new();
    for text in basis.iter().flat_map(|b| split_top_level(b)) {
        basis_exprs.push(parse_expr(&text).map_err(|e| Failure::Usage(format!("--basis `{}`: {e}", text.trim())))?);
    }
    let Some(coeffs) = express_in_basis(&target_expr, &basis_exprs, order)? else {
        writeln!(out, "{}", if format == Format::Json { "null" } else { "no combination" })?;
        return Ok(false);
    };
    let combination = combination_expr(&basis_exprs, &coeffs);
    let record = IdentityRecord::new("express", target_expr, combination.clone(), qsverify::identity::Expected::Pass);
    let recheck = 2 * order;
    let reverified = qsverify::identity::verify(&record, recheck).passed();
    let strings: Vec<String> = coeffs.iter().map(rational_string).collect();
    match format {
        Format::Json => {
            let v = json!({
                "coefficients": strings,
                "identity": format!("{} == {}", record.lhs, combination),
                "reverified_order": recheck,
                "reverified": reverified,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("report serializes"))?;
        }
        Format::Tsv => {
            writeln!(out, "coefficients\t{}", strings.join("\t"))?;
            writeln!(out, "identity\t{} == {}", record.lhs, combination)?;
            writeln!(out, "reverified\t{recheck}\t{}", if reverified { "pass" } else { "fail" })?;
        }
    }
    Ok(reverified)
}
