//! `spreadpoly`: spreading measures of orthonormal-polynomial densities.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 bad arguments or
//! I/O, 3 a numeric computation failed.

mod commands;
mod spec;
mod table;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use spreadpoly::report::ReportOptions;
use spreadpoly::verify::{parse_scopes, VerifyOptions};
use spreadpoly::{Family, FamilyKind, PrecisionContext, RenyiOrder};

use commands::NumericFailure;
use table::{NullStyle, Table};

#[derive(Parser)]
#[command(name = "spreadpoly", version, about = "Spreading measures of Hermite, Laguerre and Jacobi densities")]
struct Cli {
    /// Working precision in bits (overrides SPREADPOLY_BITS)
    #[arg(long, global = true)]
    bits: Option<u32>,
    /// Relative tolerance between precision levels (overrides SPREADPOLY_RTOL)
    #[arg(long, global = true)]
    rtol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every spreading measure over a range of degrees
    Measures {
        #[command(flatten)]
        target: Target,
        /// Comma-separated Renyi orders, e.g. `2,3/2`
        #[arg(long, default_value = "2", value_parser = spec::parse_orders)]
        q: std::vec::Vec<RenyiOrder>,
        /// Skip the numeric Shannon length and its audits
        #[arg(long)]
        no_shannon: bool,
        /// Skip the optimized upper bound
        #[arg(long)]
        no_bounds: bool,
        /// Skip the Lauricella route for Laguerre
        #[arg(long)]
        no_lauricella: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Numeric Shannon quantities against their large-n forms
    Asymptotics {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        out: Output,
    },
    /// Optimized Shannon upper bounds and the Shannon inequality
    Bounds {
        #[command(flatten)]
        target: Target,
        #[command(flatten)]
        out: Output,
    },
    /// Self-check suite against independent routes
    Verify {
        /// `all` or a comma list of orthopoly, quadrature, spreading, renyi, shannon, erratum
        #[arg(long, default_value = "all")]
        scope: String,
        /// Tolerance override, `NAME=VALUE`; repeatable
        #[arg(long = "tol", value_parser = parse_tol)]
        tol: Vec<(String, f64)>,
        #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
        format: VerifyFormat,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Target {
    /// hermite, laguerre or jacobi
    #[arg(long)]
    family: FamilyKind,
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Degrees: `a..b` (inclusive), `n`, or a comma list
    #[arg(long, value_parser = spec::parse_degrees)]
    n: std::vec::Vec<usize>,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// How undefined values appear in CSV
    #[arg(long, value_enum, default_value_t = NullStyle::Empty)]
    null: NullStyle,
    /// Prefix the output with run metadata
    #[arg(long)]
    meta: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyFormat {
    Text,
    Json,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let v: f64 = value.trim().parse().map_err(|_| format!("bad tolerance {value:?}"))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(format!("tolerance must be finite and nonnegative, got {v}"));
    }
    Ok((name.trim().to_owned(), v))
}

enum Failure {
    Usage(String),
    Numeric(String),
    Verify,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("I/O error: {e}"))
    }
}

impl From<NumericFailure> for Failure {
    fn from(e: NumericFailure) -> Self {
        Failure::Numeric(e.0)
    }
}

fn context(cli: &Cli) -> Result<PrecisionContext, Failure> {
    let usage = |e: spreadpoly::Error| Failure::Usage(e.to_string());
    let mut ctx = PrecisionContext::from_env().map_err(usage)?;
    if let Some(bits) = cli.bits {
        ctx = ctx.with_bits(bits).map_err(usage)?;
    }
    if let Some(rtol) = cli.rtol {
        ctx = ctx.with_rel_tol(rtol).map_err(usage)?;
    }
    Ok(ctx)
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: &mut dyn Write, rows: Value, meta: Option<Value>) -> Result<(), Failure> {
    let doc = match meta {
        Some(m) => serde_json::json!({ "meta": m, "rows": rows }),
        None => rows,
    };
    serde_json::to_writer_pretty(&mut *out, &doc).map_err(io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn target_family(t: &Target) -> Result<Family, Failure> {
    spec::family(t.family, t.alpha, t.beta).map_err(Failure::Usage)
}

fn emit_table(table: &Table, out: &Output, meta: Value) -> Result<(), Failure> {
    let meta = out.meta.then_some(meta);
    let mut w = sink(&out.output)?;
    match out.format {
        Format::Csv => table.write_csv(&mut w, out.null, meta.as_ref())?,
        Format::Json => write_json(&mut w, table.to_json(), meta)?,
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = context(&cli)?;
    match &cli.command {
        Command::Measures { target, q, no_shannon, no_bounds, no_lauricella, out } => {
            let family = target_family(target)?;
            let opts = ReportOptions {
                orders: q.clone(),
                shannon: !no_shannon,
                bound: !no_bounds,
                lauricella: !no_lauricella,
            };
            let reports = commands::measures(&family, &target.n, &opts, &ctx)?;
            let meta = commands::meta("measures", &ctx);
            match out.format {
                Format::Csv => emit_table(&commands::measures_table(&family, q, &opts, &reports), out, meta)?,
                Format::Json => {
                    let rows = serde_json::to_value(&reports).map_err(io::Error::from)?;
                    let mut w = sink(&out.output)?;
                    write_json(&mut w, rows, out.meta.then_some(meta))?;
                    w.flush()?;
                }
            }
            Ok(())
        }
        Command::Asymptotics { target, out } => {
            let family = target_family(target)?;
            emit_table(&commands::asymptotics(&family, &target.n, &ctx)?, out, commands::meta("asymptotics", &ctx))
        }
        Command::Bounds { target, out } => {
            let family = target_family(target)?;
            emit_table(&commands::bounds(&family, &target.n, &ctx)?, out, commands::meta("bounds", &ctx))
        }
        Command::Verify { scope, tol, format, output } => {
            let scopes = parse_scopes(scope).map_err(|e| Failure::Usage(e.to_string()))?;
            let opts = VerifyOptions { tolerances: tol.iter().cloned().collect::<BTreeMap<_, _>>() };
            let report = commands::verify_suite(&scopes, &opts, &ctx);
            let mut w = sink(output)?;
            match format {
                VerifyFormat::Text => w.write_all(commands::verify_text(&report).as_bytes())?,
                VerifyFormat::Json => {
                    let v = serde_json::to_value(&report).map_err(io::Error::from)?;
                    write_json(&mut w, v, None)?;
                }
            }
            w.flush()?;
            if report.passed { Ok(()) } else { Err(Failure::Verify) }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(m)) => {
            eprintln!("numeric failure: {m}");
            ExitCode::from(3)
        }
    }
}
