//! Row builders for each subcommand. Rows are computed in parallel and
//! returned in degree order.

use rayon::prelude::*;
use serde_json::Value;

use spreadpoly::report::{measure_report, MeasureReport, ReportOptions};
use spreadpoly::shannon::{optimize_bound, ratio_constant, shannon_asymptotic, shannon_numeric, Audit};
use spreadpoly::spreading::{asymptotic_cramer_rao, cramer_rao_product, stddev};
use spreadpoly::verify::{self, Scope, VerifyOptions, VerifyReport};
use spreadpoly::{Family, FamilyKind, PrecisionContext, RenyiOrder};

use crate::table::{Cell, Table};

/// Failure of a numeric computation, naming what failed.
#[derive(Debug)]
pub struct NumericFailure(pub String);

fn failure<'a>(what: &str, family: &'a Family, n: usize) -> impl FnOnce(spreadpoly::Error) -> NumericFailure + 'a {
    let what = what.to_owned();
    move |e| NumericFailure(format!("{what} for {family}, n = {n}: {e}"))
}

fn family_cells(family: &Family) -> [Cell; 3] {
    let (alpha, beta) = match family.kind() {
        FamilyKind::Hermite => (Cell::Blank, Cell::Blank),
        FamilyKind::Laguerre => (Cell::Num(family.alpha()), Cell::Blank),
        FamilyKind::Jacobi => (Cell::Num(family.alpha()), Cell::Num(family.beta())),
    };
    [Cell::from(family.kind().name()), alpha, beta]
}

fn family_columns() -> Vec<String> {
    ["family", "alpha", "beta", "n"].map(String::from).to_vec()
}

fn rel_dev(value: f64, reference: f64) -> Cell {
    Cell::Num((value - reference).abs() / reference.abs())
}

pub fn measures(
    family: &Family,
    degrees: &[usize],
    opts: &ReportOptions,
    ctx: &PrecisionContext,
) -> Result<Vec<MeasureReport>, NumericFailure> {
    degrees
        .par_iter()
        .map(|&n| measure_report(family, n, opts, ctx).map_err(failure("measures", family, n)))
        .collect()
}

pub fn measures_table(family: &Family, orders: &[RenyiOrder], opts: &ReportOptions, reports: &[MeasureReport]) -> Table {
    let mut columns = family_columns();
    columns.extend(["stddev", "fisher_length"].map(String::from));
    let lauricella = opts.lauricella && family.kind() == FamilyKind::Laguerre;
    for q in orders {
        let l = q.label();
        columns.push(l.clone());
        columns.push(format!("{l}_oracle"));
        if lauricella {
            columns.push(format!("{l}_lauricella"));
        }
        if q.two_q() % 2 == 1 {
            columns.push(format!("{l}_abs"));
        }
    }
    if opts.shannon {
        columns.extend(["shannon_N", "shannon_entropy_err", "shannon_N_asym"].map(String::from));
    }
    if opts.bound {
        columns.extend(["bound", "bound_param"].map(String::from));
    }
    columns.push("cramer_rao_ok".into());
    if opts.shannon {
        columns.push("shannon_inequality_ok".into());
        if opts.bound {
            columns.push("bound_dominance_ok".into());
        }
    }

    let mut table = Table::new(columns);
    for r in reports {
        let mut row: Vec<Cell> = family_cells(family).into();
        row.push(r.n.into());
        row.push(r.stddev.value.into());
        row.push(r.fisher_length.value.into());
        for e in &r.renyi {
            row.push(e.bell.value.into());
            row.push(e.oracle.value.into());
            if lauricella {
                row.push(e.lauricella.as_ref().and_then(|m| m.value).into());
            }
            if let Some(a) = &e.absolute {
                row.push(a.value.into());
            }
        }
        if let Some(s) = &r.shannon {
            row.push(s.numeric.value.into());
            row.push(s.est_error.into());
            row.push(s.asymptotic.value.into());
        }
        if let Some(b) = &r.bound {
            row.push(b.value.value.into());
            row.push(b.parameter.into());
        }
        row.push(r.audits.cramer_rao.into());
        if opts.shannon {
            row.push(r.audits.shannon_inequality.map(|a| a.holds).into());
            if opts.bound {
                row.push(r.audits.bound_dominance.map(|a| a.holds).into());
            }
        }
        table.push(row);
    }
    table
}

pub fn asymptotics(family: &Family, degrees: &[usize], ctx: &PrecisionContext) -> Result<Table, NumericFailure> {
    let mut columns = family_columns();
    columns.extend(
        [
            "S_numeric",
            "S_err",
            "S_asym",
            "N_numeric",
            "N_asym",
            "N_rel_dev",
            "N_over_stddev",
            "ratio_limit",
            "ratio_rel_dev",
            "cramer_rao",
            "cramer_rao_asym",
            "cramer_rao_rel_dev",
        ]
        .map(String::from),
    );
    let rate = asymptotic_cramer_rao(family);
    let rows: Vec<Vec<Cell>> = degrees
        .par_iter()
        .map(|&n| {
            let s = shannon_numeric(family, n, ctx).map_err(failure("numeric entropy", family, n))?;
            let asym = shannon_asymptotic(family, n).ok();
            let ratio = s.length / stddev(family, n);
            let cr = cramer_rao_product(family, n);
            let cr_asym = (n > 0).then(|| rate.eval(n as f64));
            let mut row: Vec<Cell> = family_cells(family).into();
            row.push(n.into());
            row.push(s.entropy.into());
            row.push(s.est_error.into());
            row.push(asym.map(|a| a.entropy).into());
            row.push(s.length.into());
            row.push(asym.map(|a| a.length).into());
            row.push(asym.map_or(Cell::Undefined, |a| rel_dev(s.length, a.length)));
            row.push(ratio.into());
            row.push(ratio_constant().into());
            row.push(rel_dev(ratio, ratio_constant()));
            row.push(cr.into());
            row.push(cr_asym.into());
            row.push(match cr_asym {
                Some(a) if a != 0.0 => rel_dev(cr, a),
                _ => Cell::Undefined,
            });
            Ok(row)
        })
        .collect::<Result<_, NumericFailure>>()?;
    let mut table = Table::new(columns);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn bounds(family: &Family, degrees: &[usize], ctx: &PrecisionContext) -> Result<Table, NumericFailure> {
    let mut columns = family_columns();
    columns.extend(
        [
            "N_numeric",
            "S_err",
            "bound",
            "bound_param",
            "bound_dominates",
            "shannon_rhs",
            "shannon_inequality_ok",
        ]
        .map(String::from),
    );
    let rows: Vec<Vec<Cell>> = degrees
        .par_iter()
        .map(|&n| {
            let s = shannon_numeric(family, n, ctx).map_err(failure("numeric entropy", family, n))?;
            let b = optimize_bound(family, n).map_err(failure("optimized bound", family, n))?;
            let err = s.est_error.unwrap_or(0.0);
            let dominance = Audit::new(s.length, b.value, err);
            let rhs = (2.0 * std::f64::consts::PI * std::f64::consts::E).sqrt() * stddev(family, n);
            let inequality = Audit::new(s.length, rhs, err);
            let mut row: Vec<Cell> = family_cells(family).into();
            row.push(n.into());
            row.push(s.length.into());
            row.push(s.est_error.into());
            row.push(b.value.into());
            row.push(b.parameter.into());
            row.push(dominance.holds.into());
            row.push(rhs.into());
            row.push(inequality.holds.into());
            Ok(row)
        })
        .collect::<Result<_, NumericFailure>>()?;
    let mut table = Table::new(columns);
    rows.into_iter().for_each(|r| table.push(r));
    Ok(table)
}

pub fn verify_suite(scopes: &[Scope], opts: &VerifyOptions, ctx: &PrecisionContext) -> VerifyReport {
    verify::run(scopes, opts, ctx)
}

/// Plain-text rendering of a verification report.
pub fn verify_text(report: &VerifyReport) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(
            s,
            "{status} {:<10} {:<30} deviation={:<12} tolerance={:e}  {}",
            c.scope.name(),
            c.name,
            crate::table::format_short(c.deviation),
            c.tolerance,
            c.detail
        );
    }
    if !report.erratum.is_empty() {
        let _ = writeln!(s, "\nOnicescu displays vs quadrature oracle:");
        let _ = writeln!(s, "{:<40} {:>6} {:>6} {:>24} {:>24} {:>10} consistent", "display", "alpha", "beta", "printed", "oracle", "rel_dev");
        for r in &report.erratum {
            let beta = r.beta.map_or_else(|| "-".to_string(), |b| b.to_string());
            let _ = writeln!(
                s,
                "{:<40} {:>6} {:>6} {:>24.17e} {:>24.17e} {:>10.3e} {}",
                r.display, r.alpha, beta, r.printed, r.oracle, r.rel_deviation, r.consistent
            );
        }
    }
    let passed = report.checks.iter().filter(|c| c.passed).count();
    let _ = writeln!(s, "\n{passed}/{} checks passed", report.checks.len());
    s
}

pub fn meta(command: &str, ctx: &PrecisionContext) -> Value {
    serde_json::json!({
        "tool": "spreadpoly",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "bits": ctx.bits(),
        "rel_tol": ctx.rel_tol(),
    })
}
