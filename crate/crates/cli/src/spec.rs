//! Parsing of family, degree-range and order arguments.

use std::ops::RangeInclusive;

use spreadpoly::{Family, FamilyKind, RenyiOrder};

/// Degrees from `a..b` (inclusive), a single `n`, or a comma list of either.
pub fn parse_degrees(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let range: RangeInclusive<usize> = parse_usize(a)?..=parse_usize(b.trim_start_matches('='))?;
                if range.is_empty() {
                    return Err(format!("empty degree range {part:?}"));
                }
                out.extend(range);
            }
            None => out.push(parse_usize(part)?),
        }
    }
    if out.is_empty() {
        return Err("no degrees given".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_usize(s: &str) -> Result<usize, String> {
    s.trim().parse().map_err(|_| format!("{s:?} is not a nonnegative integer"))
}

/// Comma-separated orders such as `2,3/2,3`.
pub fn parse_orders(s: &str) -> Result<Vec<RenyiOrder>, String> {
    let mut out: Vec<RenyiOrder> = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let q: RenyiOrder = part.parse().map_err(|e: spreadpoly::Error| e.to_string())?;
        if q.is_shannon() {
            return Err("q = 1 is the Shannon length, reported in its own columns".into());
        }
        if !out.contains(&q) {
            out.push(q);
        }
    }
    Ok(out)
}

/// Builds the family, rejecting parameters that do not belong to it.
pub fn family(kind: FamilyKind, alpha: Option<f64>, beta: Option<f64>) -> Result<Family, String> {
    let r = match kind {
        FamilyKind::Hermite => {
            if alpha.is_some() || beta.is_some() {
                return Err("hermite takes no --alpha/--beta".into());
            }
            Ok(Family::hermite())
        }
        FamilyKind::Laguerre => {
            if beta.is_some() {
                return Err("laguerre takes no --beta".into());
            }
            Family::laguerre(alpha.unwrap_or(0.0))
        }
        FamilyKind::Jacobi => Family::jacobi(alpha.unwrap_or(0.0), beta.unwrap_or(0.0)),
    };
    r.map_err(|e| e.to_string())
}
