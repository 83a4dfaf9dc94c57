//! Flat tables written as CSV or JSON.

use std::io::Write;

use serde_json::{Map, Value};

/// How undefined cells (divergent or inapplicable measures) are printed in CSV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum NullStyle {
    Empty,
    Inf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
    /// A measure that is undefined here; printed per [`NullStyle`].
    Undefined,
    /// A column that does not apply (e.g. `beta` for Laguerre); always empty.
    Blank,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Undefined, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<Option<bool>> for Cell {
    fn from(v: Option<bool>) -> Self {
        v.map_or(Cell::Undefined, Cell::Bool)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

/// 17 significant digits, enough to re-read every f64 exactly.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

/// Compact form for human-readable reports.
pub fn format_short(v: f64) -> String {
    if v.is_finite() { format!("{v:.3e}") } else { format_real(v) }
}

impl Cell {
    fn csv(&self, null: NullStyle) -> String {
        match self {
            Cell::Num(v) => format_real(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Blank => String::new(),
            Cell::Undefined => match null {
                NullStyle::Empty => String::new(),
                NullStyle::Inf => "inf".into(),
            },
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::from(*v),
            Cell::Num(v) => Value::from(format_real(*v)),
            Cell::Int(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.clone()),
            Cell::Bool(b) => Value::from(*b),
            Cell::Undefined | Cell::Blank => Value::Null,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W, null: NullStyle, meta: Option<&Value>) -> std::io::Result<()> {
        let mut out = out;
        // comment lines ahead of the header; data rows stay untouched
        if let Some(Value::Object(m)) = meta {
            for (k, v) in m {
                writeln!(out, "# {k}={v}")?;
            }
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.csv(null)))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-300, 6.02214076e23, -0.0] {
            let s = format_real(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_real(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_null_styles() {
        let mut t = Table::new(vec!["a".into(), "b".into()]);
        t.push(vec![Cell::Num(1.5), Cell::Undefined]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf, NullStyle::Inf, None).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,b\n1.5000000000000000e0,inf\n");
        let json = t.to_json();
        assert_eq!(json[0]["b"], Value::Null);
    }
}
