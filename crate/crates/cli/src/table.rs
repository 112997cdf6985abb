//! Tabular output in CSV or JSON.

use std::fmt::Write as _;

use serde_json::{json, Value};

/// Bumped whenever column names or JSON layout change.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Flag(bool),
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn with_columns(command: &str, columns: Vec<String>) -> Self {
        Self {
            command: command.to_string(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Csv => self.to_csv(precision),
            Format::Json => self.to_json(precision),
        }
    }

    pub fn to_csv(&self, precision: usize) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| csv_cell(c, precision)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self, precision: usize) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(|c| json_cell(c, precision)).collect()))
            .collect();
        let doc = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("table serialises");
        s.push('\n');
        s
    }
}

/// Scientific notation with `precision` digits after the point; non-finite
/// values print as `inf`, `-inf` and `nan`.
pub fn format_real(x: f64, precision: usize) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.precision$e}")
    }
}

fn csv_cell(c: &Cell, precision: usize) -> String {
    match c {
        Cell::Int(v) => v.to_string(),
        Cell::Real(v) => format_real(*v, precision),
        Cell::Text(s) => s.clone(),
        Cell::Flag(b) => b.to_string(),
    }
}

fn json_cell(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Int(v) => json!(v),
        Cell::Real(v) if v.is_finite() => {
            let rounded: f64 = format_real(*v, precision)
                .parse()
                .expect("formatted float parses");
            json!(rounded)
        }
        Cell::Real(v) => json!(format_real(*v, precision)),
        Cell::Text(s) => json!(s),
        Cell::Flag(b) => json!(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["M", "x", "ok", "note"]);
        t.push(vec![3usize.into(), 0.5.into(), true.into(), "".into()]);
        t.push(vec![
            4usize.into(),
            f64::INFINITY.into(),
            false.into(),
            "warn".into(),
        ]);
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv(3);
        assert_eq!(csv, "M,x,ok,note\n3,5.000e-1,true,\n4,inf,false,warn\n");
    }

    #[test]
    fn json_layout() {
        let v: Value = serde_json::from_str(&sample().to_json(3)).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["command"], "demo");
        assert_eq!(v["columns"][1], "x");
        assert_eq!(v["rows"][0][1], 0.5);
        assert_eq!(v["rows"][1][1], "inf");
    }

    #[test]
    fn reals_round_trip_at_declared_precision() {
        for &x in &[0.7113248654051871, -1.5e-300, 6.02e23, 1.0 / 3.0, -0.0] {
            for p in [3usize, 8, 12, 16] {
                let back: f64 = format_real(x, p).parse().unwrap();
                assert_eq!(back.is_sign_negative(), x.is_sign_negative());
                assert!((back - x).abs() <= x.abs() * 10f64.powi(-(p as i32)));
            }
        }
    }
}
