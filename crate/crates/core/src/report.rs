//! Output envelopes: CSV tables with commented provenance lines and JSON
//! documents carrying the same provenance at full precision.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::Result;

pub const LIB_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Write through a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Six significant digits; scientific notation for very small or large
/// magnitudes.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let exp: i32 = sci.split('e').nth(1).and_then(|e| e.parse().ok()).unwrap_or(0);
    if !(-4..15).contains(&exp) {
        return sci;
    }
    let decimals = (5 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Provenance echoed into every output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub version: String,
    pub command: String,
    pub seed: Option<u64>,
}

impl Provenance {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Self { version: LIB_VERSION.into(), command: command.into(), seed }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(x) => fmt_sig(*x),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => json!(i),
            Cell::Float(x) => json!(x),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.into())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

/// Fixed-column table. Rows must match the column count.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| {
                    let m: Map<String, Value> =
                        self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.json())).collect();
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

/// `# key: value` provenance lines, then the header and the rows.
pub fn render_csv(prov: &Provenance, table: &Table) -> Result<String> {
    let mut out = format!("# dimres {}\n# command: {}\n", prov.version, prov.command);
    if let Some(seed) = prov.seed {
        out.push_str(&format!("# seed: {seed}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::csv))?;
    }
    let body = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    out.push_str(&String::from_utf8(body).expect("csv output is utf-8"));
    Ok(out)
}

/// `{"version", "command", "seed", "result"}`, pretty-printed.
pub fn render_json(prov: &Provenance, result: &impl Serialize) -> Result<String> {
    let doc = json!({
        "version": prov.version,
        "command": prov.command,
        "seed": prov.seed,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(fmt_sig(std::f64::consts::PI), "3.14159");
        assert_eq!(fmt_sig(12f64.log2()), "3.58496");
        assert_eq!(fmt_sig(2.0), "2.00000");
        assert_eq!(fmt_sig(0.0915), "0.0915000");
        assert_eq!(fmt_sig(9.9999996), "10.0000");
        assert_eq!(fmt_sig(1.5e-7), "1.50000e-7");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn empty_table_renders_header_only() {
        let t = Table::new(vec!["d", "best_ed", "samples", "seed"]);
        let csv = render_csv(&Provenance::new("table1", Some(7)), &t).unwrap();
        let body: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body, vec!["d,best_ed,samples,seed"]);
        assert!(csv.contains("# seed: 7"));
    }

    #[test]
    fn json_keeps_full_precision() {
        let x: f64 = 0.1 + 0.2;
        let text = render_json(&Provenance::new("t", None), &json!({ "x": x })).unwrap();
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["result"]["x"].as_f64().unwrap().to_bits(), x.to_bits());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
    }
}
