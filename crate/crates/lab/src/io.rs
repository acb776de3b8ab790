//! Output tables, CSV/JSON emission and grid snapshots.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use bisph_core::grid::GridFunction;
use bisph_core::Complex64;
use serde::Serialize;
use serde_json::Value;

use crate::{LabError, Result};

/// Row-major table; every row repeats the parameters that produced it.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Add a constant column to every row.
    pub fn with_constant(mut self, name: &str, v: Value) -> Self {
        self.columns.push(name.into());
        self.rows.iter_mut().for_each(|r| r.push(v.clone()));
        self
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Rows as objects keyed by column name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().cloned()).collect()))
                .collect(),
        )
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `f64` as a JSON number, or `null` when not finite.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

/// Result of one check or scan.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub check: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: String,
    pub summary: Value,
    #[serde(skip)]
    pub table: Table,
    /// Wall time; kept out of serialized output so runs stay byte-identical.
    #[serde(skip)]
    pub elapsed_s: f64,
}

impl Outcome {
    pub fn document(&self) -> Value {
        let mut doc = serde_json::to_value(self).expect("serializable");
        doc["rows"] = self.table.to_json();
        doc
    }

    pub fn failure_record(&self) -> Value {
        serde_json::json!({
            "failure": self.check,
            "measured": num(self.measured),
            "threshold": self.threshold,
            "elapsed_s": num(self.elapsed_s),
            "summary": self.summary,
        })
    }
}

// ---------------------------------------------------------------- snapshots

const MAGIC: &[u8; 8] = b"BISPHGR1";

/// Binary grid snapshot: magic, then `d`, `n` (u64) and `L` (f64), then
/// `n^d` complex values as `(re, im)` pairs, all little-endian.
pub fn write_snapshot(path: &Path, f: &GridFunction, provenance: &Value) -> Result<()> {
    let mut buf = Vec::with_capacity(32 + 16 * f.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(f.d() as u64).to_le_bytes());
    buf.extend_from_slice(&(f.n() as u64).to_le_bytes());
    buf.extend_from_slice(&f.box_length().to_le_bytes());
    for v in f.values() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    std::fs::write(path, buf)?;
    let side = serde_json::json!({
        "format": "bisph-grid/1",
        "d": f.d(),
        "n": f.n(),
        "box_length": f.box_length(),
        "provenance": provenance,
    });
    std::fs::write(sidecar_path(path), serde_json::to_string_pretty(&side)? + "\n")?;
    Ok(())
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn read_snapshot(path: &Path) -> Result<GridFunction> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    if bytes.len() < 32 || &bytes[..8] != MAGIC {
        return Err(LabError::Snapshot("missing header".into()));
    }
    let word = |i: usize| -> [u8; 8] { bytes[i..i + 8].try_into().expect("8 bytes") };
    let d = u64::from_le_bytes(word(8)) as usize;
    let n = u64::from_le_bytes(word(16)) as usize;
    let l = f64::from_le_bytes(word(24));
    let len = n
        .checked_pow(d as u32)
        .filter(|_| (2..=3).contains(&d))
        .ok_or_else(|| LabError::Snapshot(format!("bad shape d = {d}, n = {n}")))?;
    if bytes.len() != 32 + 16 * len {
        return Err(LabError::Snapshot(format!("expected {} payload bytes, found {}", 16 * len, bytes.len() - 32)));
    }
    let values = (0..len).map(|i| Complex64::new(f64::from_le_bytes(word(32 + 16 * i)), f64::from_le_bytes(word(40 + 16 * i)))).collect();
    Ok(GridFunction::new(d, n, l, values)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_is_lf_terminated_and_quotes() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![num(1.5), Value::String("x,y".into())]);
        t.push(vec![Value::Null, num(f64::NAN)]);
        let mut out = Vec::new();
        t.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "a,b\n1.5,\"x,y\"\n,\n");
    }

    #[test]
    fn json_rows_are_keyed() {
        let mut t = Table::new(&["a"]);
        t.push(vec![num(2.0)]);
        let t = t.with_constant("n", num(16.0));
        assert_eq!(t.to_json(), serde_json::json!([{"a": 2.0, "n": 16.0}]));
    }
}
