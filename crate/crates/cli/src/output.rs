//! Tables, number formatting, atomic file output and run manifests.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
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

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// Column-headed data with one row per grid point.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format, precision: usize) -> CliResult<String> {
        match format {
            Format::Csv => self.render_csv(precision),
            Format::Json => Ok(self.render_json(precision)),
        }
    }

    fn render_csv(&self, precision: usize) -> CliResult<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(v) => format_number(*v, precision),
                Cell::Text(s) => s.clone(),
                Cell::Empty => String::new(),
            }))
            .map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    fn render_json(&self, precision: usize) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(|c| cell_json(c, precision)).collect()))
            .collect();
        let mut obj = Map::new();
        obj.insert("columns".into(), Value::from(self.columns.clone()));
        obj.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialize");
        s.push('\n');
        s
    }
}

pub fn cell_json(c: &Cell, precision: usize) -> Value {
    match c {
        Cell::Num(v) => number_json(*v, precision),
        Cell::Text(s) => Value::String(s.clone()),
        Cell::Empty => Value::Null,
    }
}

/// Rounded to `precision` significant digits; non-finite values become `null`.
pub fn number_json(v: f64, precision: usize) -> Value {
    format_number(v, precision)
        .parse::<f64>()
        .ok()
        .and_then(serde_json::Number::from_f64)
        .map_or(Value::Null, Value::Number)
}

/// `%g`-style formatting with `precision` significant digits and no trailing zeros.
pub fn format_number(v: f64, precision: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "nan".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let p = precision.clamp(1, 17);
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Write `contents` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, contents: &[u8]) -> CliResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("output");
    let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(io)
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Clock {
    pub started_unix_s: f64,
    pub elapsed_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub check_runtimes_s: Option<Value>,
}

/// Everything needed to reproduce a run. Only `clock` varies between identical runs.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub library_version: String,
    pub parameters: Value,
    pub outputs: Vec<OutputRecord>,
    pub summary: Value,
    pub warnings: Vec<String>,
    pub clock: Clock,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn unix_seconds(t: SystemTime) -> f64 {
    t.duration_since(UNIX_EPOCH).unwrap_or(Duration::ZERO).as_secs_f64()
}

/// Writes a data file plus `<stem>.manifest.json` and returns the data path.
pub struct Emitter {
    pub out_dir: PathBuf,
    pub format: Format,
    pub precision: usize,
}

impl Emitter {
    pub fn prepare(&self) -> CliResult<()> {
        fs::create_dir_all(&self.out_dir).map_err(|e| CliError::Io(format!("{}: {e}", self.out_dir.display())))
    }

    pub fn write_table(&self, stem: &str, table: &Table) -> CliResult<OutputRecord> {
        let body = table.render(self.format, self.precision)?;
        let file = format!("{stem}.{}", self.format.extension());
        write_atomic(&self.out_dir.join(&file), body.as_bytes())?;
        Ok(OutputRecord { file, sha256: sha256_hex(body.as_bytes()), bytes: body.len() })
    }

    pub fn write_manifest(&self, stem: &str, manifest: &RunManifest) -> CliResult<PathBuf> {
        let mut body = serde_json::to_string_pretty(manifest).expect("manifest serializes");
        body.push('\n');
        let path = self.out_dir.join(format!("{stem}.manifest.json"));
        write_atomic(&path, body.as_bytes())?;
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(0.5, 12), "0.5");
        assert_eq!(format_number(-1.25e-9, 12), "-1.25e-9");
        assert_eq!(format_number(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_number(123456.0, 3), "1.23e5");
        assert_eq!(format_number(2.0, 12), "2");
        assert_eq!(format_number(f64::NAN, 12), "nan");
    }

    #[test]
    fn csv_quotes_text_and_leaves_empty_cells() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::Num(1.0), Cell::Empty, Cell::Text("x, y".into())]);
        assert_eq!(t.render(Format::Csv, 12).unwrap(), "a,b,c\n1,,\"x, y\"\n");
    }

    #[test]
    fn json_rounds_to_precision() {
        let mut t = Table::new(&["v"]);
        t.push(vec![Cell::Num(1.0 / 3.0)]);
        t.push(vec![Cell::Empty]);
        let v: Value = serde_json::from_str(&t.render(Format::Json, 4).unwrap()).unwrap();
        assert_eq!(v["rows"][0][0], serde_json::json!(0.3333));
        assert!(v["rows"][1][0].is_null());
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        write_atomic(&path, b"a\n").unwrap();
        write_atomic(&path, b"b\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "b\n");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
