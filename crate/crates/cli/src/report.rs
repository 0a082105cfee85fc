//! Tabular output shared by every subcommand.
//!
//! A [`Document`] is a set of metadata fields (seed, configuration, summary
//! statistics) plus zero or more rows with a fixed column list. CSV output
//! carries the rows only; the metadata goes to a `.meta.json` sidecar when
//! writing to a file. JSON output carries both, with object keys sorted.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    U(u64),
    I(i64),
    F(f64),
    B(bool),
    S(String),
    Empty,
}

impl Cell {
    /// Floats use 17 significant digits so that parsing the text returns
    /// the same `f64`.
    fn csv_text(&self) -> String {
        match self {
            Cell::U(v) => v.to_string(),
            Cell::I(v) => v.to_string(),
            Cell::F(v) => format_float(*v),
            Cell::B(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json_text(&self) -> String {
        match self {
            Cell::F(v) if !v.is_finite() => "null".into(),
            Cell::S(s) => serde_json::to_string(s).expect("string serialization"),
            Cell::Empty => "null".into(),
            other => other.csv_text(),
        }
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Exactly one row, merged with the metadata into a single JSON object.
    Single,
    /// Rows listed under `"rows"`.
    Rows,
}

#[derive(Debug, Clone)]
pub struct Document {
    pub meta: Vec<(&'static str, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub layout: Layout,
}

impl Document {
    pub fn single(meta: Vec<(&'static str, Cell)>, row: Vec<(&'static str, Cell)>) -> Self {
        let (columns, cells) = row.into_iter().unzip();
        Self { meta, columns, rows: vec![cells], layout: Layout::Single }
    }

    pub fn rows(meta: Vec<(&'static str, Cell)>, columns: Vec<&'static str>, rows: Vec<Vec<Cell>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == columns.len()));
        Self { meta, columns, rows, layout: Layout::Rows }
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_text))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        let mut top: BTreeMap<&str, String> = self.meta.iter().map(|(k, v)| (*k, v.json_text())).collect();
        match self.layout {
            Layout::Single => {
                for (k, v) in self.columns.iter().zip(&self.rows[0]) {
                    top.insert(k, v.json_text());
                }
                object(&top, "")
            }
            Layout::Rows => {
                let rows: Vec<String> = self
                    .rows
                    .iter()
                    .map(|r| {
                        let fields: BTreeMap<&str, String> =
                            self.columns.iter().copied().zip(r.iter().map(Cell::json_text)).collect();
                        let body: Vec<String> = fields.iter().map(|(k, v)| format!("\"{k}\": {v}")).collect();
                        format!("{{{}}}", body.join(", "))
                    })
                    .collect();
                let array = if rows.is_empty() {
                    "[]".to_string()
                } else {
                    format!("[\n    {}\n  ]", rows.join(",\n    "))
                };
                top.insert("rows", array);
                object(&top, "")
            }
        }
    }

    fn meta_json(&self) -> String {
        let top: BTreeMap<&str, String> = self.meta.iter().map(|(k, v)| (*k, v.json_text())).collect();
        object(&top, "")
    }
}

fn object(fields: &BTreeMap<&str, String>, indent: &str) -> String {
    if fields.is_empty() {
        return "{}\n".into();
    }
    let body: Vec<String> = fields.iter().map(|(k, v)| format!("{indent}  \"{k}\": {v}")).collect();
    format!("{{\n{}\n{indent}}}\n", body.join(",\n"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Writes the document to `out` (or stdout). CSV files get a metadata
/// sidecar next to them.
pub fn emit(doc: &Document, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    let bytes = match format {
        Format::Csv => doc.to_csv()?,
        Format::Json => doc.to_json().into_bytes(),
    };
    match out {
        Some(path) => {
            fs::write(path, &bytes).map_err(|e| CliError::io(path, e))?;
            if format == Format::Csv {
                let meta = sidecar_path(path);
                fs::write(&meta, doc.meta_json()).map_err(|e| CliError::io(&meta, e))?;
            }
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(&bytes).and_then(|_| stdout.flush()).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(())
}
