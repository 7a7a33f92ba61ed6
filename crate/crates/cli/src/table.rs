//! Result tables and their CSV form.
//!
//! Floats are written with 9 significant digits in scientific notation and
//! NaN as `nan`, so the bytes depend only on the values.

use std::io::Write;
use std::path::Path;

use anyhow::Context;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(v) => format_float(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{v:.8e}")
    }
}

/// Rows under a fixed header; the last column is always `warning`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(columns: &[S]) -> Self {
        let mut columns: Vec<String> = columns.iter().map(|c| c.as_ref().to_owned()).collect();
        columns.push("warning".into());
        Self { columns, rows: Vec::new() }
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    /// Append a row; `cells` must match the header minus `warning`.
    pub fn push(&mut self, mut cells: Vec<Cell>, warning: Option<String>) {
        assert_eq!(cells.len() + 1, self.columns.len(), "row width does not match the header");
        cells.push(Cell::Text(warning.unwrap_or_default()));
        self.rows.push(cells);
    }

    pub fn warnings(&self) -> usize {
        self.rows.iter().filter(|r| !matches!(r.last(), Some(Cell::Text(s)) if s.is_empty())).count()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> anyhow::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    /// Write to `path`, or to stdout when `None`.
    pub fn emit(&self, path: Option<&Path>) -> anyhow::Result<()> {
        match path {
            Some(p) => {
                if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                }
                let f = std::fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
                self.write_csv(std::io::BufWriter::new(f))
            }
            None => self.write_csv(std::io::stdout().lock()),
        }
    }
}
