//! CSV output with `#` comment lines naming what each column realizes.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct Column {
    pub name: &'static str,
    pub tag: &'static str,
}

pub const fn col(name: &'static str, tag: &'static str) -> Column {
    Column { name, tag }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub stem: String,
    pub comments: Vec<String>,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(stem: &str, columns: Vec<Column>) -> Self {
        Table { stem: stem.into(), comments: Vec::new(), columns, rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_to(&self, dir: &Path) -> Result<PathBuf, CliError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("{}.csv", self.stem));
        let mut out = BufWriter::new(File::create(&path)?);
        for c in &self.comments {
            writeln!(out, "# {c}")?;
        }
        for c in &self.columns {
            writeln!(out, "# column {}: {}", c.name, c.tag)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(self.columns.iter().map(|c| c.name))?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(path)
    }
}

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x}")
}
