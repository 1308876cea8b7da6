//! CSV tables with `#` metadata lines, plus optional gnuplot companions.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;

/// One CSV file's worth of rows; every cell is pre-formatted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn file_name(&self) -> String {
        format!("{}.csv", self.name)
    }

    pub fn render(&self, metadata: &[(&str, String)]) -> String {
        let mut out = String::new();
        for (k, v) in metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Gnuplot script plotting the first numeric column against the second.
    pub fn gnuplot(&self) -> String {
        let csv = self.file_name();
        let x = self.header.first().map_or("x", String::as_str);
        let y = self.header.get(1).map_or("y", String::as_str);
        format!(
            "set datafile separator ','\n\
             set datafile commentschars '#'\n\
             set key autotitle columnhead\n\
             set xlabel '{x}'\n\
             set ylabel '{y}'\n\
             set terminal pngcairo size 900,600\n\
             set output '{name}.png'\n\
             plot '{csv}' using 1:2 with linespoints\n",
            name = self.name
        )
    }
}

/// Shortest decimal string that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

/// Writes every table (and optional `.gp` script) into `dir`.
pub fn write_tables(
    dir: &Path,
    tables: &[Table],
    metadata: &[(&str, String)],
    gnuplot: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for t in tables {
        let path = dir.join(t.file_name());
        fs::write(&path, t.render(metadata))?;
        written.push(path);
        if gnuplot {
            let gp = dir.join(format!("{}.gp", t.name));
            fs::write(&gp, t.gnuplot())?;
            written.push(gp);
        }
    }
    Ok(written)
}
