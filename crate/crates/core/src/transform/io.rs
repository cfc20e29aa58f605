use crate::error::{Error, Result};
use num_complex::Complex64 as C64;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

/// A sampled function in CSV form: `#` comment lines, a header
/// `<column>,re,im`, then one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub column: String,
    pub comments: Vec<String>,
    pub rows: Vec<(f64, C64)>,
}

/// 15 significant digits, fixed exponent notation.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.14e}")
}

impl CsvTable {
    pub fn new(column: &str, rows: Vec<(f64, C64)>) -> Self {
        CsvTable {
            column: column.to_string(),
            comments: Vec::new(),
            rows,
        }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{},re,im", self.column);
        for (x, v) in &self.rows {
            let _ = writeln!(s, "{},{},{}", fmt_num(*x), fmt_num(v.re), fmt_num(v.im));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut comments = Vec::new();
        let mut column = None;
        let mut rows = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                comments.push(c.trim().to_string());
                continue;
            }
            let cells: Vec<&str> = line.split(',').map(str::trim).collect();
            if column.is_none() {
                if cells.len() < 2 || cells[1] != "re" || (cells.len() == 3 && cells[2] != "im") || cells.len() > 3 {
                    return Err(Error::Parse(format!("line {}: expected header `<x>,re,im`", n + 1)));
                }
                column = Some(cells[0].to_string());
                continue;
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("line {}: not a number: {s:?}", n + 1)))
            };
            let (x, re, im) = match cells.as_slice() {
                [x, re] => (num(x)?, num(re)?, 0.0),
                [x, re, im] => (num(x)?, num(re)?, num(im)?),
                _ => return Err(Error::Parse(format!("line {}: expected 2 or 3 columns", n + 1))),
            };
            rows.push((x, C64::new(re, im)));
        }
        let column = column.ok_or_else(|| Error::Parse("missing header".into()))?;
        Ok(CsvTable { column, comments, rows })
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    CsvTable::parse(&text)
}

/// Write through a temporary file in the same directory and rename, so a
/// reader never sees a partial file.
pub fn write_csv_atomic(path: &Path, table: &CsvTable) -> Result<()> {
    write_atomic(path, table.render().as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path.file_name().ok_or_else(|| Error::Io(format!("{} has no file name", path.display())))?;
    let tmp = dir.join(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    fs::write(&tmp, bytes).map_err(io)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        io(e)
    })
}
