//! Writers for CSV, JSON and plain text, to a file or standard output.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::Failure;

/// Grid schema shared by every trajectory dump.
pub const GRID_HEADER: [&str; 6] = ["t", "mean", "std", "truth", "abs_error", "error_over_std"];

fn sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display())))?;
            Ok(Box::new(BufWriter::new(file)))
        }
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn io_failure(out: Option<&Path>, e: impl std::fmt::Display) -> Failure {
    let target = out.map_or_else(|| "standard output".to_string(), |p| p.display().to_string());
    Failure::Config(format!("cannot write {target}: {e}"))
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn write_csv(out: Option<&Path>, header: &[&str], rows: &[Vec<String>]) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(sink(out)?);
    w.write_record(header).map_err(|e| io_failure(out, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_failure(out, e))?;
    }
    w.flush().map_err(|e| io_failure(out, e))
}

pub fn write_json<S: Serialize>(out: Option<&Path>, value: &S) -> Result<(), Failure> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| io_failure(out, e))?;
    writeln!(w).and_then(|_| w.flush()).map_err(|e| io_failure(out, e))
}

pub fn write_text(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    let mut w = sink(out)?;
    w.write_all(text.as_bytes()).and_then(|_| w.flush()).map_err(|e| io_failure(out, e))
}
