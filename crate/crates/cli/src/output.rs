use crate::error::{CliError, Result};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Serializes `rows` as CSV with a header line.
pub fn csv_string<R: Serialize>(rows: &[R]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_csv<R: Serialize>(dir: &Path, name: &str, rows: &[R]) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    fs::write(&path, csv_string(rows)?).map_err(io_err(&path))?;
    Ok(path)
}

pub fn write_json<V: Serialize>(dir: &Path, name: &str, value: &V) -> Result<PathBuf> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    let text = serde_json::to_string_pretty(value)?;
    fs::write(&path, text + "\n").map_err(io_err(&path))?;
    Ok(path)
}

/// Opens `dir/name` for writing.
pub fn create(dir: &Path, name: &str) -> Result<(PathBuf, std::io::BufWriter<fs::File>)> {
    ensure_dir(dir)?;
    let path = dir.join(name);
    let f = fs::File::create(&path).map_err(io_err(&path))?;
    Ok((path, std::io::BufWriter::new(f)))
}

/// JSON schema of `verify.json`.
pub const VERIFY_SCHEMA: &str = include_str!("../schema/verify.schema.json");
