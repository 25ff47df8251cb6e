//! CSV and JSON artifacts. Floats are written with 9 significant digits.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use floquet_core::collapse::ScalingPoint;

use crate::error::{LabError, LabResult};

/// `x` rounded to 9 significant digits, shortest round-trip form.
pub fn fmt9(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

pub fn ensure_dir(dir: &Path) -> LabResult<()> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))
}

/// Write rows of already-formatted fields under `header`, atomically.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> LabResult<()> {
    if let Some(parent) = path.parent() {
        ensure_dir(parent)?;
    }
    let tmp = tmp_path(path);
    let csv_err = |source| LabError::Csv { path: path.to_path_buf(), source };
    {
        let mut w = csv::Writer::from_path(&tmp).map_err(csv_err)?;
        w.write_record(header).map_err(csv_err)?;
        for r in rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush().map_err(|e| LabError::io(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| LabError::io(path, e))
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> LabResult<()> {
    if let Some(parent) = path.parent() {
        ensure_dir(parent)?;
    }
    let text = serde_json::to_string_pretty(value).map_err(|source| LabError::Json { path: path.to_path_buf(), source })?;
    let tmp = tmp_path(path);
    fs::write(&tmp, text + "\n").map_err(|e| LabError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| LabError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> LabResult<T> {
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| LabError::Json { path: path.to_path_buf(), source })
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

fn column(headers: &csv::StringRecord, names: &[&str]) -> Option<usize> {
    headers.iter().position(|h| names.iter().any(|n| h.trim().eq_ignore_ascii_case(n)))
}

/// Scaling points from a CSV with columns `L`, `p` (or `p_m`), `y` (or
/// `gpi`) and `sigma` (or `gpi_stderr`). Extra columns are ignored.
pub fn read_scaling_points(path: &Path) -> LabResult<Vec<ScalingPoint>> {
    let csv_err = |source| LabError::Csv { path: path.to_path_buf(), source };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let headers = r.headers().map_err(csv_err)?.clone();
    let find = |names: &[&str]| {
        column(&headers, names).ok_or_else(|| LabError::Config(format!("{}: missing column {}", path.display(), names.join("/"))))
    };
    let (cl, cp, cy, cs) = (find(&["L"])?, find(&["p", "p_m"])?, find(&["y", "gpi"])?, find(&["sigma", "gpi_stderr"])?);
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let bad = |what: &str| LabError::Config(format!("{}: row {}: bad {what}", path.display(), line + 2));
        let field = |c: usize| rec.get(c).unwrap_or("").trim();
        out.push(ScalingPoint {
            l: field(cl).parse().map_err(|_| bad("L"))?,
            p: field(cp).parse().map_err(|_| bad("p"))?,
            y: field(cy).parse().map_err(|_| bad("y"))?,
            sigma: field(cs).parse().map_err(|_| bad("sigma"))?,
        });
    }
    Ok(out)
}
