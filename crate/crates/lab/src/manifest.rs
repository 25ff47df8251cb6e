use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::Params;
use crate::error::LabResult;
use crate::io::write_json;

pub const MANIFEST_FILE: &str = "manifest.json";

/// Provenance record written next to every artifact set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub config: Params,
    pub version: String,
    pub git_describe: String,
    pub seed: u64,
    pub workers: usize,
    pub started_unix: u64,
    pub wall_time_s: f64,
    pub status: String,
    pub error: Option<String>,
    pub outputs: Vec<PathBuf>,
}

fn describe_in(dir: Option<&Path>) -> Option<String> {
    let mut cmd = Command::new("git");
    if let Some(d) = dir {
        cmd.current_dir(d);
    }
    let out = cmd.args(["describe", "--always", "--dirty", "--tags"]).output().ok()?;
    let s = String::from_utf8(out.stdout).ok()?.trim().to_string();
    (out.status.success() && !s.is_empty()).then_some(s)
}

/// `git describe --always --dirty` of the working directory, else of the
/// source tree this binary was built from, else `"unknown"`.
pub fn git_describe() -> String {
    describe_in(None)
        .or_else(|| describe_in(Some(Path::new(env!("CARGO_MANIFEST_DIR")))))
        .unwrap_or_else(|| "unknown".into())
}

/// Run `body` and write the manifest to `dir` whatever the outcome.
pub fn with_manifest<F>(command: &str, params: &Params, dir: &Path, body: F) -> LabResult<Manifest>
where
    F: FnOnce() -> LabResult<Vec<PathBuf>>,
{
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let clock = Instant::now();
    let result = body();
    let (status, error, outputs) = match &result {
        Ok(out) => ("ok".to_string(), None, out.clone()),
        Err(e) => ("failed".to_string(), Some(e.to_string()), Vec::new()),
    };
    let manifest = Manifest {
        command: command.into(),
        config: params.clone(),
        version: env!("CARGO_PKG_VERSION").into(),
        git_describe: git_describe(),
        seed: params.seed(),
        workers: params.workers(),
        started_unix,
        wall_time_s: clock.elapsed().as_secs_f64(),
        status,
        error,
        outputs,
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    result.map(|_| manifest)
}
