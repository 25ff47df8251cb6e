//! Experiment parameters shared by all subcommands. The same structure is read
//! from a JSON config file and from command-line flags; flags win.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use floquet_core::protocol::{MissMode, ProtocolConfig, DEFAULT_QUBIT_LIMIT};

use crate::error::{LabError, LabResult};
use crate::io::read_json;
use crate::runner::default_workers;

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// JSON config file; flags given on the command line override its entries.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Lattice sizes (multiples of 3), comma separated.
    #[arg(long = "L", value_delimiter = ',')]
    #[serde(rename = "L")]
    pub l: Option<Vec<usize>>,
    /// Missing-measurement probabilities.
    #[arg(long, value_delimiter = ',')]
    pub pm: Option<Vec<f64>>,
    /// Single-qubit replacement probabilities.
    #[arg(long, value_delimiter = ',')]
    pub ps: Option<Vec<f64>>,
    /// Rounds that can miss: blue_green, green_only or all_rounds.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub cycles: Option<usize>,
    #[arg(long)]
    pub realizations: Option<usize>,
    /// Strip width of the corrected readout (odd).
    #[arg(long)]
    pub d: Option<usize>,
    /// Also record the corrected readout.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub corrected: Option<bool>,
    #[arg(long)]
    pub ancillas: Option<usize>,
    /// Scrambling gates before purification (default 8 L³).
    #[arg(long)]
    pub gates: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo samples (percolation orderings or single-cycle samples).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Percolation lattice: kagome, hexagonal, triangular or square.
    #[arg(long)]
    pub kind: Option<String>,
    /// Input CSV for `collapse`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Collapse ansatz: plain, power or one_plus_power.
    #[arg(long)]
    pub ansatz: Option<String>,
    #[arg(long)]
    pub bootstrap: Option<usize>,
    #[arg(long)]
    pub qubit_limit: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default from FLOQUET_WORKERS, else all cores).
    #[arg(long)]
    pub workers: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $over:ident; $($f:ident),*) => {
        Params { config: $over.config.or($base.config), $($f: $over.$f.or($base.$f)),* }
    };
}

impl Params {
    /// `over` on top of `self`.
    pub fn overlay(self, over: Params) -> Params {
        let base = self;
        overlay!(base, over; l, pm, ps, mode, cycles, realizations, d, corrected, ancillas, gates, seed, samples, kind, input, ansatz, bootstrap, qubit_limit, out, workers)
    }

    /// Flags merged over the config file they name, if any.
    pub fn resolve(self) -> LabResult<Params> {
        match &self.config {
            Some(path) => {
                let file: Params = read_json(path)?;
                Ok(file.overlay(self))
            }
            None => Ok(self),
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn workers(&self) -> usize {
        self.workers.filter(|&w| w > 0).unwrap_or_else(default_workers)
    }

    pub fn sizes(&self) -> LabResult<Vec<usize>> {
        nonempty("L", self.l.clone())
    }

    pub fn p_m(&self) -> LabResult<Vec<f64>> {
        probabilities("pm", nonempty("pm", self.pm.clone())?)
    }

    pub fn p_s(&self) -> LabResult<Vec<f64>> {
        probabilities("ps", self.ps.clone().unwrap_or_else(|| vec![0.0]))
    }

    pub fn mode(&self) -> LabResult<MissMode> {
        match &self.mode {
            Some(m) => MissMode::parse(m).map_err(|e| LabError::Config(e.to_string())),
            None => Ok(MissMode::BlueGreen),
        }
    }

    /// Protocol configuration for one point; the seed is the caller's.
    pub fn protocol(&self, l: usize, p_m: f64, p_s: f64, seed: u64) -> LabResult<ProtocolConfig> {
        let mode = self.mode()?;
        let mut cfg = ProtocolConfig::new(l, p_m, p_s);
        cfg.miss_mode = mode;
        cfg.cycles = self.cycles.unwrap_or(100);
        cfg.realizations = self.realizations.unwrap_or(100);
        cfg.d = self.d.unwrap_or_else(|| mode.default_strip_width());
        cfg.ancillas = self.ancillas.unwrap_or(0);
        cfg.seed = seed;
        cfg.qubit_limit = self.qubit_limit.unwrap_or(DEFAULT_QUBIT_LIMIT);
        cfg.validate().map_err(|e| LabError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn input(&self) -> LabResult<&Path> {
        self.input.as_deref().ok_or_else(|| LabError::Config("--input is required".into()))
    }
}

fn nonempty<T>(name: &str, v: Option<Vec<T>>) -> LabResult<Vec<T>> {
    match v {
        Some(v) if !v.is_empty() => Ok(v),
        _ => Err(LabError::Config(format!("--{name} is required"))),
    }
}

fn probabilities(name: &str, v: Vec<f64>) -> LabResult<Vec<f64>> {
    if let Some(bad) = v.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(LabError::Config(format!("--{name} value {bad} is not a probability")));
    }
    Ok(v)
}
