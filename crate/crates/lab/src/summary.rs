//! Reductions of realization records to per-point statistics.

use serde::{Deserialize, Serialize};

use floquet_core::observables::{decay_rate, fourier_components, DecayFit, TimeSeries};
use floquet_core::protocol::{ProtocolConfig, RunRecord};
use floquet_core::Result;

/// Sample mean and standard error of the mean.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let nf = n as f64;
    let m = values.iter().sum::<f64>() / nf;
    if n == 1 {
        return (m, 0.0);
    }
    let var = values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (nf - 1.0);
    (m, (var / nf).sqrt())
}

/// Mean and standard error of a per-realization scalar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn of(values: &[f64]) -> Self {
        let (mean, stderr) = mean_stderr(values);
        Self { mean, stderr }
    }
}

/// Fourier components with errors from the spread over realizations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fourier {
    pub g0: Estimate,
    pub gpi: Estimate,
}

fn fourier_of(rows: &[Vec<u8>]) -> Result<Fourier> {
    let mut g0 = Vec::with_capacity(rows.len());
    let mut gpi = Vec::with_capacity(rows.len());
    for row in rows {
        let series: Vec<f64> = row.iter().map(|&v| v as f64).collect();
        let (a, b) = fourier_components(&series)?;
        g0.push(a);
        gpi.push(b);
    }
    Ok(Fourier { g0: Estimate::of(&g0), gpi: Estimate::of(&gpi) })
}

/// Everything derived from the realizations of one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub config: ProtocolConfig,
    pub g: TimeSeries,
    pub fourier: Fourier,
    pub decay: Option<DecayFit>,
    pub corrected_g: Option<TimeSeries>,
    pub corrected_fourier: Option<Fourier>,
    pub tee: Option<Estimate>,
    pub tee_values: Vec<i64>,
}

impl PointSummary {
    pub fn from_records(config: &ProtocolConfig, records: &[RunRecord]) -> Result<Self> {
        let rows: Vec<Vec<u8>> = records.iter().map(|r| r.g.clone()).collect();
        let g = TimeSeries::from_binary(&rows)?;
        let fourier = fourier_of(&rows)?;
        let decay = decay_rate(&g).ok();
        let (corrected_g, corrected_fourier) = if records.iter().all(|r| !r.corrected_g.is_empty()) && !records.is_empty() {
            let rows: Vec<Vec<u8>> = records.iter().map(|r| r.corrected_g.clone()).collect();
            (Some(TimeSeries::from_binary(&rows)?), Some(fourier_of(&rows)?))
        } else {
            (None, None)
        };
        let tee_values: Vec<i64> = records.iter().filter_map(|r| r.tee).collect();
        let tee = (!tee_values.is_empty()).then(|| Estimate::of(&tee_values.iter().map(|&v| v as f64).collect::<Vec<_>>()));
        Ok(Self { config: config.clone(), g, fourier, decay, corrected_g, corrected_fourier, tee, tee_values })
    }
}
