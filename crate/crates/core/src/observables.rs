//! Scalar diagnostics: Fourier order parameters, tripartite entanglement,
//! decay-rate fits and ancilla purification.

use alloc::format;
use alloc::vec::Vec;
use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Color, HoneycombLattice};
use crate::protocol::{ProtocolConfig, Simulator};
use crate::tableau::StabilizerState;

/// Realization average of a per-cycle series.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TimeSeries {
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
    pub samples: usize,
}

impl TimeSeries {
    /// Mean and standard error over rows of equal length.
    pub fn from_rows<I, R>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[f64]>,
    {
        let mut sum: Vec<f64> = Vec::new();
        let mut sq: Vec<f64> = Vec::new();
        let mut n = 0usize;
        for row in rows {
            let row = row.as_ref();
            if n == 0 {
                sum = alloc::vec![0.0; row.len()];
                sq = alloc::vec![0.0; row.len()];
            } else if row.len() != sum.len() {
                return Err(Error::InvalidParameter(format!("series lengths differ: {} vs {}", row.len(), sum.len())));
            }
            for (k, &v) in row.iter().enumerate() {
                sum[k] += v;
                sq[k] += v * v;
            }
            n += 1;
        }
        if n == 0 || sum.is_empty() {
            return Err(Error::InvalidParameter("empty series".into()));
        }
        let nf = n as f64;
        let values: Vec<f64> = sum.iter().map(|s| s / nf).collect();
        let stderr = values
            .iter()
            .zip(&sq)
            .map(|(m, s)| if n > 1 { libm::sqrt(((s - nf * m * m) / (nf - 1.0)).max(0.0) / nf) } else { 0.0 })
            .collect();
        Ok(Self { values, stderr, samples: n })
    }

    /// Same as [`from_rows`](Self::from_rows) for 0/1 readouts.
    pub fn from_binary<I, R>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = R>,
        R: AsRef<[u8]>,
    {
        let rows: Vec<Vec<f64>> = rows.into_iter().map(|r| r.as_ref().iter().map(|&v| v as f64).collect()).collect();
        Self::from_rows(&rows)
    }

    /// Largest time index `T`.
    pub fn horizon(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// `(G_0, G_π)` with `G_0 = (2/T) Σ G(t)` and `G_π = (2/T) Σ (-1)^t G(t)`, `t = 0..=T`.
pub fn fourier_components(series: &[f64]) -> Result<(f64, f64)> {
    if series.len() < 2 {
        return Err(Error::InvalidParameter("need at least two points".into()));
    }
    let t = (series.len() - 1) as f64;
    let mut g0 = 0.0;
    let mut gpi = 0.0;
    for (k, &v) in series.iter().enumerate() {
        g0 += v;
        gpi += if k % 2 == 0 { v } else { -v };
    }
    Ok((2.0 * g0 / t, 2.0 * gpi / t))
}

/// Three disjoint qubit regions.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TeePartition {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl TeePartition {
    pub fn new(a: Vec<usize>, b: Vec<usize>, c: Vec<usize>) -> Self {
        Self { a, b, c }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let mut seen = alloc::vec![false; n];
        let mut count = 0;
        for &q in self.a.iter().chain(&self.b).chain(&self.c) {
            if q >= n || seen[q] {
                return Err(Error::InvalidPartition);
            }
            seen[q] = true;
            count += 1;
        }
        if count == n {
            return Err(Error::InvalidPartition);
        }
        Ok(())
    }
}

/// `S_A + S_B + S_C - S_AB - S_BC - S_AC + S_ABC` in units of `log 2`.
pub fn tee(state: &StabilizerState, part: &TeePartition) -> Result<i64> {
    part.validate(state.num_qubits())?;
    let s = |r: &[&[usize]]| -> i64 {
        let region: Vec<usize> = r.iter().flat_map(|x| x.iter().copied()).collect();
        state.entropy_unchecked(&region) as i64
    };
    let (a, b, c) = (&part.a[..], &part.b[..], &part.c[..]);
    Ok(s(&[a]) + s(&[b]) + s(&[c]) - s(&[a, b]) - s(&[b, c]) - s(&[a, c]) + s(&[a, b, c]))
}

/// Coordinates of each lattice qubit in units of the two torus periods, in `[0, 1)`.
pub fn fractional_positions(lattice: &HoneycombLattice) -> Vec<[f64; 2]> {
    let [p, q] = lattice.periods();
    let det = p[0] * q[1] - p[1] * q[0];
    lattice
        .qubit_positions()
        .iter()
        .map(|r| {
            let u = (r[0] * q[1] - r[1] * q[0]) / det;
            let v = (p[0] * r[1] - p[1] * r[0]) / det;
            [u - libm::floor(u), v - libm::floor(v)]
        })
        .collect()
}

/// Three of four parallel cylinders tiling the torus: the period coordinate
/// `u` is cut into quarters and `A`, `B`, `C` are the first three.
pub fn default_partition(lattice: &HoneycombLattice) -> Result<TeePartition> {
    let mut part = TeePartition::new(Vec::new(), Vec::new(), Vec::new());
    for (q, [u, _]) in fractional_positions(lattice).into_iter().enumerate() {
        match (u * 4.0) as usize {
            0 => part.a.push(q),
            1 => part.b.push(q),
            2 => part.c.push(q),
            _ => {}
        }
    }
    if part.a.is_empty() || part.b.is_empty() || part.c.is_empty() {
        return Err(Error::InvalidPartition);
    }
    Ok(part)
}

/// Exponential decay rate of `G̃(2t) = G(2t) + G(2t-1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayFit {
    pub beta: f64,
    pub stderr: f64,
    /// Range of `t` (in `G̃(2t)`) used by the fit.
    pub window: (usize, usize),
}

/// Cycles dropped at the start of a decay fit.
pub const DECAY_TRANSIENT: usize = 4;

/// Fit `G̃(2t) ∝ e^{-2βt}` by least squares on `log G̃`. The window starts
/// after the first [`DECAY_TRANSIENT`] cycles and stops at the first point
/// where `G̃` is below three standard errors (or nonpositive).
pub fn decay_rate(series: &TimeSeries) -> Result<DecayFit> {
    if series.horizon() < 10 {
        return Err(Error::InvalidParameter("decay fit needs T >= 10".into()));
    }
    let (g, se) = (&series.values, &series.stderr);
    let first = DECAY_TRANSIENT.div_ceil(2).max(1);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut last = first;
    for t in first..=series.horizon() / 2 {
        let v = g[2 * t] + g[2 * t - 1];
        let e = libm::sqrt(se[2 * t] * se[2 * t] + se[2 * t - 1] * se[2 * t - 1]);
        if v <= 0.0 || v < 3.0 * e {
            break;
        }
        xs.push(2.0 * t as f64);
        ys.push(libm::log(v));
        last = t;
    }
    if xs.len() < 3 {
        return Err(Error::FitFailed(format!("only {} usable points in the decay window", xs.len())));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| {
        let r = y - my - slope * (x - mx);
        r * r
    }).sum();
    let stderr = if xs.len() > 2 { libm::sqrt(rss / (n - 2.0) / sxx) } else { 0.0 };
    Ok(DecayFit { beta: (-slope).max(0.0), stderr, window: (first, last) })
}

/// Scramble the lattice plus `cfg.ancillas` ancillas with `gates` random
/// 4-qubit Cliffords on random qubits, then run the schedule; returns the
/// ancilla entropy after scrambling and after every cycle.
pub fn purification_run<R: Rng + ?Sized>(lattice: &HoneycombLattice, cfg: &ProtocolConfig, gates: usize, rng: &mut R) -> Result<Vec<usize>> {
    if cfg.ancillas == 0 {
        return Err(Error::InvalidParameter("purification needs at least one ancilla".into()));
    }
    let mut sim = Simulator::for_config(lattice, cfg)?;
    let n = lattice.num_qubits();
    let total = n + cfg.ancillas;
    if total < 4 {
        return Err(Error::InvalidParameter("scrambling needs at least four qubits".into()));
    }
    let ancillas: Vec<usize> = (n..total).collect();
    for _ in 0..gates {
        let idx = sample(rng, total, 4);
        let targets = [idx.index(0), idx.index(1), idx.index(2), idx.index(3)];
        sim.state_mut().random_clifford_4q(targets, rng)?;
    }
    let mut out = Vec::with_capacity(cfg.cycles + 1);
    out.push(sim.state().entropy_unchecked(&ancillas));
    for _ in 0..cfg.cycles {
        sim.cycle(cfg.p_m, cfg.p_s, cfg.miss_mode, rng)?;
        debug_assert_eq!(sim.last_round(), Some(Color::Red));
        out.push(sim.state().entropy_unchecked(&ancillas));
    }
    Ok(out)
}

/// Scrambling budget `8 L³`.
pub fn scrambling_gates(l: usize) -> usize {
    8 * l * l * l
}
