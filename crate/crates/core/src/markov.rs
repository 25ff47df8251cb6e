//! Six-configuration Markov model of the logical dynamics.
//!
//! Two logical qubits are always encoded in one of six pairs of stabilized
//! loops. Each cycle applies one of five channels, with probabilities that do
//! not depend on the current pair; the pair then moves according to
//! [`TransferMatrix::build`].

use alloc::format;
use alloc::vec::Vec;
use nalgebra::Matrix6;

use crate::error::{Error, Result};
use crate::lattice::HoneycombLattice;
use crate::protocol::{one_cycle_channel, Channel, MissMode};
use crate::rng;

/// Configuration basis, in matrix order.
pub const CONFIGURATIONS: [&str; 6] = ["(m_x,m_z)", "(e_x,e_z)", "(m_x,e_x)", "(m_z,e_z)", "(f_x,f_z)", "(m_xz,e_xz)"];

/// Empirical channel frequencies, ordered as [`Channel::ALL`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ChannelProbabilities {
    pub p: [f64; 5],
    pub stderr: [f64; 5],
    pub samples: usize,
}

impl ChannelProbabilities {
    pub fn from_counts(counts: [usize; 5]) -> Result<Self> {
        let n: usize = counts.iter().sum();
        if n == 0 {
            return Err(Error::InvalidParameter("no samples".into()));
        }
        let nf = n as f64;
        let mut p = [0.0; 5];
        let mut stderr = [0.0; 5];
        for k in 0..5 {
            p[k] = counts[k] as f64 / nf;
            stderr[k] = libm::sqrt(p[k] * (1.0 - p[k]) / nf);
        }
        Ok(Self { p, stderr, samples: n })
    }
}

/// Column-stochastic transition matrix over [`CONFIGURATIONS`]:
/// `s[to][from]`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransferMatrix {
    pub s: [[f64; 6]; 6],
    pub p: [f64; 5],
}

impl TransferMatrix {
    /// Matrix for channel probabilities `p` (identity, e-m exchange, measure
    /// `f_x`, `f_z`, `f_xz`). Probability mass that does not change a
    /// configuration, including `1 - Σp`, stays on it.
    pub fn build(p: [f64; 5]) -> Result<Self> {
        let total: f64 = p.iter().sum();
        if p.iter().any(|&v| !(0.0..=1.0).contains(&v)) || total > 1.0 + 1e-9 {
            return Err(Error::InvalidParameter(format!("channel probabilities {p:?} are not a sub-distribution")));
        }
        let [p1, p2, p3, p4, p5] = p;
        let rest = (1.0 - total).max(0.0);
        let mut s = [[0.0; 6]; 6];
        // (m_x,m_z) and (e_x,e_z) swap under exchange
        for (own, other) in [(0, 1), (1, 0)] {
            s[own][own] = p1 + rest;
            s[other][own] = p2;
            s[2][own] = p3;
            s[3][own] = p4;
            s[5][own] = p5;
        }
        // (m_x,e_x): exchange and f_x leave it; f_z or f_xz complete (f_x,f_z)
        s[2][2] = p1 + p2 + p3 + rest;
        s[4][2] = p4 + p5;
        s[3][3] = p1 + p2 + p4 + rest;
        s[4][3] = p3 + p5;
        s[4][4] = 1.0;
        s[5][5] = p1 + p2 + p5 + rest;
        s[4][5] = p3 + p4;
        Ok(Self { s, p })
    }

    fn matrix(&self) -> Matrix6<f64> {
        Matrix6::from_fn(|r, c| self.s[r][c])
    }

    fn step(&self, v: &[f64; 6]) -> [f64; 6] {
        let mut next = [0.0; 6];
        for (r, row) in self.s.iter().enumerate() {
            next[r] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        next
    }

    /// Distribution over configurations after `t` cycles from `(m_x, m_z)`.
    pub fn evolve(&self, t: usize) -> [f64; 6] {
        let mut v = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for _ in 0..t {
            v = self.step(&v);
        }
        v
    }

    /// `G(t) = (S^t)_{(m_x,m_z),(m_x,m_z)} + (S^t)_{(m_x,e_x),(m_x,m_z)}`.
    pub fn predict_g(&self, t: usize) -> f64 {
        let v = self.evolve(t);
        v[0] + v[2]
    }

    /// `G(0..=horizon)`.
    pub fn predict_series(&self, horizon: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(horizon + 1);
        let mut v = [1.0, 0.0, 0.0, 0.0, 0.0, 0.0];
        for _ in 0..=horizon {
            out.push(v[0] + v[2]);
            v = self.step(&v);
        }
        out
    }

    /// Eigenvalues `(re, im)` by decreasing modulus, ties by decreasing real part.
    pub fn eigenvalues(&self) -> Vec<(f64, f64)> {
        let ev = self.matrix().complex_eigenvalues();
        let mut out: Vec<(f64, f64)> = ev.iter().map(|z| (z.re, z.im)).collect();
        out.sort_by(|a, b| {
            let (ma, mb) = (libm::hypot(a.0, a.1), libm::hypot(b.0, b.1));
            mb.partial_cmp(&ma).unwrap_or(core::cmp::Ordering::Equal).then(b.0.partial_cmp(&a.0).unwrap_or(core::cmp::Ordering::Equal))
        });
        out
    }

    /// `-log |λ₃|`, the slowest decay of `G` toward the absorbing configuration.
    pub fn decay_rate(&self) -> f64 {
        let ev = self.eigenvalues();
        let m = libm::hypot(ev[2].0, ev[2].1);
        if m <= 0.0 {
            f64::INFINITY
        } else {
            -libm::log(m)
        }
    }
}

/// Channel frequencies over `samples` independent single cycles; sample `k`
/// uses stream `k` of `seed`.
pub fn estimate(lattice: &HoneycombLattice, p_m: f64, samples: usize, seed: u64) -> Result<ChannelProbabilities> {
    let mut counts = [0usize; 5];
    for k in 0..samples {
        let mut r = rng::stream(seed, k as u64);
        let (ch, _) = one_cycle_channel(lattice, p_m, MissMode::BlueGreen, &mut r)?;
        counts[ch.index()] += 1;
    }
    ChannelProbabilities::from_counts(counts)
}

/// Tally channel labels.
pub fn count_channels(labels: impl IntoIterator<Item = Channel>) -> [usize; 5] {
    let mut counts = [0usize; 5];
    for c in labels {
        counts[c.index()] += 1;
    }
    counts
}
