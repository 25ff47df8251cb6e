//! Bond percolation on periodic lattices with winding detection.
//!
//! Clusters are tracked by union-find with relative displacements measured in
//! units of the two torus translations, so a bond that closes a loop reveals
//! the loop's winding vector directly. Threshold estimates use the
//! Newman–Ziff scheme (bonds added in random order, first wrapping time
//! recorded) followed by binomial convolution onto a grid of bond
//! probabilities.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::Direction;
use crate::rng::stream;

/// Periodic lattice families available for standalone sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "lowercase"))]
pub enum GraphKind {
    Kagome,
    Hexagonal,
    Triangular,
    Square,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Kagome => "kagome",
            GraphKind::Hexagonal => "hexagonal",
            GraphKind::Triangular => "triangular",
            GraphKind::Square => "square",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "kagome" => Ok(GraphKind::Kagome),
            "hexagonal" | "honeycomb" => Ok(GraphKind::Hexagonal),
            "triangular" => Ok(GraphKind::Triangular),
            "square" => Ok(GraphKind::Square),
            other => Err(Error::InvalidParameter(alloc::format!("unknown lattice kind {other:?}"))),
        }
    }

    pub fn degree(self) -> usize {
        match self {
            GraphKind::Kagome | GraphKind::Square => 4,
            GraphKind::Hexagonal => 3,
            GraphKind::Triangular => 6,
        }
    }

    /// Known bond percolation threshold.
    pub fn exact_threshold(self) -> f64 {
        match self {
            GraphKind::Kagome => 0.524_404_99,
            GraphKind::Hexagonal => 1.0 - 2.0 * libm::sin(core::f64::consts::PI / 18.0),
            GraphKind::Triangular => 2.0 * libm::sin(core::f64::consts::PI / 18.0),
            GraphKind::Square => 0.5,
        }
    }
}

/// A bond from `a` to the copy of `b` displaced by `shift` torus translations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub shift: [i32; 2],
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PercolationGraph {
    pub kind: GraphKind,
    pub num_nodes: usize,
    pub bonds: Vec<Bond>,
}

#[inline]
fn wrap(v: i64, l: usize) -> (usize, i32) {
    let l = l as i64;
    (v.rem_euclid(l) as usize, v.div_euclid(l) as i32)
}

impl PercolationGraph {
    /// Full `L × L`-cell lattice with every bond present.
    pub fn full(kind: GraphKind, l: usize) -> Result<Self> {
        if l < 2 {
            return Err(Error::InvalidParameter(alloc::format!("percolation lattice needs L >= 2, got {l}")));
        }
        let cell = |x: i64, y: i64| -> (usize, [i32; 2]) {
            let (cx, sx) = wrap(x, l);
            let (cy, sy) = wrap(y, l);
            (cx * l + cy, [sx, sy])
        };
        let mut bonds = Vec::new();
        let mut push = |a: usize, b: usize, shift: [i32; 2]| bonds.push(Bond { a, b, shift, present: true });
        let per_cell = match kind {
            GraphKind::Square | GraphKind::Triangular => 1,
            GraphKind::Hexagonal => 2,
            GraphKind::Kagome => 3,
        };
        for x in 0..l as i64 {
            for y in 0..l as i64 {
                let (c, _) = cell(x, y);
                let site = |cell_index: usize, s: usize| cell_index * per_cell + s;
                match kind {
                    GraphKind::Square => {
                        for (dx, dy) in [(1, 0), (0, 1)] {
                            let (d, sh) = cell(x + dx, y + dy);
                            push(c, d, sh);
                        }
                    }
                    GraphKind::Triangular => {
                        for (dx, dy) in [(1, 0), (0, 1), (-1, 1)] {
                            let (d, sh) = cell(x + dx, y + dy);
                            push(c, d, sh);
                        }
                    }
                    GraphKind::Hexagonal => {
                        for (dx, dy) in [(0, 0), (-1, 0), (0, -1)] {
                            let (d, sh) = cell(x + dx, y + dy);
                            push(site(c, 0), site(d, 1), sh);
                        }
                    }
                    GraphKind::Kagome => {
                        push(site(c, 0), site(c, 1), [0, 0]);
                        push(site(c, 1), site(c, 2), [0, 0]);
                        push(site(c, 2), site(c, 0), [0, 0]);
                        let (d, sh) = cell(x + 1, y);
                        push(site(c, 1), site(d, 0), sh);
                        let (d, sh) = cell(x, y + 1);
                        push(site(c, 2), site(d, 0), sh);
                        let (d, sh) = cell(x - 1, y + 1);
                        push(site(c, 2), site(d, 1), sh);
                    }
                }
            }
        }
        Ok(Self { kind, num_nodes: l * l * per_cell, bonds })
    }

    pub fn present_bonds(&self) -> usize {
        self.bonds.iter().filter(|b| b.present).count()
    }

    /// Node degrees counting every bond, present or not.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.num_nodes];
        for b in &self.bonds {
            deg[b.a] += 1;
            deg[b.b] += 1;
        }
        deg
    }
}

/// Each bond of the `L × L` lattice present independently with probability `p_bond`.
pub fn sample<R: Rng + ?Sized>(kind: GraphKind, l: usize, p_bond: f64, rng: &mut R) -> Result<PercolationGraph> {
    if !(0.0..=1.0).contains(&p_bond) {
        return Err(Error::InvalidParameter(alloc::format!("p_bond = {p_bond} outside [0, 1]")));
    }
    let mut g = PercolationGraph::full(kind, l)?;
    for b in &mut g.bonds {
        b.present = rng.gen::<f64>() < p_bond;
    }
    Ok(g)
}

/// Winding lattice of one cluster: rank and, for rank one, its primitive direction.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Winding {
    rank: u8,
    dir: [i64; 2],
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

impl Winding {
    fn add(&mut self, w: [i64; 2]) {
        if w == [0, 0] || self.rank == 2 {
            return;
        }
        if self.rank == 0 {
            let g = gcd(w[0], w[1]);
            let mut d = [w[0] / g, w[1] / g];
            if d[0] < 0 || (d[0] == 0 && d[1] < 0) {
                d = [-d[0], -d[1]];
            }
            self.dir = d;
            self.rank = 1;
        } else if self.dir[0] * w[1] - self.dir[1] * w[0] != 0 {
            self.rank = 2;
        }
    }

    fn merge(&mut self, other: Winding) {
        match other.rank {
            0 => {}
            1 => self.add(other.dir),
            _ => self.rank = 2,
        }
    }
}

/// Union-find over nodes with displacement tracking.
#[derive(Debug, Clone)]
pub struct Clusters {
    parent: Vec<usize>,
    offset: Vec<[i64; 2]>,
    size: Vec<usize>,
    winding: Vec<Winding>,
    components: usize,
}

impl Clusters {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            offset: vec![[0, 0]; n],
            size: vec![1; n],
            winding: vec![Winding::default(); n],
            components: n,
        }
    }

    /// Root of `x` and the displacement of `x` relative to it.
    pub fn find(&mut self, x: usize) -> (usize, [i64; 2]) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // compress: accumulate offsets from the top of the path downward
        let mut acc = [0i64; 2];
        for &node in path.iter().rev() {
            acc = [acc[0] + self.offset[node][0], acc[1] + self.offset[node][1]];
            self.offset[node] = acc;
            self.parent[node] = r;
        }
        (r, if x == r { [0, 0] } else { self.offset[x] })
    }

    /// Add a bond; returns `true` if it merged two clusters.
    pub fn union(&mut self, a: usize, b: usize, shift: [i32; 2]) -> bool {
        let (ra, oa) = self.find(a);
        let (rb, ob) = self.find(b);
        let d = [oa[0] + shift[0] as i64 - ob[0], oa[1] + shift[1] as i64 - ob[1]];
        if ra == rb {
            self.winding[ra].add(d);
            return false;
        }
        // pos(rb) = pos(ra) + d
        let (big, small, off) = if self.size[ra] >= self.size[rb] { (ra, rb, d) } else { (rb, ra, [-d[0], -d[1]]) };
        self.parent[small] = big;
        self.offset[small] = off;
        self.size[big] += self.size[small];
        let w = self.winding[small];
        self.winding[big].merge(w);
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }

    fn root_winding(&mut self, x: usize) -> Winding {
        let (r, _) = self.find(x);
        self.winding[r]
    }
}

/// Wrapping summary of a bond configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpanResult {
    /// Some cluster winds with a nonzero component along the first torus translation.
    pub x: bool,
    /// Some cluster winds with a nonzero component along the second torus translation.
    pub z: bool,
    /// Largest winding rank over clusters (0, 1 or 2).
    pub rank: u8,
    /// Homology class mod 2 of the winding when the maximal rank is 1.
    pub class: Option<Direction>,
}

fn class_of(dir: [i64; 2]) -> Option<Direction> {
    match (dir[0].rem_euclid(2), dir[1].rem_euclid(2)) {
        (1, 0) => Some(Direction::X),
        (0, 1) => Some(Direction::Z),
        (1, 1) => Some(Direction::XZ),
        _ => None,
    }
}

/// Union-find pass over the present bonds.
pub fn spans(graph: &PercolationGraph) -> SpanResult {
    let mut uf = Clusters::new(graph.num_nodes);
    for b in graph.bonds.iter().filter(|b| b.present) {
        uf.union(b.a, b.b, b.shift);
    }
    let mut out = SpanResult { x: false, z: false, rank: 0, class: None };
    for v in 0..graph.num_nodes {
        if uf.parent[v] != v {
            continue;
        }
        let w = uf.winding[v];
        match w.rank {
            0 => {}
            1 => {
                out.x |= w.dir[0] != 0;
                out.z |= w.dir[1] != 0;
                if out.rank < 1 {
                    out.rank = 1;
                    out.class = class_of(w.dir);
                }
            }
            _ => {
                out.x = true;
                out.z = true;
                out.rank = 2;
                out.class = None;
            }
        }
    }
    out
}

/// Number of clusters formed by the present bonds.
pub fn cluster_count(graph: &PercolationGraph) -> usize {
    let mut uf = Clusters::new(graph.num_nodes);
    for b in graph.bonds.iter().filter(|b| b.present) {
        uf.union(b.a, b.b, b.shift);
    }
    uf.components()
}

/// For one random bond ordering, the number of bonds present when a cluster
/// first wraps along the first torus translation (`None` if it never does).
pub fn first_wrap_time<R: Rng + ?Sized>(graph: &PercolationGraph, rng: &mut R) -> Option<usize> {
    let mut order: Vec<usize> = (0..graph.bonds.len()).collect();
    order.shuffle(rng);
    let mut uf = Clusters::new(graph.num_nodes);
    for (k, &i) in order.iter().enumerate() {
        let b = graph.bonds[i];
        if !uf.union(b.a, b.b, b.shift) {
            let w = uf.root_winding(b.a);
            if w.rank == 2 || (w.rank == 1 && w.dir[0] != 0) {
                return Some(k + 1);
            }
        }
    }
    None
}

/// `P(Binomial(n, p) >= k)` for every `k` in `0..=n`, as a suffix sum of the pmf.
fn binomial_survival(n: usize, p: f64) -> Vec<f64> {
    let mut pmf = vec![0.0; n + 1];
    if p <= 0.0 {
        pmf[0] = 1.0;
    } else if p >= 1.0 {
        pmf[n] = 1.0;
    } else {
        let mean = n as f64 * p;
        let sd = libm::sqrt(n as f64 * p * (1.0 - p));
        let lo = libm::floor(mean - 12.0 * sd - 2.0).max(0.0) as usize;
        let hi = (libm::ceil(mean + 12.0 * sd + 2.0) as usize).min(n);
        let ln_n = libm::lgamma(n as f64 + 1.0);
        let (lp, lq) = (libm::log(p), libm::log1p(-p));
        for k in lo..=hi {
            let ln = ln_n - libm::lgamma(k as f64 + 1.0) - libm::lgamma((n - k) as f64 + 1.0) + k as f64 * lp + (n - k) as f64 * lq;
            pmf[k] = libm::exp(ln);
        }
    }
    let mut surv = vec![0.0; n + 2];
    for k in (0..=n).rev() {
        surv[k] = surv[k + 1] + pmf[k];
    }
    surv.truncate(n + 1);
    surv
}

/// Wrapping probability curve of one lattice size evaluated on a grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpanningCurve {
    pub kind: GraphKind,
    pub l: usize,
    pub samples: usize,
    pub p: Vec<f64>,
    pub probability: Vec<f64>,
    pub stderr: Vec<f64>,
}

/// Spanning probability on `grid` from first-wrap times of independent orderings.
fn curve_from_times(kind: GraphKind, l: usize, bonds: usize, times: &[Option<usize>], grid: &[f64]) -> SpanningCurve {
    let samples = times.len();
    let mut probability = Vec::with_capacity(grid.len());
    let mut stderr = Vec::with_capacity(grid.len());
    for &p in grid {
        let surv = binomial_survival(bonds, p);
        let mut s = 0.0;
        let mut s2 = 0.0;
        for t in times.iter().flatten() {
            let v = surv[*t];
            s += v;
            s2 += v * v;
        }
        let m = s / samples as f64;
        let var = (s2 / samples as f64 - m * m).max(0.0);
        probability.push(m);
        stderr.push(libm::sqrt(var / samples as f64));
    }
    SpanningCurve { kind, l, samples, p: grid.to_vec(), probability, stderr }
}

/// Monotone cubic (Fritsch–Carlson) interpolant through `(xs, ys)`.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ms: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: &[f64], ys: &[f64]) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n || xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("interpolation needs >= 2 strictly increasing abscissae".into()));
        }
        let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / (xs[k + 1] - xs[k])).collect();
        let mut ms = vec![0.0; n];
        ms[0] = delta[0];
        ms[n - 1] = delta[n - 2];
        for k in 1..n - 1 {
            ms[k] = if delta[k - 1] * delta[k] <= 0.0 { 0.0 } else { (delta[k - 1] + delta[k]) / 2.0 };
        }
        for k in 0..n - 1 {
            if delta[k] == 0.0 {
                ms[k] = 0.0;
                ms[k + 1] = 0.0;
                continue;
            }
            let a = ms[k] / delta[k];
            let b = ms[k + 1] / delta[k];
            let h = a * a + b * b;
            if h > 9.0 {
                let t = 3.0 / libm::sqrt(h);
                ms[k] = t * a * delta[k];
                ms[k + 1] = t * b * delta[k];
            }
        }
        Ok(Self { xs: xs.to_vec(), ys: ys.to_vec(), ms })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.xs.partition_point(|&v| v <= x) - 1;
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * self.ys[k]
            + (t3 - 2.0 * t2 + t) * h * self.ms[k]
            + (-2.0 * t3 + 3.0 * t2) * self.ys[k + 1]
            + (t3 - t2) * h * self.ms[k + 1]
    }
}

/// Crossing of two interpolated curves by bisection; the difference must
/// change sign on `[lo, hi]`.
pub fn crossing(a: &MonotoneCubic, b: &MonotoneCubic, lo: f64, hi: f64) -> Result<f64> {
    let f = |x: f64| a.eval(x) - b.eval(x);
    // scan for sign changes between points where the curves differ; flat
    // tails where both curves sit at 0 or 1 are skipped
    let steps = 400;
    let mut best: Option<(f64, f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..=steps {
        let x = lo + (hi - lo) * k as f64 / steps as f64;
        let v = f(x);
        if v.abs() < 1e-12 {
            continue;
        }
        if let Some((px, pv)) = prev {
            if pv * v < 0.0 {
                let slope = (a.eval(x) - a.eval(px)).abs() + (b.eval(x) - b.eval(px)).abs();
                if best.map_or(true, |(_, _, s)| slope > s) {
                    best = Some((px, x, slope));
                }
            }
        }
        prev = Some((x, v));
    }
    let Some((mut l, mut r, _)) = best else {
        return Err(Error::FitFailed("spanning curves do not cross".into()));
    };
    let fl = f(l);
    for _ in 0..80 {
        let m = 0.5 * (l + r);
        if f(m) * fl > 0.0 {
            l = m;
        } else {
            r = m;
        }
    }
    Ok(0.5 * (l + r))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdEstimate {
    pub kind: GraphKind,
    pub p_c: f64,
    pub stderr: f64,
    /// `(L1, L2, crossing)` for consecutive sizes.
    pub crossings: Vec<(usize, usize, f64)>,
    pub curves: Vec<SpanningCurve>,
}

/// Threshold from crossings of wrapping-probability curves across sizes.
///
/// The estimate is the crossing of the two largest sizes; its uncertainty
/// combines a bootstrap over orderings with the drift between successive
/// crossings.
pub fn threshold_estimate(kind: GraphKind, sizes: &[usize], samples: usize, seed: u64) -> Result<ThresholdEstimate> {
    let mut sizes: Vec<usize> = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::InvalidParameter("threshold estimate needs at least two sizes".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidParameter("threshold estimate needs at least two samples".into()));
    }
    let mut all_times = Vec::new();
    let mut graphs = Vec::new();
    for (si, &l) in sizes.iter().enumerate() {
        let g = PercolationGraph::full(kind, l)?;
        let times: Vec<Option<usize>> = (0..samples)
            .map(|s| {
                let mut rng = stream(seed ^ ((si as u64) << 48), s as u64);
                first_wrap_time(&g, &mut rng)
            })
            .collect();
        all_times.push(times);
        graphs.push(g);
    }
    threshold_from_times(kind, &sizes, &graphs.iter().map(|g| g.bonds.len()).collect::<Vec<_>>(), &all_times, seed)
}

/// Threshold analysis given first-wrap times per size (for callers that
/// generate the orderings themselves, e.g. in parallel).
pub fn threshold_from_times(kind: GraphKind, sizes: &[usize], bonds: &[usize], times: &[Vec<Option<usize>>], seed: u64) -> Result<ThresholdEstimate> {
    let grid: Vec<f64> = (0..=400).map(|k| k as f64 / 400.0).collect();
    let curves: Vec<SpanningCurve> = sizes.iter().zip(bonds).zip(times).map(|((&l, &nb), t)| curve_from_times(kind, l, nb, t, &grid)).collect();
    let crossings_of = |curves: &[Vec<f64>]| -> Result<Vec<f64>> {
        let interp: Vec<MonotoneCubic> = curves.iter().map(|c| MonotoneCubic::new(&grid, c)).collect::<Result<_>>()?;
        (0..interp.len() - 1).map(|k| crossing(&interp[k], &interp[k + 1], 0.0, 1.0)).collect()
    };
    let base = crossings_of(&curves.iter().map(|c| c.probability.clone()).collect::<Vec<_>>())?;
    let p_c = *base.last().expect("two sizes");

    // bootstrap over orderings for the statistical part
    let mut rng = stream(seed ^ 0xb007_57a9, 0);
    let reps = 40;
    let mut boot = Vec::with_capacity(reps);
    for _ in 0..reps {
        let resampled: Vec<Vec<f64>> = sizes
            .iter()
            .zip(bonds)
            .zip(times)
            .map(|((&l, &nb), t)| {
                let pick: Vec<Option<usize>> = (0..t.len()).map(|_| t[rng.gen_range(0..t.len())]).collect();
                curve_from_times(kind, l, nb, &pick, &grid).probability
            })
            .collect();
        if let Ok(c) = crossings_of(&resampled) {
            boot.push(*c.last().expect("two sizes"));
        }
    }
    let stat = if boot.len() > 1 {
        let m = boot.iter().sum::<f64>() / boot.len() as f64;
        libm::sqrt(boot.iter().map(|b| (b - m) * (b - m)).sum::<f64>() / (boot.len() - 1) as f64)
    } else {
        0.0
    };
    let drift = if base.len() >= 2 { (base[base.len() - 1] - base[base.len() - 2]).abs() / 2.0 } else { 0.0 };
    let stderr = libm::sqrt(stat * stat + drift * drift);
    let crossings = (0..base.len()).map(|k| (sizes[k], sizes[k + 1], base[k])).collect();
    Ok(ThresholdEstimate { kind, p_c, stderr, crossings, curves })
}

impl core::fmt::Display for ThresholdEstimate {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} p_c = {:.4} ± {:.4}", self.kind.name(), self.p_c, self.stderr)
    }
}

/// Human-readable label for the wrapping class used in reports.
pub fn describe(span: &SpanResult) -> String {
    match (span.rank, span.class) {
        (2, _) => "both".into(),
        (1, Some(d)) => alloc::format!("{}", d.name()),
        _ => "none".into(),
    }
}
