//! Finite-size-scaling data collapse.
//!
//! Points `(p, L, y)` are mapped to `x = (p - p_c) L^{1/ν}` and a rescaled
//! value per [`Ansatz`]. The collapse quality follows Houdayer and Hartmann:
//! every point is compared with a local quadratic fit through the points of
//! the other sizes that bracket it in `x`, and the quality is the mean squared
//! deviation in units of the combined variance.

use alloc::format;
use alloc::vec::Vec;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng;

/// How the value is rescaled before collapsing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize), serde(rename_all = "snake_case"))]
pub enum Ansatz {
    /// `y = f(x)`
    Plain,
    /// `y = L^ε f(x)`
    Power,
    /// `y = 1 + L^ε f(x)`
    OnePlusPower,
}

impl Ansatz {
    pub const ALL: [Ansatz; 3] = [Ansatz::Plain, Ansatz::Power, Ansatz::OnePlusPower];

    pub fn name(self) -> &'static str {
        match self {
            Ansatz::Plain => "plain",
            Ansatz::Power => "power",
            Ansatz::OnePlusPower => "one_plus_power",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown ansatz {s:?}")))
    }

    fn has_exponent(self) -> bool {
        self != Ansatz::Plain
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingPoint {
    pub p: f64,
    pub l: usize,
    pub y: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingDataset {
    pub points: Vec<ScalingPoint>,
    pub ansatz: Ansatz,
}

impl ScalingDataset {
    pub fn new(points: Vec<ScalingPoint>, ansatz: Ansatz) -> Result<Self> {
        let ds = Self { points, ansatz };
        ds.validate()?;
        Ok(ds)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes().len() < 2 {
            return Err(Error::FitFailed("collapse needs at least two system sizes".into()));
        }
        for pt in &self.points {
            if !(pt.sigma > 0.0) || !pt.y.is_finite() || !pt.p.is_finite() || pt.l == 0 {
                return Err(Error::InvalidParameter(format!("bad scaling point {pt:?}")));
            }
        }
        Ok(())
    }

    /// Distinct sizes, ascending.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.points.iter().map(|p| p.l).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// `(x, rescaled y, rescaled σ, L)` for every point.
    pub fn transform(&self, p_c: f64, nu: f64, eps: f64) -> Vec<(f64, f64, f64, usize)> {
        self.points
            .iter()
            .map(|pt| {
                let lf = pt.l as f64;
                let x = (pt.p - p_c) * libm::pow(lf, 1.0 / nu);
                let scale = if self.ansatz.has_exponent() { libm::pow(lf, -eps) } else { 1.0 };
                let y = match self.ansatz {
                    Ansatz::OnePlusPower => (pt.y - 1.0) * scale,
                    _ => pt.y * scale,
                };
                (x, y, pt.sigma * scale, pt.l)
            })
            .collect()
    }
}

/// Weighted least-squares polynomial through `pts` `(x, y, σ)` evaluated at
/// `x0`: returns the value and its variance.
fn local_fit(pts: &[(f64, f64, f64)], x0: f64) -> Option<(f64, f64)> {
    let degree = if pts.len() >= 4 { 2 } else if pts.len() >= 2 { 1 } else { return None };
    let k = degree + 1;
    // normal equations in the centered variable u = x - x0; value at x0 is coefficient 0
    let mut a = [[0.0f64; 3]; 3];
    let mut b = [0.0f64; 3];
    for &(x, y, s) in pts {
        let w = 1.0 / (s * s);
        let u = x - x0;
        let powers = [1.0, u, u * u];
        for r in 0..k {
            b[r] += w * powers[r] * y;
            for c in 0..k {
                a[r][c] += w * powers[r] * powers[c];
            }
        }
    }
    let inv = invert(&a, k)?;
    let value: f64 = (0..k).map(|c| inv[0][c] * b[c]).sum();
    Some((value, inv[0][0].max(0.0)))
}

fn invert(a: &[[f64; 3]; 3], k: usize) -> Option<[[f64; 3]; 3]> {
    let mut m = *a;
    let mut inv = [[0.0; 3]; 3];
    for (i, row) in inv.iter_mut().enumerate().take(k) {
        row[i] = 1.0;
    }
    for col in 0..k {
        let piv = (col..k).max_by(|&i, &j| libm::fabs(m[i][col]).partial_cmp(&libm::fabs(m[j][col])).unwrap_or(core::cmp::Ordering::Equal))?;
        let scale = m.iter().take(k).map(|r| libm::fabs(r[col])).fold(0.0, f64::max);
        if libm::fabs(m[piv][col]) <= 1e-12 * scale.max(1e-300) {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col];
        for c in 0..k {
            m[col][c] /= d;
            inv[col][c] /= d;
        }
        for r in 0..k {
            if r != col {
                let f = m[r][col];
                for c in 0..k {
                    m[r][c] -= f * m[col][c];
                    inv[r][c] -= f * inv[col][c];
                }
            }
        }
    }
    Some(inv)
}

/// Fraction of points that must have bracketing neighbors for a finite quality.
const MIN_OVERLAP: f64 = 0.3;

/// Collapse quality (lower is better); infinite when the sizes do not overlap in `x`.
pub fn quality(ds: &ScalingDataset, p_c: f64, nu: f64, eps: f64) -> f64 {
    if !(nu > 0.0) || !nu.is_finite() {
        return f64::INFINITY;
    }
    let t = ds.transform(p_c, nu, eps);
    let sizes = ds.sizes();
    // per size, points sorted by x
    let by_size: Vec<Vec<(f64, f64, f64)>> = sizes
        .iter()
        .map(|&l| {
            let mut v: Vec<(f64, f64, f64)> = t.iter().filter(|q| q.3 == l).map(|q| (q.0, q.1, q.2)).collect();
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(core::cmp::Ordering::Equal));
            v
        })
        .collect();
    let mut sum = 0.0;
    let mut used = 0usize;
    let mut nbrs = Vec::new();
    for &(x, y, s, l) in &t {
        nbrs.clear();
        for (k, &other) in sizes.iter().enumerate() {
            if other == l {
                continue;
            }
            let pts = &by_size[k];
            let idx = pts.partition_point(|q| q.0 < x);
            if idx == 0 || idx == pts.len() {
                continue;
            }
            nbrs.push(pts[idx - 1]);
            nbrs.push(pts[idx]);
        }
        if let Some((fit, var)) = local_fit(&nbrs, x) {
            let d = y - fit;
            sum += d * d / (s * s + var);
            used += 1;
        }
    }
    if used == 0 || (used as f64) < MIN_OVERLAP * t.len() as f64 {
        return f64::INFINITY;
    }
    sum / used as f64
}

/// Search ranges and bootstrap settings.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CollapseOptions {
    /// Defaults to the span of the data.
    pub p_c_range: Option<(f64, f64)>,
    pub nu_range: (f64, f64),
    pub eps_range: (f64, f64),
    pub grid: usize,
    pub bootstrap: usize,
    pub seed: u64,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        Self { p_c_range: None, nu_range: (0.3, 4.0), eps_range: (-2.0, 2.0), grid: 41, bootstrap: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CollapseResult {
    pub p_c: f64,
    pub nu: f64,
    /// Zero for [`Ansatz::Plain`].
    pub eps: f64,
    pub quality: f64,
    pub p_c_err: f64,
    pub nu_err: f64,
    pub eps_err: f64,
    pub bootstrap: usize,
}

/// Nelder–Mead minimization of `f` from `start` with initial steps `step`.
pub fn nelder_mead<const D: usize>(f: impl Fn(&[f64; D]) -> f64, start: [f64; D], step: [f64; D], iters: usize) -> ([f64; D], f64) {
    let mut simplex: Vec<([f64; D], f64)> = Vec::with_capacity(D + 1);
    simplex.push((start, f(&start)));
    for k in 0..D {
        let mut v = start;
        v[k] += step[k];
        simplex.push((v, f(&v)));
    }
    let sort = |s: &mut Vec<([f64; D], f64)>| s.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(core::cmp::Ordering::Greater));
    for _ in 0..iters {
        sort(&mut simplex);
        let spread = simplex.iter().map(|v| libm::fabs(v.1 - simplex[0].1)).fold(0.0, f64::max);
        let size = (0..D).map(|k| simplex.iter().map(|v| libm::fabs(v.0[k] - simplex[0].0[k])).fold(0.0, f64::max)).fold(0.0, f64::max);
        if simplex[0].1.is_finite() && spread < 1e-10 && size < 1e-7 {
            break;
        }
        let mut centroid = [0.0; D];
        for v in &simplex[..D] {
            for k in 0..D {
                centroid[k] += v.0[k] / D as f64;
            }
        }
        let worst = simplex[D];
        let along = |t: f64| {
            let mut p = [0.0; D];
            for k in 0..D {
                p[k] = centroid[k] + t * (worst.0[k] - centroid[k]);
            }
            p
        };
        let r = along(-1.0);
        let fr = f(&r);
        if fr < simplex[0].1 {
            let e = along(-2.0);
            let fe = f(&e);
            simplex[D] = if fe < fr { (e, fe) } else { (r, fr) };
        } else if fr < simplex[D - 1].1 {
            simplex[D] = (r, fr);
        } else {
            let c = if fr < worst.1 { along(-0.5) } else { along(0.5) };
            let fc = f(&c);
            if fc < worst.1.min(fr) {
                simplex[D] = (c, fc);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    for k in 0..D {
                        v.0[k] = best[k] + 0.5 * (v.0[k] - best[k]);
                    }
                    v.1 = f(&v.0);
                }
            }
        }
    }
    sort(&mut simplex);
    simplex[0]
}

fn optimize(ds: &ScalingDataset, opts: &CollapseOptions, start: Option<[f64; 3]>) -> ([f64; 3], f64) {
    let (lo, hi) = opts.p_c_range.unwrap_or_else(|| {
        let lo = ds.points.iter().map(|p| p.p).fold(f64::INFINITY, f64::min);
        let hi = ds.points.iter().map(|p| p.p).fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    let with_eps = ds.ansatz.has_exponent();
    let (nlo, nhi) = opts.nu_range;
    let (elo, ehi) = opts.eps_range;
    let eval = |v: &[f64; 3]| {
        if v[0] < lo || v[0] > hi || v[1] < nlo || v[1] > nhi || (with_eps && (v[2] < elo || v[2] > ehi)) {
            return f64::INFINITY;
        }
        quality(ds, v[0], v[1], if with_eps { v[2] } else { 0.0 })
    };
    let g = opts.grid.max(2);
    let start = match start {
        Some(s) => s,
        None => {
            let mut best = ([lo, nlo, 0.0], f64::INFINITY);
            let eps_steps = if with_eps { g.div_ceil(2) } else { 1 };
            for i in 0..g {
                let pc = lo + (hi - lo) * i as f64 / (g - 1) as f64;
                for j in 0..g {
                    // log-spaced ν
                    let nu = nlo * libm::pow(nhi / nlo, j as f64 / (g - 1) as f64);
                    for k in 0..eps_steps {
                        let eps = if with_eps { elo + (ehi - elo) * k as f64 / (eps_steps - 1).max(1) as f64 } else { 0.0 };
                        let q = eval(&[pc, nu, eps]);
                        if q < best.1 {
                            best = ([pc, nu, eps], q);
                        }
                    }
                }
            }
            best.0
        }
    };
    let step = [(hi - lo) / 20.0, start[1] * 0.1, if with_eps { (ehi - elo) / 20.0 } else { 0.0 }];
    if with_eps {
        nelder_mead(eval, start, step, 2000)
    } else {
        let (v, q) = nelder_mead(|v: &[f64; 2]| eval(&[v[0], v[1], 0.0]), [start[0], start[1]], [step[0], step[1]], 2000);
        ([v[0], v[1], 0.0], q)
    }
}

/// Best collapse plus bootstrap uncertainties (resampling points with
/// replacement within each size).
pub fn collapse(ds: &ScalingDataset, opts: &CollapseOptions) -> Result<CollapseResult> {
    ds.validate()?;
    let (best, q) = optimize(ds, opts, None);
    if !q.is_finite() {
        return Err(Error::FitFailed("sizes do not overlap after rescaling".into()));
    }
    let mut samples: Vec<[f64; 3]> = Vec::with_capacity(opts.bootstrap);
    let sizes = ds.sizes();
    let groups: Vec<Vec<ScalingPoint>> = sizes.iter().map(|&l| ds.points.iter().copied().filter(|p| p.l == l).collect()).collect();
    for b in 0..opts.bootstrap {
        let mut r = rng::stream(opts.seed, b as u64);
        let mut pts = Vec::with_capacity(ds.points.len());
        for g in &groups {
            for _ in 0..g.len() {
                pts.push(g[r.gen_range(0..g.len())]);
            }
        }
        let resampled = ScalingDataset { points: pts, ansatz: ds.ansatz };
        let (v, qb) = optimize(&resampled, opts, Some(best));
        if qb.is_finite() {
            samples.push(v);
        }
    }
    let spread = |k: usize| {
        if samples.len() < 2 {
            return 0.0;
        }
        let n = samples.len() as f64;
        let m = samples.iter().map(|s| s[k]).sum::<f64>() / n;
        libm::sqrt(samples.iter().map(|s| (s[k] - m) * (s[k] - m)).sum::<f64>() / (n - 1.0))
    };
    Ok(CollapseResult {
        p_c: best[0],
        nu: best[1],
        eps: best[2],
        quality: q,
        p_c_err: spread(0),
        nu_err: spread(1),
        eps_err: spread(2),
        bootstrap: samples.len(),
    })
}
