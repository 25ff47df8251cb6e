//! Parallel execution of independent tasks.
//!
//! Tasks are numbered `0..n` and dealt to workers round-robin (worker `w`
//! takes `w, w + W, w + 2W, …`). Every task derives its randomness from its
//! own index, so results do not depend on the worker count.

use std::collections::BTreeMap;
use std::thread;

use floquet_core::protocol::{run_realization, ProtocolConfig, RunOptions, RunRecord};
use floquet_core::{HoneycombLattice, Result};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "FLOQUET_WORKERS";

/// Worker count from [`WORKERS_ENV`], else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// `f(0), …, f(n-1)` computed on `workers` threads, returned in index order.
pub fn parallel_map<T, F>(n: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return (0..n).map(f).collect();
    }
    let f = &f;
    let mut slots: Vec<Option<T>> = (0..n).map(|_| None).collect();
    let parts: Vec<Vec<(usize, T)>> = thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| s.spawn(move || (w..n).step_by(workers).map(|k| (k, f(k))).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    for (k, v) in parts.into_iter().flatten() {
        slots[k] = Some(v);
    }
    slots.into_iter().map(|v| v.expect("every task ran")).collect()
}

/// Lattices for every distinct size in `sizes`.
pub fn lattices(sizes: impl IntoIterator<Item = usize>) -> Result<BTreeMap<usize, HoneycombLattice>> {
    let mut out = BTreeMap::new();
    for l in sizes {
        if let std::collections::btree_map::Entry::Vacant(e) = out.entry(l) {
            e.insert(HoneycombLattice::build(l)?);
        }
    }
    Ok(out)
}

/// All realizations of every point, grouped by point. The (point ×
/// realization) grid is flattened and partitioned statically.
pub fn run_points(points: &[ProtocolConfig], opts: RunOptions, workers: usize) -> Result<Vec<Vec<RunRecord>>> {
    for p in points {
        p.validate()?;
    }
    let lats = lattices(points.iter().map(|p| p.l))?;
    let tasks: Vec<(usize, usize)> = points.iter().enumerate().flat_map(|(i, p)| (0..p.realizations).map(move |r| (i, r))).collect();
    let results = parallel_map(tasks.len(), workers, |k| {
        let (i, r) = tasks[k];
        let cfg = &points[i];
        run_realization(&lats[&cfg.l], cfg, r, opts)
    });
    let mut grouped: Vec<Vec<RunRecord>> = points.iter().map(|p| Vec::with_capacity(p.realizations)).collect();
    for ((i, _), rec) in tasks.into_iter().zip(results) {
        grouped[i].push(rec?);
    }
    Ok(grouped)
}

/// Seed for one parameter point, derived from the user seed and the point's
/// coordinates so that it does not depend on sweep order.
pub fn point_seed(seed: u64, l: usize, p_m: f64, p_s: f64) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for v in [l as u64, p_m.to_bits(), p_s.to_bits()] {
        h = splitmix(h ^ v);
    }
    h
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
