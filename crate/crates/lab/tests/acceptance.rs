//! End-to-end acceptance run: one PASS/FAIL line per criterion.
//!
//! Heavy G(t) data is generated once and shared. Set
//! `FLOQUET_ACCEPTANCE_CACHE=<dir>` to keep per-point files between runs;
//! otherwise a temporary directory is used. Positional arguments select
//! criteria by number (`cargo test --test acceptance -- 4 5`). The exit status
//! reflects failures only with `FLOQUET_ACCEPTANCE_STRICT=1`.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use floquet_core::collapse::{collapse, Ansatz, CollapseOptions, ScalingDataset, ScalingPoint};
use floquet_core::markov::TransferMatrix;
use floquet_core::observables::{default_partition, tee, DecayFit, TimeSeries};
use floquet_core::percolation::{spans, GraphKind};
use floquet_core::protocol::{one_cycle_channel, Channel, MissMode, RunOptions, Simulator};
use floquet_core::rng::stream;
use floquet_core::{Direction, HoneycombLattice, StabilizerState};
use floquet_lab::commands::{channel_probabilities, purification_points, run_grid, threshold};
use floquet_lab::runner::{default_workers, parallel_map};
use floquet_lab::summary::PointSummary;
use floquet_lab::Params;

const SEED: u64 = 20_240_601;
const SIZES: [usize; 3] = [9, 12, 15];
const CRITICAL: f64 = 0.48;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Ctx {
    dir: PathBuf,
    _tmp: Option<tempfile::TempDir>,
    workers: usize,
    sweep: Option<BTreeMap<(usize, u64), PointSummary>>,
}

/// `p_M` grid of the transition sweep: 13 points on [0.40, 0.56].
fn sweep_grid() -> Vec<f64> {
    (0..13).map(|k| (40.0 + 4.0 * k as f64 / 3.0) / 100.0).collect()
}

fn key(l: usize, p: f64) -> (usize, u64) {
    (l, (p * 1e6).round() as u64)
}

impl Ctx {
    fn new() -> Self {
        let (dir, tmp) = match std::env::var_os("FLOQUET_ACCEPTANCE_CACHE") {
            Some(d) => (PathBuf::from(d), None),
            None => {
                let t = tempfile::tempdir().expect("temporary directory");
                (t.path().to_path_buf(), Some(t))
            }
        };
        Self { dir, _tmp: tmp, workers: default_workers(), sweep: None }
    }

    fn params(&self, sizes: &[usize], pm: &[f64], ps: &[f64], cycles: usize, realizations: usize) -> Params {
        Params {
            l: Some(sizes.to_vec()),
            pm: Some(pm.to_vec()),
            ps: Some(ps.to_vec()),
            cycles: Some(cycles),
            realizations: Some(realizations),
            seed: Some(SEED),
            workers: Some(self.workers),
            ..Params::default()
        }
    }

    /// G(t) over L ∈ {9,12,15}, the 13-point grid plus 0.38 and 0.58, T = 100,
    /// 200 realizations per point.
    fn sweep(&mut self) -> &BTreeMap<(usize, u64), PointSummary> {
        if self.sweep.is_none() {
            let mut pm = sweep_grid();
            pm.extend([0.38, 0.58]);
            let params = self.params(&SIZES, &pm, &[0.0], 100, 200);
            let (summaries, _) = run_grid(&params, RunOptions::default(), &self.dir, "sweep").expect("sweep runs");
            self.sweep = Some(summaries.into_iter().map(|s| (key(s.config.l, s.config.p_m), s)).collect());
        }
        self.sweep.as_ref().unwrap()
    }

    fn point(&mut self, l: usize, p: f64) -> PointSummary {
        self.sweep()[&key(l, p)].clone()
    }
}

/// Fraction of `t ≤ horizon` where `|a − b| ≤ 2 σ` with σ the combined standard error.
fn agreement(a: &TimeSeries, b: &[f64], b_err: &[f64], horizon: usize) -> (f64, f64) {
    let mut within = 0usize;
    let mut worst = 0.0f64;
    for t in 0..=horizon {
        let d = (a.values[t] - b[t]).abs();
        let s = (a.stderr[t].powi(2) + b_err[t].powi(2)).sqrt();
        if d <= 2.0 * s + 1e-12 {
            within += 1;
        }
        if s > 0.0 {
            worst = worst.max(d / s);
        } else if d > 1e-12 {
            worst = f64::INFINITY;
        }
    }
    (within as f64 / (horizon + 1) as f64, worst)
}

/// Share of comparisons inside the 2σ band required for agreement: Gaussian
/// noise alone leaves about 5% of points outside it.
const BAND_SHARE: f64 = 0.9;

fn c1(ctx: &mut Ctx) -> Outcome {
    let params = ctx.params(&[9], &[0.0], &[0.0], 100, 20);
    let (s, _) = run_grid(&params, RunOptions::default(), &ctx.dir, "ideal").unwrap();
    let s = &s[0];
    let exact = s.g.values.iter().enumerate().all(|(t, &v)| v == ((t + 1) % 2) as f64) && s.g.stderr.iter().all(|&e| e == 0.0);
    outcome(exact, format!("{} realizations, G(t) = (t+1) mod 2 for t = 0..={}: {exact}", s.g.samples, s.g.horizon()))
}

fn c2(_ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for program in 0..1000 {
        let n = 1 + program % 8;
        let mut st = StabilizerState::new(n).unwrap();
        let mut dense = common::Dense::zero(n);
        for _ in 0..30 {
            if rng.gen_bool(0.6) {
                let g = common::random_gate(n, &mut rng);
                st.apply(g).unwrap();
                dense.apply(g);
            } else {
                let p = common::random_pauli(n, &mut rng);
                let prob = dense.prob_plus(&p);
                let o = st.measure(&p, &mut rng).unwrap();
                let want = if o.deterministic { (o.value == 1) as u8 as f64 } else { 0.5 };
                checks += 1;
                if (prob - want).abs() > 1e-9 {
                    failures.push(format!("program {program}: p+ = {prob}, tableau {o:?}"));
                }
                dense.project(&p, o.value);
            }
        }
        for mask in 1u32..(1 << n) - 1 {
            let region: Vec<usize> = (0..n).filter(|q| mask >> q & 1 == 1).collect();
            checks += 1;
            let (a, b) = (st.entropy(&region).unwrap() as f64, dense.entropy(&region));
            if (a - b).abs() > 1e-6 {
                failures.push(format!("program {program}: S{region:?} = {a} vs {b}"));
            }
        }
    }
    outcome(failures.is_empty(), format!("1000 programs, {checks} probability/entropy checks, {} mismatches {:?}", failures.len(), failures.first()))
}

fn c3(ctx: &mut Ctx) -> Outcome {
    let lat = HoneycombLattice::build(12).unwrap();
    let part = default_partition(&lat).unwrap();
    let (pms, reps, cycles) = ([0.0, 0.3, 0.6], 20usize, 100usize);
    let tallies = parallel_map(pms.len() * reps, ctx.workers, |k| {
        let (pm, r) = (pms[k / reps], k % reps);
        let mut rng = stream(SEED ^ 3, k as u64);
        let mut sim = Simulator::new(&lat, 0, 11, false).unwrap();
        sim.initialize(&mut rng).unwrap();
        let mut seen: BTreeMap<i64, usize> = BTreeMap::new();
        for t in 0..=cycles {
            if t > 0 {
                sim.cycle(pm, 0.0, MissMode::BlueGreen, &mut rng).unwrap();
            }
            *seen.entry(tee(sim.state(), &part).unwrap()).or_default() += 1;
        }
        let _ = r;
        seen
    });
    let mut pass = true;
    let mut detail = Vec::new();
    for (i, pm) in pms.iter().enumerate() {
        let mut merged: BTreeMap<i64, usize> = BTreeMap::new();
        for t in &tallies[i * reps..(i + 1) * reps] {
            for (v, n) in t {
                *merged.entry(*v).or_default() += n;
            }
        }
        let ok = merged.keys().all(|&v| v == 1);
        pass &= ok;
        detail.push(format!("p_M={pm}: {merged:?}"));
    }
    outcome(pass, format!("L=12, {reps} realizations x {} red rounds; TEE values {}", cycles + 1, detail.join("; ")))
}

fn gpi_dataset(ctx: &mut Ctx) -> ScalingDataset {
    let mut pts = Vec::new();
    for l in SIZES {
        for p in sweep_grid() {
            let s = ctx.point(l, p);
            pts.push(ScalingPoint { p, l, y: s.fourier.gpi.mean, sigma: s.fourier.gpi.stderr.max(1e-4) });
        }
    }
    ScalingDataset::new(pts, Ansatz::Plain).unwrap()
}

fn c4(ctx: &mut Ctx) -> Outcome {
    let ds = gpi_dataset(ctx);
    let table: Vec<String> = SIZES
        .iter()
        .map(|&l| {
            let v: Vec<String> = ds.points.iter().filter(|p| p.l == l).map(|p| format!("{:.3}", p.y)).collect();
            format!("L={l} [{}]", v.join(" "))
        })
        .collect();
    match collapse(&ds, &CollapseOptions { seed: SEED, ..CollapseOptions::default() }) {
        Ok(r) => {
            let pass = (r.p_c - 0.48).abs() <= 0.02 && (r.nu - 1.35).abs() <= 0.20;
            outcome(
                pass,
                format!("G_pi collapse p_c = {:.4} ± {:.4}, nu = {:.3} ± {:.3} (quality {:.3}); G_pi {}", r.p_c, r.p_c_err, r.nu, r.nu_err, r.quality, table.join("; ")),
            )
        }
        Err(e) => outcome(false, format!("collapse failed: {e}; G_pi {}", table.join("; "))),
    }
}

fn c5(ctx: &mut Ctx) -> Outcome {
    let series: Vec<TimeSeries> = SIZES.iter().map(|&l| ctx.point(l, CRITICAL).g).collect();
    let mut pass = true;
    let mut detail = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let (share, worst) = agreement(&series[i], &series[j].values, &series[j].stderr, 30);
            pass &= share >= BAND_SHARE;
            detail.push(format!("L={} vs L={}: {:.0}% within 2σ (max {:.2}σ)", SIZES[i], SIZES[j], 100.0 * share, worst));
        }
    }
    outcome(pass, format!("p_M=0.48, t <= 30: {}", detail.join("; ")))
}

fn fit(ctx: &mut Ctx, l: usize, p: f64) -> Option<DecayFit> {
    ctx.point(l, p).decay
}

fn c6(ctx: &mut Ctx) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    let crit: Vec<Option<DecayFit>> = SIZES.iter().map(|&l| fit(ctx, l, CRITICAL)).collect();
    for (l, f) in SIZES.iter().zip(&crit) {
        let ok = f.is_some_and(|f| (f.beta - 0.30).abs() <= 0.05);
        pass &= ok;
        detail.push(format!("beta(0.48, L={l}) = {}", f.map_or("n/a".into(), |f| format!("{:.3}±{:.3}", f.beta, f.stderr))));
    }
    for p in [0.38, 0.58] {
        let fits: Vec<Option<DecayFit>> = SIZES.iter().map(|&l| fit(ctx, l, p)).collect();
        let betas: Vec<f64> = fits.iter().map(|f| f.map_or(f64::NAN, |f| f.beta)).collect();
        let decreasing = betas.iter().all(|b| *b > 0.0) && betas.windows(2).all(|w| w[1] < w[0]);
        // ln beta = a - L / xi
        let xi = if decreasing {
            let xs: Vec<f64> = SIZES.iter().map(|&l| l as f64).collect();
            let ys: Vec<f64> = betas.iter().map(|b| b.ln()).collect();
            let (mx, my) = (xs.iter().sum::<f64>() / 3.0, ys.iter().sum::<f64>() / 3.0);
            let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
            -1.0 / slope
        } else {
            f64::NAN
        };
        pass &= decreasing && xi > 0.0;
        detail.push(format!("beta({p}) over L = {:?} -> xi = {:.2}", betas.iter().map(|b| (b * 1e4).round() / 1e4).collect::<Vec<_>>(), xi));
    }
    outcome(pass, detail.join("; "))
}

fn expected_channel(lat: &HoneycombLattice, missed: &[usize]) -> Channel {
    let s = spans(&lat.kagome_instance(missed).unwrap());
    match (s.rank, s.class) {
        (0, _) => Channel::Identity,
        (2, _) => Channel::EmExchange,
        (_, Some(Direction::X)) => Channel::MeasureFx,
        (_, Some(Direction::Z)) => Channel::MeasureFz,
        _ => Channel::MeasureFxz,
    }
}

fn c7(ctx: &mut Ctx) -> Outcome {
    let kag = threshold(GraphKind::Kagome, &[32, 64], 10_000, SEED, ctx.workers).unwrap();
    let kag_ok = ((1.0 - kag.p_c) - 0.476).abs() <= 0.008;
    // missing only green links: green plaquettes joined by measured green links form a triangular lattice
    let tri = threshold(GraphKind::Triangular, &[32, 64], 10_000, SEED + 1, ctx.workers).unwrap();
    let hex_ok = ((1.0 - tri.p_c) - 0.65).abs() <= 0.01;

    let lat = HoneycombLattice::build(15).unwrap();
    let pms = [0.30, 0.36, 0.58, 0.65];
    let per = 1000usize;
    let hits = parallel_map(pms.len() * per, ctx.workers, |k| {
        let mut rng = stream(SEED ^ 7, k as u64);
        let (ch, missed) = one_cycle_channel(&lat, pms[k / per], MissMode::BlueGreen, &mut rng).unwrap();
        let exp = expected_channel(&lat, &missed);
        ((ch == Channel::EmExchange) == (exp == Channel::EmExchange), ch == exp)
    });
    let span_agree = hits.iter().filter(|h| h.0).count() as f64 / hits.len() as f64;
    let full_agree = hits.iter().filter(|h| h.1).count() as f64 / hits.len() as f64;
    let agree_ok = span_agree >= 0.99;
    outcome(
        kag_ok && hex_ok && agree_ok,
        format!(
            "kagome 1-p_c = {:.4} ± {:.4} (L=32,64); green-only p_M^c = 1-p_c(triangular) = {:.4} ± {:.4}; L=15 agreement at p_M {pms:?}: spanning/em_exchange {:.2}%, all five channels {:.2}%",
            1.0 - kag.p_c,
            kag.stderr,
            1.0 - tri.p_c,
            tri.stderr,
            100.0 * span_agree,
            100.0 * full_agree
        ),
    )
}

fn c8(ctx: &mut Ctx) -> Outcome {
    const QUOTED: [f64; 5] = [0.31, 0.30, 0.12, 0.23, 0.04];
    let probs = channel_probabilities(15, CRITICAL, MissMode::BlueGreen, 10_000, SEED, ctx.workers).unwrap();
    let probs_ok = probs.p.iter().zip(QUOTED).all(|(a, b)| (a - b).abs() <= 0.03);
    let m = TransferMatrix::build(probs.p).unwrap();
    let pred = m.predict_series(30);
    let measured = ctx.point(15, CRITICAL);
    // once every realization is absorbed the sample error vanishes; floor it
    // with the binomial error the model implies for this many realizations
    let n = measured.g.samples as f64;
    let floor: Vec<f64> = pred.iter().map(|g| (g * (1.0 - g) / n).sqrt()).collect();
    let mut g = measured.g.clone();
    for (e, f) in g.stderr.iter_mut().zip(&floor) {
        *e = e.max(*f);
    }
    let (share, worst) = agreement(&g, &pred, &[0.0; 31], 30);
    let pred_ok = share >= BAND_SHARE;
    let beta = measured.decay.map(|f| f.beta);
    let rate = m.decay_rate();
    let rate_ok = beta.is_some_and(|b| (rate - b).abs() <= 0.05);
    outcome(
        probs_ok && pred_ok && rate_ok,
        format!(
            "p = {:?} (±{:.3}), largest deviation from quoted {:.3}; predicted G(t) within 2σ of measured for {:.0}% of t <= 30 (max {:.2}σ); -ln|λ3| = {:.3} vs fitted beta {}",
            probs.p.map(|v| (v * 1e3).round() / 1e3),
            probs.stderr.iter().cloned().fold(0.0, f64::max),
            probs.p.iter().zip(QUOTED).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max),
            100.0 * share,
            worst,
            rate,
            beta.map_or("n/a".into(), |b| format!("{b:.3}"))
        ),
    )
}

fn c9(ctx: &mut Ctx) -> Outcome {
    let params = ctx.params(&SIZES, &[CRITICAL], &[0.05], 60, 100);
    let (s, _) = run_grid(&params, RunOptions { corrected: false, tee: true }, &ctx.dir, "volume").unwrap();
    let tees: Vec<(f64, f64)> = s.iter().map(|p| p.tee.map(|e| (e.mean, e.stderr)).unwrap()).collect();
    let negative = tees.iter().all(|t| t.0 < 0.0);
    let growing = tees.windows(2).all(|w| w[1].0 < w[0].0);
    outcome(
        negative && growing,
        format!(
            "p_M=0.48, p_S=0.05, T=60: TEE {}",
            SIZES.iter().zip(&tees).map(|(l, t)| format!("L={l}: {:.2}±{:.2}", t.0, t.1)).collect::<Vec<_>>().join(", ")
        ),
    )
}

fn c10(ctx: &mut Ctx) -> Outcome {
    let mut params = ctx.params(&[12], &[0.4], &[0.04, 0.06], 100, 200);
    params.d = Some(11);
    let (s, _) = run_grid(&params, RunOptions { corrected: true, tee: false }, &ctx.dir, "corrected").unwrap();
    let (a, b) = (&s[0], &s[1]);
    let (ca, cb) = (a.corrected_fourier.unwrap().gpi, b.corrected_fourier.unwrap().gpi);
    let ua = a.fourier.gpi;
    let pass = ca.mean > 0.5 && ua.mean < 0.5 && cb.mean > 3.0 * cb.stderr;
    outcome(
        pass,
        format!(
            "L=12, p_M=0.4, d=11: p_S=0.04 corrected G_pi {:.3}±{:.3}, plain {:.3}±{:.3}; p_S=0.06 corrected G_pi {:.3}±{:.3}, plain {:.3}",
            ca.mean, ca.stderr, ua.mean, ua.stderr, cb.mean, cb.stderr, b.fourier.gpi.mean
        ),
    )
}

fn c11(ctx: &mut Ctx) -> Outcome {
    let mut params = ctx.params(&[12], &[0.38, CRITICAL, 0.58], &[0.0], 60, 40);
    params.ancillas = Some(10);
    let s = purification_points(&params).unwrap();
    let mut pass = true;
    let mut detail = Vec::new();
    for p in [&s[0], &s[2]] {
        let e: Vec<f64> = p.entropy.iter().map(|e| e.mean).collect();
        let plateau = (p.entropy[5].mean - 2.0).abs() < 1e-12;
        let persists = e[5..=55].iter().all(|&v| (v - 2.0).abs() < 1e-12);
        pass &= plateau && persists;
        let first_drop = e.iter().enumerate().skip(5).find(|(_, &v)| v < 2.0).map(|(t, _)| t);
        detail.push(format!(
            "p_M={}: mean S_a(0,1,2,5,25,55) = {:.2} {:.2} {:.2} {:.2} {:.2} {:.2}, first mean drop below 2 at t={first_drop:?}",
            p.config.p_m, e[0], e[1], e[2], e[5], e[25], e[55]
        ));
    }
    let crit = &s[1];
    let (mean_t, censored) = crit.mean_time();
    let bound = 3.0 * (12f64).powf(0.29);
    let fast = censored == 0 && mean_t.is_some_and(|t| t <= bound);
    pass &= fast;
    detail.push(format!("p_M=0.48: mean purification time {:?} (bound {bound:.2}, {censored} never purified)", mean_t.map(|t| (t * 100.0).round() / 100.0)));
    outcome(pass, format!("L=12, 10 ancillas, 8L^3 gates, 40 realizations; {}", detail.join("; ")))
}

fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    let (u, v): (f64, f64) = (r.gen_range(1e-12..1.0), r.gen());
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

fn c12(ctx: &mut Ctx) -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for (k, (p_c, nu)) in [(0.5, 4.0 / 3.0), (0.48, 1.35), (0.3, 0.9)].into_iter().enumerate() {
        let mut r = ChaCha8Rng::seed_from_u64(SEED + k as u64);
        let mut pts = Vec::new();
        for l in [16usize, 32, 64] {
            for i in 0..21 {
                let p = p_c - 0.1 + 0.01 * i as f64;
                let x = (p - p_c) * (l as f64).powf(1.0 / nu);
                let sigma = 0.01;
                pts.push(ScalingPoint { p, l, y: 0.5 + 0.5 * (1.5 * x).tanh() + sigma * gaussian(&mut r), sigma });
            }
        }
        let ds = ScalingDataset::new(pts, Ansatz::Plain).unwrap();
        let res = collapse(&ds, &CollapseOptions { seed: SEED, ..CollapseOptions::default() }).unwrap();
        // two bootstrap standard deviations
        let ok = (res.p_c - p_c).abs() <= 2.0 * res.p_c_err && (res.nu - nu).abs() <= 2.0 * res.nu_err;
        pass &= ok;
        detail.push(format!("({p_c}, {nu:.3}) -> ({:.4}±{:.4}, {:.3}±{:.3})", res.p_c, res.p_c_err, res.nu, res.nu_err));
    }
    let sq = threshold(GraphKind::Square, &[32, 64], 10_000, SEED, ctx.workers).unwrap();
    let sq_ok = (sq.p_c - 0.5).abs() <= 0.005;
    outcome(pass && sq_ok, format!("synthetic collapses {}; square threshold {:.4} ± {:.4}", detail.join(", "), sq.p_c, sq.stderr))
}

type Criterion = (u8, &'static str, fn(&mut Ctx) -> Outcome);

const CRITERIA: [Criterion; 12] = [
    (1, "ideal time crystal", c1),
    (2, "engine oracle equivalence", c2),
    (3, "TEE exact on the p_S=0 axis", c3),
    (4, "FET-T transition collapse", c4),
    (5, "critical z=0 signature", c5),
    (6, "decay rates", c6),
    (7, "percolation cross-validation", c7),
    (8, "Markov model", c8),
    (9, "volume-law onset", c9),
    (10, "corrected order parameter", c10),
    (11, "purification", c11),
    (12, "FSS estimator validity", c12),
];

fn main() -> ExitCode {
    let selected: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut ctx = Ctx::new();
    let start = Instant::now();
    let mut failed = Vec::new();
    println!("acceptance: {} worker(s), data in {}", ctx.workers, ctx.dir.display());
    for (n, title, f) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&n) {
            continue;
        }
        let clock = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(|| f(&mut ctx))).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        let verdict = if out.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict} {title} [{:.0}s]: {}", clock.elapsed().as_secs_f64(), out.detail);
        if !out.pass {
            failed.push(n);
        }
    }
    println!("acceptance: {} failed {:?}, total {:.0}s", failed.len(), failed, start.elapsed().as_secs_f64());
    // failures are reported above; only strict mode turns them into a failing exit status
    let strict = std::env::var_os("FLOQUET_ACCEPTANCE_STRICT").is_some_and(|v| v != "0");
    if failed.is_empty() || !strict {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
