//! Subcommand pipelines. Each writes its artifacts under the output directory
//! and returns the paths it wrote.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use floquet_core::collapse::{collapse, Ansatz, CollapseOptions, CollapseResult, ScalingDataset};
use floquet_core::markov::{count_channels, ChannelProbabilities, TransferMatrix};
use floquet_core::observables::{purification_run, scrambling_gates};
use floquet_core::percolation::{first_wrap_time, threshold_from_times, GraphKind, PercolationGraph, ThresholdEstimate};
use floquet_core::protocol::{one_cycle_channel, MissMode, ProtocolConfig, RunOptions};
use floquet_core::rng::stream;

use crate::config::Params;
use crate::error::{LabError, LabResult};
use crate::io::{fmt9, read_json, read_scaling_points, write_csv, write_json};
use crate::runner::{lattices, parallel_map, point_seed, run_points};
use crate::summary::{mean_stderr, Estimate, PointSummary};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Gt,
    Sweep,
    Tee,
    Purify,
    Percolate,
    Markov,
    Collapse,
    PhaseDiagram,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Gt => "gt",
            Command::Sweep => "sweep",
            Command::Tee => "tee",
            Command::Purify => "purify",
            Command::Percolate => "percolate",
            Command::Markov => "markov",
            Command::Collapse => "collapse",
            Command::PhaseDiagram => "phase-diagram",
        }
    }
}

pub fn run(cmd: Command, params: &Params) -> LabResult<Vec<PathBuf>> {
    let dir = params.out_dir();
    match cmd {
        Command::Gt => gt(params, &dir),
        Command::Sweep => sweep(params, &dir),
        Command::Tee => tee(params, &dir),
        Command::Purify => purify(params, &dir),
        Command::Percolate => percolate(params, &dir),
        Command::Markov => markov(params, &dir),
        Command::Collapse => collapse_cmd(params, &dir),
        Command::PhaseDiagram => phase_diagram(params, &dir),
    }
}

fn single<T: Copy>(name: &str, v: &[T]) -> LabResult<T> {
    match v {
        [x] => Ok(*x),
        _ => Err(LabError::Config(format!("{name} takes exactly one value here"))),
    }
}

fn point_file(dir: &Path, tag: &str, cfg: &ProtocolConfig) -> PathBuf {
    dir.join("points").join(format!("{tag}_L{}_pm{}_ps{}.json", cfg.l, fmt9(cfg.p_m), fmt9(cfg.p_s)))
}

fn usable(s: &PointSummary, cfg: &ProtocolConfig, opts: RunOptions) -> bool {
    s.config == *cfg && (!opts.corrected || s.corrected_g.is_some()) && (!opts.tee || s.tee.is_some())
}

/// Every point of the `L × p_M × p_S` grid, reusing per-point files whose
/// configuration matches, so interrupted sweeps resume.
pub fn run_grid(params: &Params, opts: RunOptions, dir: &Path, tag: &str) -> LabResult<(Vec<PointSummary>, Vec<PathBuf>)> {
    let (sizes, pms, pss) = (params.sizes()?, params.p_m()?, params.p_s()?);
    let mut configs = Vec::new();
    for &l in &sizes {
        for &pm in &pms {
            for &ps in &pss {
                configs.push(params.protocol(l, pm, ps, point_seed(params.seed(), l, pm, ps))?);
            }
        }
    }
    let workers = params.workers();
    let mut out = Vec::with_capacity(configs.len());
    let mut files = Vec::with_capacity(configs.len());
    for cfg in configs {
        let path = point_file(dir, tag, &cfg);
        let cached = path.exists().then(|| read_json::<PointSummary>(&path).ok()).flatten().filter(|s| usable(s, &cfg, opts));
        let summary = match cached {
            Some(s) => s,
            None => {
                let records = run_points(std::slice::from_ref(&cfg), opts, workers)?.remove(0);
                let s = PointSummary::from_records(&cfg, &records)?;
                write_json(&path, &s)?;
                s
            }
        };
        out.push(summary);
        files.push(path);
    }
    Ok((out, files))
}

fn series_rows(summaries: &[PointSummary]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for s in summaries {
        for t in 0..s.g.values.len() {
            let mut row = vec![s.config.l.to_string(), fmt9(s.config.p_m), fmt9(s.config.p_s), t.to_string(), fmt9(s.g.values[t]), fmt9(s.g.stderr[t])];
            if let Some(c) = &s.corrected_g {
                row.extend([fmt9(c.values[t]), fmt9(c.stderr[t])]);
            }
            rows.push(row);
        }
    }
    rows
}

fn opt9(v: Option<f64>) -> String {
    v.map(fmt9).unwrap_or_default()
}

fn gt(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    single("--L", &params.sizes()?)?;
    single("--pm", &params.p_m()?)?;
    single("--ps", &params.p_s()?)?;
    let opts = RunOptions { corrected: params.corrected.unwrap_or(false), tee: false };
    let (summaries, mut files) = run_grid(params, opts, dir, "gt")?;
    let s = &summaries[0];
    let mut header = vec!["L", "p_m", "p_s", "t", "g", "g_stderr"];
    if s.corrected_g.is_some() {
        header.extend(["corrected_g", "corrected_g_stderr"]);
    }
    let csv = dir.join("gt.csv");
    write_csv(&csv, &header, &series_rows(&summaries))?;
    let json = dir.join("gt.json");
    write_json(&json, s)?;
    files.extend([csv, json]);
    Ok(files)
}

fn sweep(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    let opts = RunOptions { corrected: params.corrected.unwrap_or(false), tee: false };
    let (summaries, mut files) = run_grid(params, opts, dir, "gt")?;
    let corrected = opts.corrected;
    let mut header = vec!["L", "p_m", "p_s", "realizations", "g0", "g0_stderr", "gpi", "gpi_stderr", "beta", "beta_stderr"];
    if corrected {
        header.extend(["corrected_gpi", "corrected_gpi_stderr"]);
    }
    let rows: Vec<Vec<String>> = summaries
        .iter()
        .map(|s| {
            let f = &s.fourier;
            let mut row = vec![
                s.config.l.to_string(),
                fmt9(s.config.p_m),
                fmt9(s.config.p_s),
                s.config.realizations.to_string(),
                fmt9(f.g0.mean),
                fmt9(f.g0.stderr),
                fmt9(f.gpi.mean),
                fmt9(f.gpi.stderr),
                opt9(s.decay.map(|d| d.beta)),
                opt9(s.decay.map(|d| d.stderr)),
            ];
            if let Some(c) = &s.corrected_fourier {
                row.extend([fmt9(c.gpi.mean), fmt9(c.gpi.stderr)]);
            }
            row
        })
        .collect();
    let gpi = dir.join("gpi.csv");
    write_csv(&gpi, &header, &rows)?;
    let mut sheader = vec!["L", "p_m", "p_s", "t", "g", "g_stderr"];
    if corrected {
        sheader.extend(["corrected_g", "corrected_g_stderr"]);
    }
    let series = dir.join("gt_series.csv");
    write_csv(&series, &sheader, &series_rows(&summaries))?;
    files.extend([gpi, series]);
    Ok(files)
}

fn tee(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    let (summaries, mut files) = run_grid(params, RunOptions { corrected: false, tee: true }, dir, "tee")?;
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for s in &summaries {
        let e = s.tee.expect("tee requested");
        let c = &s.config;
        rows.push(vec![c.l.to_string(), fmt9(c.p_m), fmt9(c.p_s), c.realizations.to_string(), fmt9(e.mean), fmt9(e.stderr)]);
        for (r, v) in s.tee_values.iter().enumerate() {
            values.push(vec![c.l.to_string(), fmt9(c.p_m), fmt9(c.p_s), r.to_string(), v.to_string()]);
        }
    }
    let summary = dir.join("tee.csv");
    write_csv(&summary, &["L", "p_m", "p_s", "realizations", "tee_mean", "tee_stderr"], &rows)?;
    let raw = dir.join("tee_values.csv");
    write_csv(&raw, &["L", "p_m", "p_s", "realization", "tee"], &values)?;
    files.extend([summary, raw]);
    Ok(files)
}

fn phase_diagram(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    let (summaries, mut files) = run_grid(params, RunOptions { corrected: false, tee: true }, dir, "phase")?;
    let rows: Vec<Vec<String>> = summaries
        .iter()
        .map(|s| {
            let c = &s.config;
            let t = s.tee.expect("tee requested");
            vec![
                c.l.to_string(),
                fmt9(c.p_m),
                fmt9(c.p_s),
                c.realizations.to_string(),
                fmt9(s.fourier.g0.mean),
                fmt9(s.fourier.gpi.mean),
                fmt9(s.fourier.gpi.stderr),
                fmt9(t.mean),
                fmt9(t.stderr),
            ]
        })
        .collect();
    let path = dir.join("phase.csv");
    write_csv(&path, &["L", "p_m", "p_s", "realizations", "g0", "gpi", "gpi_stderr", "tee_mean", "tee_stderr"], &rows)?;
    files.push(path);
    Ok(files)
}

/// Ancilla entropy statistics of one purification point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PurificationSummary {
    pub config: ProtocolConfig,
    pub gates: usize,
    pub entropy: Vec<Estimate>,
    /// First cycle with zero ancilla entropy, per realization.
    pub purification_time: Vec<Option<usize>>,
}

impl PurificationSummary {
    /// Mean purification time over realizations that purified, and how many did not.
    pub fn mean_time(&self) -> (Option<f64>, usize) {
        let done: Vec<f64> = self.purification_time.iter().flatten().map(|&t| t as f64).collect();
        let censored = self.purification_time.len() - done.len();
        ((!done.is_empty()).then(|| mean_stderr(&done).0), censored)
    }
}

/// Purification runs for every `(L, p_M, p_S)`; realization `r` of a point
/// uses stream `r` of the point seed.
pub fn purification_points(params: &Params) -> LabResult<Vec<PurificationSummary>> {
    let (sizes, pms, pss) = (params.sizes()?, params.p_m()?, params.p_s()?);
    let ancillas = params.ancillas.unwrap_or(10);
    let mut points = Vec::new();
    for &l in &sizes {
        for &pm in &pms {
            for &ps in &pss {
                let mut p = params.clone();
                p.ancillas = Some(ancillas);
                p.cycles = Some(params.cycles.unwrap_or(60));
                let cfg = p.protocol(l, pm, ps, point_seed(params.seed(), l, pm, ps))?;
                points.push((cfg, params.gates.unwrap_or_else(|| scrambling_gates(l))));
            }
        }
    }
    if ancillas == 0 {
        return Err(LabError::Config("purification needs --ancillas > 0".into()));
    }
    let lats = lattices(sizes.iter().copied())?;
    let tasks: Vec<(usize, usize)> = points.iter().enumerate().flat_map(|(i, (c, _))| (0..c.realizations).map(move |r| (i, r))).collect();
    let runs = parallel_map(tasks.len(), params.workers(), |k| {
        let (i, r) = tasks[k];
        let (cfg, gates) = &points[i];
        let mut rng = stream(cfg.seed, r as u64);
        purification_run(&lats[&cfg.l], cfg, *gates, &mut rng)
    });
    let mut per_point: Vec<Vec<Vec<usize>>> = vec![Vec::new(); points.len()];
    for ((i, _), run) in tasks.iter().zip(runs) {
        per_point[*i].push(run?);
    }
    Ok(points
        .into_iter()
        .zip(per_point)
        .map(|((config, gates), runs)| {
            let len = config.cycles + 1;
            let entropy = (0..len).map(|t| Estimate::of(&runs.iter().map(|r| r[t] as f64).collect::<Vec<_>>())).collect();
            let purification_time = runs.iter().map(|r| r.iter().position(|&s| s == 0)).collect();
            PurificationSummary { config, gates, entropy, purification_time }
        })
        .collect())
}

fn purify(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    let summaries = purification_points(params)?;
    let mut rows = Vec::new();
    let mut times = Vec::new();
    for s in &summaries {
        let c = &s.config;
        for (t, e) in s.entropy.iter().enumerate() {
            rows.push(vec![c.l.to_string(), fmt9(c.p_m), fmt9(c.p_s), t.to_string(), fmt9(e.mean), fmt9(e.stderr)]);
        }
        for (r, t) in s.purification_time.iter().enumerate() {
            times.push(vec![c.l.to_string(), fmt9(c.p_m), fmt9(c.p_s), r.to_string(), t.map(|t| t.to_string()).unwrap_or_default()]);
        }
    }
    let entropy = dir.join("purify.csv");
    write_csv(&entropy, &["L", "p_m", "p_s", "t", "entropy_mean", "entropy_stderr"], &rows)?;
    let runs = dir.join("purify_times.csv");
    write_csv(&runs, &["L", "p_m", "p_s", "realization", "purification_time"], &times)?;
    let json = dir.join("purify.json");
    write_json(&json, &summaries)?;
    Ok(vec![entropy, runs, json])
}

/// Wrapping threshold of `kind` from first-wrap times; sample `s` of the
/// `k`-th size uses stream `s` of `seed ^ (k << 48)`.
pub fn threshold(kind: GraphKind, sizes: &[usize], samples: usize, seed: u64, workers: usize) -> LabResult<ThresholdEstimate> {
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 || samples < 2 {
        return Err(LabError::Config("percolation needs at least two sizes and two samples".into()));
    }
    let graphs: Vec<PercolationGraph> = sizes.iter().map(|&l| PercolationGraph::full(kind, l)).collect::<Result<_, _>>()?;
    let times = parallel_map(sizes.len() * samples, workers, |k| {
        let (si, s) = (k / samples, k % samples);
        let mut rng = stream(seed ^ ((si as u64) << 48), s as u64);
        first_wrap_time(&graphs[si], &mut rng)
    });
    let per_size: Vec<Vec<Option<usize>>> = times.chunks(samples).map(|c| c.to_vec()).collect();
    let bonds: Vec<usize> = graphs.iter().map(|g| g.bonds.len()).collect();
    Ok(threshold_from_times(kind, &sizes, &bonds, &per_size, seed)?)
}

fn percolate(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    let kind = GraphKind::parse(params.kind.as_deref().unwrap_or("kagome")).map_err(|e| LabError::Config(e.to_string()))?;
    let est = threshold(kind, &params.sizes()?, params.samples.unwrap_or(10_000), params.seed(), params.workers())?;
    let mut rows = Vec::new();
    for c in &est.curves {
        for k in 0..c.p.len() {
            rows.push(vec![kind.name().to_string(), c.l.to_string(), fmt9(c.p[k]), fmt9(c.probability[k]), fmt9(c.stderr[k])]);
        }
    }
    let csv = dir.join("spanning.csv");
    write_csv(&csv, &["kind", "L", "p", "probability", "stderr"], &rows)?;
    #[derive(Serialize)]
    struct Report<'a> {
        kind: &'a str,
        p_c: f64,
        stderr: f64,
        one_minus_p_c: f64,
        exact: f64,
        crossings: &'a [(usize, usize, f64)],
        samples: usize,
    }
    let json = dir.join("threshold.json");
    write_json(
        &json,
        &Report { kind: kind.name(), p_c: est.p_c, stderr: est.stderr, one_minus_p_c: 1.0 - est.p_c, exact: kind.exact_threshold(), crossings: &est.crossings, samples: est.curves[0].samples },
    )?;
    Ok(vec![csv, json])
}

/// Channel frequencies from `samples` single cycles; sample `k` uses stream
/// `k` of `seed`, matching the sequential estimator.
pub fn channel_probabilities(l: usize, p_m: f64, mode: MissMode, samples: usize, seed: u64, workers: usize) -> LabResult<ChannelProbabilities> {
    let lat = floquet_core::HoneycombLattice::build(l)?;
    let labels = parallel_map(samples, workers, |k| {
        let mut rng = stream(seed, k as u64);
        one_cycle_channel(&lat, p_m, mode, &mut rng).map(|(c, _)| c)
    });
    let labels: Vec<_> = labels.into_iter().collect::<Result<_, _>>()?;
    Ok(ChannelProbabilities::from_counts(count_channels(labels))?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport {
    pub l: usize,
    pub p_m: f64,
    pub probabilities: ChannelProbabilities,
    pub matrix: [[f64; 6]; 6],
    pub eigenvalues: Vec<(f64, f64)>,
    pub decay_rate: f64,
    pub predicted_g: Vec<f64>,
}

fn markov(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    let l = single("--L", &params.sizes()?)?;
    let mode = params.mode()?;
    let samples = params.samples.unwrap_or(10_000);
    let horizon = params.cycles.unwrap_or(100);
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for pm in params.p_m()? {
        let probs = channel_probabilities(l, pm, mode, samples, point_seed(params.seed(), l, pm, 0.0), params.workers())?;
        let m = TransferMatrix::build(probs.p)?;
        let predicted_g = m.predict_series(horizon);
        for (t, g) in predicted_g.iter().enumerate() {
            rows.push(vec![l.to_string(), fmt9(pm), t.to_string(), fmt9(*g)]);
        }
        reports.push(MarkovReport { l, p_m: pm, probabilities: probs, matrix: m.s, eigenvalues: m.eigenvalues(), decay_rate: m.decay_rate(), predicted_g });
    }
    let csv = dir.join("markov_gt.csv");
    write_csv(&csv, &["L", "p_m", "t", "g_predicted"], &rows)?;
    let json = dir.join("markov.json");
    write_json(&json, &reports)?;
    Ok(vec![csv, json])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollapseReport {
    pub input: PathBuf,
    pub ansatz: Ansatz,
    pub points: usize,
    pub sizes: Vec<usize>,
    pub result: CollapseResult,
}

fn collapse_cmd(params: &Params, dir: &Path) -> LabResult<Vec<PathBuf>> {
    let input = params.input()?;
    let ansatz = Ansatz::parse(params.ansatz.as_deref().unwrap_or("plain")).map_err(|e| LabError::Config(e.to_string()))?;
    let ds = ScalingDataset::new(read_scaling_points(input)?, ansatz)?;
    let opts = CollapseOptions { bootstrap: params.bootstrap.unwrap_or(200), seed: params.seed(), ..CollapseOptions::default() };
    let result = collapse(&ds, &opts)?;
    let rows: Vec<Vec<String>> = ds
        .transform(result.p_c, result.nu, result.eps)
        .iter()
        .zip(&ds.points)
        .map(|((x, y, s, l), pt)| vec![l.to_string(), fmt9(pt.p), fmt9(*x), fmt9(*y), fmt9(*s)])
        .collect();
    let csv = dir.join("collapsed.csv");
    write_csv(&csv, &["L", "p", "x", "y_scaled", "sigma_scaled"], &rows)?;
    let json = dir.join("collapse.json");
    write_json(&json, &CollapseReport { input: input.to_path_buf(), ansatz, points: ds.points.len(), sizes: ds.sizes(), result })?;
    Ok(vec![csv, json])
}
