use floquet_core::collapse::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    let (u, v): (f64, f64) = (r.gen_range(1e-12..1.0), r.gen());
    (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
}

fn synthetic(p_c: f64, nu: f64, eps: f64, ansatz: Ansatz, noise: f64, seed: u64) -> ScalingDataset {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::new();
    for l in [16usize, 32, 64] {
        for k in 0..21 {
            let p = p_c - 0.1 + 0.01 * k as f64;
            let x = (p - p_c) * (l as f64).powf(1.0 / nu);
            let f = 0.5 + 0.5 * (1.5 * x).tanh();
            let scale = (l as f64).powf(eps);
            let y = match ansatz {
                Ansatz::Plain => f,
                Ansatz::Power => scale * f,
                Ansatz::OnePlusPower => 1.0 + scale * f,
            };
            let sigma = noise.max(1e-4) * if ansatz == Ansatz::Plain { 1.0 } else { scale };
            pts.push(ScalingPoint { p, l, y: y + noise * gaussian(&mut r) * sigma / noise.max(1e-4), sigma });
        }
    }
    ScalingDataset::new(pts, ansatz).unwrap()
}

#[test]
fn noiseless_collapse_is_exact() {
    let ds = synthetic(0.5, 4.0 / 3.0, 0.0, Ansatz::Plain, 0.0, 1);
    let opts = CollapseOptions { bootstrap: 0, ..Default::default() };
    let res = collapse(&ds, &opts).unwrap();
    assert!((res.p_c - 0.5).abs() < 1e-3, "{res:?}");
    assert!((res.nu - 4.0 / 3.0).abs() < 0.02, "{res:?}");
}

#[test]
fn noisy_collapse_within_bootstrap_error() {
    for (seed, p_c, nu) in [(2u64, 0.5, 4.0 / 3.0), (3, 0.48, 1.35), (4, 0.3, 0.9)] {
        let ds = synthetic(p_c, nu, 0.0, Ansatz::Plain, 0.01, seed);
        let opts = CollapseOptions { bootstrap: 40, seed, ..Default::default() };
        let res = collapse(&ds, &opts).unwrap();
        assert!(res.p_c_err > 0.0 && res.nu_err > 0.0);
        assert!((res.p_c - p_c).abs() < 3.0 * res.p_c_err + 1e-3, "{res:?}");
        assert!((res.nu - nu).abs() < 3.0 * res.nu_err + 1e-2, "{res:?}");
    }
}

#[test]
fn exponent_ansatze_recover_eps() {
    for ansatz in [Ansatz::Power, Ansatz::OnePlusPower] {
        let ds = synthetic(0.4, 1.0, 0.5, ansatz, 0.0, 5);
        let res = collapse(&ds, &CollapseOptions { bootstrap: 0, ..Default::default() }).unwrap();
        assert!((res.p_c - 0.4).abs() < 2e-3, "{ansatz:?} {res:?}");
        assert!((res.nu - 1.0).abs() < 0.03, "{ansatz:?} {res:?}");
        assert!((res.eps - 0.5).abs() < 0.03, "{ansatz:?} {res:?}");
    }
}

#[test]
fn quality_invariances() {
    let ds = synthetic(0.5, 1.2, 0.0, Ansatz::Plain, 0.02, 6);
    let q = quality(&ds, 0.49, 1.1, 0.0);
    let mut shifted = ds.clone();
    shifted.points.iter_mut().for_each(|p| p.y += 3.0);
    assert!((quality(&shifted, 0.49, 1.1, 0.0) - q).abs() < 1e-9 * q.max(1.0));
    let mut shuffled = ds.clone();
    shuffled.points.reverse();
    shuffled.points.swap(3, 40);
    assert!((quality(&shuffled, 0.49, 1.1, 0.0) - q).abs() < 1e-9 * q.max(1.0));
    // the true parameters collapse better than a wrong guess
    assert!(quality(&ds, 0.5, 1.2, 0.0) < quality(&ds, 0.45, 2.5, 0.0));
}

#[test]
fn degenerate_data_rejected() {
    let pts: Vec<ScalingPoint> = (0..5).map(|k| ScalingPoint { p: 0.1 * k as f64, l: 8, y: 0.1, sigma: 0.01 }).collect();
    assert!(ScalingDataset::new(pts.clone(), Ansatz::Plain).is_err());
    let mut two = pts;
    two.push(ScalingPoint { p: 0.0, l: 16, y: 0.1, sigma: 0.0 });
    assert!(ScalingDataset::new(two, Ansatz::Plain).is_err());
    assert!(Ansatz::parse("plain").is_ok() && Ansatz::parse("cubic").is_err());
}

#[test]
fn nelder_mead_finds_rosenbrock_minimum() {
    let (v, f) = nelder_mead(|v: &[f64; 2]| (1.0 - v[0]).powi(2) + 100.0 * (v[1] - v[0] * v[0]).powi(2), [-1.2, 1.0], [0.1, 0.1], 5000);
    assert!(f < 1e-8 && (v[0] - 1.0).abs() < 1e-3 && (v[1] - 1.0).abs() < 1e-3, "{v:?} {f}");
}
