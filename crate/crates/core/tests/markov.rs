use floquet_core::markov::*;
use floquet_core::HoneycombLattice;
use proptest::prelude::*;

const QUOTED: [f64; 5] = [0.31, 0.30, 0.12, 0.23, 0.04];

#[test]
fn quoted_probabilities_give_printed_matrix() {
    let printed = [
        [0.31, 0.30, 0.0, 0.0, 0.0, 0.0],
        [0.30, 0.31, 0.0, 0.0, 0.0, 0.0],
        [0.12, 0.12, 0.73, 0.0, 0.0, 0.0],
        [0.23, 0.23, 0.0, 0.84, 0.0, 0.0],
        [0.0, 0.0, 0.27, 0.16, 1.0, 0.35],
        [0.04, 0.04, 0.0, 0.0, 0.0, 0.65],
    ];
    let m = TransferMatrix::build(QUOTED).unwrap();
    for r in 0..6 {
        for c in 0..6 {
            assert!((m.s[r][c] - printed[r][c]).abs() < 1e-12, "entry ({r},{c})");
        }
    }
    // third eigenvalue 0.73 by modulus: 1, 0.84, 0.73, 0.65, 0.61, 0.01
    let ev = m.eigenvalues();
    let moduli: Vec<f64> = ev.iter().map(|e| e.0.hypot(e.1)).collect();
    for (got, want) in moduli.iter().zip([1.0, 0.84, 0.73, 0.65, 0.61, 0.01]) {
        assert!((got - want).abs() < 1e-9, "{moduli:?}");
    }
    assert!((m.decay_rate() - 0.30).abs() < 0.02);
}

#[test]
fn limits() {
    let fet = TransferMatrix::build([0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
    for t in 0..20 {
        assert_eq!(fet.predict_g(t), ((t + 1) % 2) as f64);
    }
    let triv = TransferMatrix::build([1.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
    for r in 0..6 {
        for c in 0..6 {
            assert_eq!(triv.s[r][c], (r == c) as u8 as f64);
        }
    }
    assert!(TransferMatrix::build([0.5, 0.6, 0.0, 0.0, 0.0]).is_err());
    assert!(TransferMatrix::build([-0.1, 0.6, 0.0, 0.0, 0.0]).is_err());
}

#[test]
fn predicted_series_matches_pointwise_powers() {
    let m = TransferMatrix::build(QUOTED).unwrap();
    let series = m.predict_series(40);
    assert_eq!(series[0], 1.0);
    for (t, g) in series.iter().enumerate() {
        assert!((g - m.predict_g(t)).abs() < 1e-12);
    }
    // leakage into (f_x, f_z): G decays at the rate of the third eigenvalue
    let ratio = (series[40] + series[39]) / (series[30] + series[29]);
    assert!((-ratio.ln() / 10.0 - m.decay_rate()).abs() < 0.01);
}

#[test]
fn estimate_limits() {
    let lat = HoneycombLattice::build(6).unwrap();
    let p = estimate(&lat, 0.0, 20, 1).unwrap();
    assert_eq!(p.p, [0.0, 1.0, 0.0, 0.0, 0.0]);
    let p = estimate(&lat, 1.0, 20, 1).unwrap();
    assert_eq!(p.p, [1.0, 0.0, 0.0, 0.0, 0.0]);
    assert_eq!(p.samples, 20);
}

proptest! {
    #[test]
    fn columns_are_stochastic(raw in proptest::array::uniform6(0.0f64..1.0)) {
        let total: f64 = raw.iter().sum();
        let p = [raw[0] / total, raw[1] / total, raw[2] / total, raw[3] / total, raw[4] / total];
        let m = TransferMatrix::build(p).unwrap();
        for c in 0..6 {
            let sum: f64 = (0..6).map(|r| m.s[r][c]).sum();
            prop_assert!((sum - 1.0).abs() < 1e-9);
        }
        let ev = m.eigenvalues();
        prop_assert!((ev[0].0.hypot(ev[0].1) - 1.0).abs() < 1e-9);
        if p[2] + p[3] + p[4] > 0.05 {
            prop_assert!(m.evolve(2000)[4] > 0.99);
        }
    }
}
