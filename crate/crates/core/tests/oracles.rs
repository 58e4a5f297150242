//! Statistical and structural checks against independent oracles.

mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use stokesdd::channel::complex_gaussian;
use stokesdd::config::{ChannelMode, DeltaSpec, DetectorKind, ExperimentConfig};
use stokesdd::constellation::RingPhaseConstellation;
use stokesdd::detection::{
    detect_sequence, detect_successive_block, detect_symbol_block, detect_symbol_fast,
    phase_likelihood, rician_log_density, Feedback, HypothesisTable, LikelihoodTerms, Mode,
};
use stokesdd::frontend::DVector;
use stokesdd::harness::{
    compare_successive_gap, information_density, run_rate_sweep, simulate_block, stream_rng,
    StreamPurpose,
};

/// Upper 1 % point of the chi-square distribution (Wilson-Hilferty).
fn chi2_critical_99(df: usize) -> f64 {
    let k = df as f64;
    let z = 2.326_347_874_040_841;
    k * (1.0 - 2.0 / (9.0 * k) + z * (2.0 / (9.0 * k)).sqrt()).powi(3)
}

fn chi2(observed: &[f64], expected: &[f64]) -> f64 {
    observed
        .iter()
        .zip(expected)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum()
}

#[test]
fn received_magnitude_histogram_is_rician() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let (k, s2): (f64, f64) = (1.3, 0.4);
    let n = 1_000_000;
    let bins = 40;
    let top = k + 4.0 * s2.sqrt();
    let width = top / bins as f64;

    let mut observed = vec![0.0; bins + 1];
    for _ in 0..n {
        let r = (Complex64::new(k, 0.0) + complex_gaussian(s2, &mut rng)).norm();
        observed[((r / width) as usize).min(bins)] += 1.0;
    }
    let density = |r: f64| if r == 0.0 { 0.0 } else { rician_log_density(r, k, s2).exp() };
    let mut expected: Vec<f64> = (0..bins)
        .map(|i| n as f64 * simpson(density, i as f64 * width, (i + 1) as f64 * width, 20))
        .collect();
    let inside: f64 = expected.iter().sum();
    expected.push(n as f64 - inside);
    assert!(expected.iter().all(|&e| e >= 5.0));

    let stat = chi2(&observed, &expected);
    assert!(stat < chi2_critical_99(bins), "chi2 {stat:.1} vs {:.1}", chi2_critical_99(bins));
}

#[test]
fn phase_histogram_matches_conditional_density() {
    let c = RingPhaseConstellation::balanced(2, 4, 1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let cells = 8;
    let width = 2.0 * std::f64::consts::PI / cells as f64;
    let cell = |x: f64| (((x + std::f64::consts::PI) / width) as usize).min(cells - 1);
    let sub = 4;
    let node = |i: usize, j: usize| -std::f64::consts::PI + i as f64 * width + (j as f64 + 0.5) * width / sub as f64;

    let mut observed = vec![0.0; cells * cells];
    let mut expected = vec![0.0; cells * cells];
    for _ in 0..20_000 {
        let slot = random_slot(&c, (4.0, 8.0), &mut rng);
        let d_k = chain_d_k(&c, &slot.h, Some(slot.prev), slot.truth);
        let d_r = slot.d_r;
        observed[cell(d_r.theta()) * cells + cell(d_r.gamma())] += 1.0;
        for ti in 0..cells {
            for gi in 0..cells {
                let mut mass = 0.0;
                for tj in 0..sub {
                    for gj in 0..sub {
                        let probe = DVector::from_polar(d_r.mag_x(), d_r.mag_y(), node(ti, tj), d_r.prev_mag_y(), node(gi, gj));
                        mass += phase_likelihood(&LikelihoodTerms::new(&d_k, &probe, slot.sigma_sq)).exp();
                    }
                }
                expected[ti * cells + gi] += mass * (width / sub as f64).powi(2);
            }
        }
    }
    let total: f64 = expected.iter().sum();
    assert!((total - 20_000.0).abs() < 20.0, "expected counts sum to {total}");
    let stat = chi2(&observed, &expected);
    let df = cells * cells - 1;
    assert!(stat < chi2_critical_99(df), "chi2 {stat:.1} vs {:.1}", chi2_critical_99(df));
}

fn slot_agreement(snr_db: f64) -> f64 {
    let c = RingPhaseConstellation::balanced(2, 4, 1.0).unwrap();
    let s2 = c.noise_sigma_sq_db(snr_db);
    let (mut same, mut total) = (0usize, 0usize);
    for b in 0..1000 {
        let mut rng = stream_rng(23, StreamPurpose::Ser, b);
        let block = simulate_block(&c, &ChannelMode::Random, 64, s2, &mut rng).unwrap();
        let t = HypothesisTable::new(&c, &block.h);
        let run = |mode| detect_symbol_block(&t, &block.observations, s2, mode, Feedback::Decision).unwrap();
        let (exact, apx) = (run(Mode::Exact), run(Mode::HighSnr));
        same += exact.iter().zip(&apx).filter(|(a, b)| a.symbol == b.symbol).count();
        total += exact.len();
    }
    same as f64 / total as f64
}

#[test]
fn exact_and_high_snr_decisions_agree_at_high_snr() {
    let at20 = slot_agreement(20.0);
    let at30 = slot_agreement(30.0);
    assert!(at20 >= 0.99, "{at20}");
    assert!(at30 >= 0.999, "{at30}");
}

#[test]
fn block_decisions_are_scale_invariant() {
    let small = RingPhaseConstellation::new(4, 8, 1.0, 3.0).unwrap();
    let large = RingPhaseConstellation::new(4, 8, 2.0, 3.0).unwrap();
    for b in 0..40 {
        let snr = 8.0 + (b % 5) as f64 * 3.0;
        let blocks: Vec<_> = [&small, &large]
            .iter()
            .map(|c| {
                let mut rng = stream_rng(24, StreamPurpose::Ser, b);
                let s2 = c.noise_sigma_sq_db(snr);
                (simulate_block(c, &ChannelMode::Random, 16, s2, &mut rng).unwrap(), s2)
            })
            .collect();
        for mode in Mode::ALL {
            let decide = |i: usize| {
                let (block, s2) = &blocks[i];
                let c = if i == 0 { &small } else { &large };
                let t = HypothesisTable::new(c, &block.h);
                let obs = &block.observations;
                let pick = |d: Vec<stokesdd::detection::DetectionResult>| d.into_iter().map(|r| r.symbol).collect::<Vec<_>>();
                (
                    pick(detect_symbol_block(&t, obs, *s2, mode, Feedback::Decision).unwrap()),
                    pick(detect_sequence(&t, obs, *s2, mode).unwrap()),
                    pick(detect_successive_block(&t, obs, *s2, mode, Feedback::Decision).unwrap()),
                )
            };
            assert_eq!(decide(0), decide(1), "block {b} {}", mode.name());
        }
    }
}

#[test]
fn balanced_spacing_is_nearly_rate_optimal() {
    let grid = [1.0, 2.0, 3.0, 4.0, 6.0, 8.0];
    let mut deltas: Vec<DeltaSpec> = grid.iter().map(|&d| DeltaSpec::Value(d)).collect();
    deltas.push(DeltaSpec::Balanced);
    let cfg = ExperimentConfig {
        n_r: 2,
        n_p: 4,
        delta_sq: deltas,
        snr_db: vec![12.0],
        rate_samples: 3000,
        rate_batch: 250,
        rate_target_stderr: 0.0,
        seed: 25,
        ..ExperimentConfig::default()
    };
    let points = run_rate_sweep(&cfg).unwrap();
    let best = points.iter().map(|p| p.rate_bits).fold(f64::MIN, f64::max);
    let balanced = points.last().unwrap().rate_bits;
    assert!(best - balanced <= 0.2, "balanced {balanced:.3}, best {best:.3}");
}

#[test]
fn rate_is_nondecreasing_in_snr() {
    let cfg = ExperimentConfig {
        n_r: 2,
        n_p: 8,
        delta_sq: vec![DeltaSpec::Balanced],
        snr_db: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0],
        rate_samples: 2000,
        seed: 26,
        ..ExperimentConfig::default()
    };
    let points = run_rate_sweep(&cfg).unwrap();
    for w in points.windows(2) {
        let slack = 3.0 * (w[0].stderr.powi(2) + w[1].stderr.powi(2)).sqrt();
        assert!(w[1].rate_bits >= w[0].rate_bits - slack, "{:?} -> {:?}", w[0], w[1]);
    }
    for p in &points {
        assert!(p.rate_bits <= 2.0 * (16f64).log2() + 1e-9);
    }
}

#[test]
fn two_ring_successive_gap_regression() {
    let cfg = ExperimentConfig {
        n_r: 2,
        n_p: 4,
        delta_sq: vec![DeltaSpec::Value(4.83)],
        snr_db: (8..=20).step_by(2).map(f64::from).collect(),
        max_blocks: 300,
        batch_blocks: 10,
        detectors: vec![DetectorKind::Symbol, DetectorKind::Successive],
        seed: 27,
        ..ExperimentConfig::default()
    };
    let (_, reports) = compare_successive_gap(&cfg).unwrap();
    let gap = reports[0].gap(0).unwrap();
    println!("first-dimension gap {gap:.12}");
    assert!((gap - REGRESSION_GAP_DB).abs() < 1e-9, "{gap}");
}

const REGRESSION_GAP_DB: f64 = 0.016_995_393_911_489_742;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn information_density_never_exceeds_alphabet_entropy(seed in any::<u64>(), snr in -5.0f64..40.0) {
        let c = RingPhaseConstellation::balanced(2, 8, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slot = random_slot(&c, (snr, snr + 1e-9), &mut rng);
        let t = HypothesisTable::new(&c, &slot.h);
        let prev = slot.prev.triple(c.n_r(), c.n_p());
        let density = information_density(&t, prev, slot.truth, &slot.d_r, slot.sigma_sq);
        prop_assert!(density.is_finite());
        prop_assert!(density <= (c.symbol_count() as f64).log2() + 1e-9);
    }

    #[test]
    fn symbol_decision_minimizes_slot_cost(seed in any::<u64>(), snr in 0.0f64..30.0, high_snr in any::<bool>()) {
        let c = RingPhaseConstellation::new(2, 4, 1.0, 2.5).unwrap();
        let mode = if high_snr { Mode::HighSnr } else { Mode::Exact };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let slot = random_slot(&c, (snr, snr + 1e-9), &mut rng);
        let t = HypothesisTable::new(&c, &slot.h);
        let got = detect_symbol_fast(&t, &slot.d_r, slot.prev.triple(c.n_r(), c.n_p()), slot.sigma_sq, mode);
        let cost = |s| slot_cost(&chain_d_k(&c, &slot.h, Some(slot.prev), s), &slot.d_r, slot.sigma_sq, mode);
        let best = c.symbols().map(cost).fold(f64::INFINITY, f64::min);
        prop_assert!(cost(got.symbol) <= best + 1e-9 * best.abs().max(1.0));
    }

    #[test]
    fn random_channels_keep_noiseless_observations_consistent(seed in any::<u64>()) {
        let c = RingPhaseConstellation::balanced(4, 8, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = stokesdd::channel::sample_channel(&mut rng);
        let symbols = [random_symbol(&c, &mut rng), random_symbol(&c, &mut rng), random_symbol(&c, &mut rng)];
        let obs = three_slot_block(&c, &h, &symbols, 0.0, &mut rng);
        let t = table(&c, &h);
        let mut prev = t.pilot_triple();
        for (o, s) in obs.iter().zip(symbols) {
            let d_k = t.d_k(prev, s);
            for (a, b) in [(Complex64::from(o.c1), Complex64::from(d_k.c1)), (o.c2, d_k.c2), (o.c3, d_k.c3)] {
                prop_assert!((a - b).norm() < 1e-9);
            }
            prev = s.triple(c.n_r(), c.n_p());
        }
    }
}
