use rayon::prelude::*;

use super::{draw_channel, observe, stream_rng, with_threads, StreamPurpose};
use crate::channel::add_noise;
use crate::config::ExperimentConfig;
use crate::constellation::{DifferentialEncoder, RingPhaseConstellation, SymbolIndex};
use crate::detection::{log_i0, HypothesisTable};
use crate::error::Result;
use crate::frontend::DVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub snr_db: f64,
    pub delta_sq: f64,
    /// Mutual information estimate in bits per channel use.
    pub rate_bits: f64,
    pub stderr: f64,
    pub samples: u64,
    /// Whether `stderr` reached the configured target within the budget.
    pub converged: bool,
}

/// `log2 p(d_r | s) - log2 mean_s' p(d_r | s')` over all symbols `s'` that can
/// follow the true previous triple.
///
/// Only the hypothesis-dependent part of the log-likelihood is needed:
/// `-(|k_x|^2 + |k_y|^2) / 2 sigma^2 + ln I0(|<d_k, d_r>| / sigma^2)`.
pub fn information_density(
    table: &HypothesisTable,
    prev: usize,
    truth: SymbolIndex,
    d_r: &DVector,
    sigma_sq: f64,
) -> f64 {
    let c = table.constellation();
    let n_p = c.n_p();
    let dr2 = d_r.c2.conj();
    let dr3 = d_r.c3.conj();
    let bases: Vec<_> = (0..n_p).map(|g| table.third_base(prev, g) * dr3).collect();
    let true_flat = truth.flat(c.n_r(), n_p);
    let mut scores = Vec::with_capacity(c.symbol_count());
    for e in &table.triples {
        let a = num_complex::Complex64::from(e.kx_mag * d_r.c1) + e.dk2 * dr2;
        let energy = -e.norm_sqr_hat / (2.0 * sigma_sq);
        for base in &bases {
            let corr = (a + e.ux * base).norm();
            scores.push(energy + log_i0(corr / sigma_sq));
        }
    }
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
    (scores[true_flat] - lse + (scores.len() as f64).ln()) / std::f64::consts::LN_2
}

fn sample(c: &RingPhaseConstellation, cfg: &ExperimentConfig, sigma_sq: f64, index: u64) -> f64 {
    use rand::Rng;
    let mut rng = stream_rng(cfg.seed, StreamPurpose::Rate, index);
    let h = draw_channel(&cfg.channel, &mut rng);
    let (n_r, n_p) = (c.n_r(), c.n_p());
    let prev = SymbolIndex::from_flat(rng.random_range(0..c.symbol_count()), n_r, n_p);
    let truth = SymbolIndex::from_flat(rng.random_range(0..c.symbol_count()), n_r, n_p);
    let mut enc = DifferentialEncoder::new(c);
    let r_prev = add_noise(&h.apply(&enc.encode(prev)), sigma_sq, &mut rng);
    let r = add_noise(&h.apply(&enc.encode(truth)), sigma_sq, &mut rng);
    let table = HypothesisTable::new(c, &h);
    information_density(&table, prev.triple(n_r, n_p), truth, &observe(&r, &r_prev), sigma_sq)
}

fn estimate(c: &RingPhaseConstellation, cfg: &ExperimentConfig, snr_db: f64) -> RatePoint {
    let sigma_sq = c.noise_sigma_sq_db(snr_db);
    let (mut sum, mut sum_sq, mut n) = (0.0f64, 0.0f64, 0u64);
    let stderr = |sum: f64, sum_sq: f64, n: u64| {
        if n < 2 {
            return f64::INFINITY;
        }
        let nf = n as f64;
        let var = ((sum_sq - sum * sum / nf) / (nf - 1.0)).max(0.0);
        (var / nf).sqrt()
    };
    while (n as usize) < cfg.rate_samples {
        let end = (n as usize + cfg.rate_batch).min(cfg.rate_samples);
        let values: Vec<f64> = (n as usize..end)
            .into_par_iter()
            .map(|i| sample(c, cfg, sigma_sq, i as u64))
            .collect();
        for v in values {
            sum += v;
            sum_sq += v * v;
        }
        n = end as u64;
        if n as usize >= 2 * cfg.rate_batch && stderr(sum, sum_sq, n) <= cfg.rate_target_stderr {
            break;
        }
    }
    let se = stderr(sum, sum_sq, n);
    RatePoint {
        snr_db,
        delta_sq: c.delta_sq(),
        rate_bits: sum / n as f64,
        stderr: se,
        samples: n,
        converged: se <= cfg.rate_target_stderr,
    }
}

/// Achievable-rate estimate for every `delta_sq` and SNR of `cfg`, conditioned
/// on the true previous symbol.
///
/// Samples are drawn in batches of `rate.batch` up to `rate.samples`; a point
/// stops early once its standard error is below `rate.target_stderr`.
pub fn run_rate_sweep(cfg: &ExperimentConfig) -> Result<Vec<RatePoint>> {
    cfg.validate()?;
    let constellations = cfg
        .delta_sq
        .iter()
        .map(|d| cfg.constellation(d))
        .collect::<Result<Vec<_>>>()?;
    with_threads(cfg.threads, || {
        let mut out = Vec::new();
        for c in &constellations {
            for &snr in &cfg.snr_db {
                out.push(estimate(c, cfg, snr));
            }
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_channel;
    use crate::config::DeltaSpec;
    use crate::detection::joint_likelihood;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn density_matches_joint_likelihood_posterior() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let c = RingPhaseConstellation::new(2, 4, 1.0, 4.83).unwrap();
        for _ in 0..30 {
            let table = HypothesisTable::new(&c, &sample_channel(&mut rng));
            let prev = rng.random_range(0..c.triple_count());
            let truth = SymbolIndex::from_flat(rng.random_range(0..64), 2, 4);
            let sigma_sq = c.noise_sigma_sq_db(rng.random_range(0.0..15.0));
            let d_k = table.d_k(prev, truth);
            let d_r = DVector::new(
                d_k.c1 + 0.2,
                d_k.c2 * num_complex::Complex64::from_polar(1.1, 0.3),
                d_k.c3 * num_complex::Complex64::from_polar(0.9, -0.2),
            );
            let logs: Vec<f64> = table
                .hypotheses(prev)
                .iter()
                .map(|h| joint_likelihood(&d_r, &h.d_k, sigma_sq))
                .collect();
            let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let mean = logs.iter().map(|l| (l - max).exp()).sum::<f64>() / logs.len() as f64;
            let want = (logs[truth.flat(2, 4)] - max - mean.ln()) / std::f64::consts::LN_2;
            let got = information_density(&table, prev, truth, &d_r, sigma_sq);
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }

    #[test]
    fn rate_bounds_and_saturation() {
        let cfg = ExperimentConfig {
            delta_sq: vec![DeltaSpec::Balanced],
            snr_db: vec![-30.0, 60.0],
            rate_samples: 400,
            rate_batch: 100,
            ..ExperimentConfig::default()
        };
        let pts = run_rate_sweep(&cfg).unwrap();
        assert!(pts[0].rate_bits.abs() < 0.05, "{:?}", pts[0]);
        assert!((pts[1].rate_bits - 6.0).abs() < 0.05, "{:?}", pts[1]);
        for p in &pts {
            assert!(p.rate_bits <= 6.0 + 1e-9);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let mut cfg = ExperimentConfig {
            snr_db: vec![8.0],
            rate_samples: 300,
            rate_batch: 64,
            threads: 1,
            ..ExperimentConfig::default()
        };
        let one = run_rate_sweep(&cfg).unwrap();
        cfg.threads = 4;
        assert_eq!(one, run_rate_sweep(&cfg).unwrap());
    }
}
