use rayon::prelude::*;

use super::{simulate_block, stream_rng, with_threads, SimulatedBlock, StreamPurpose};
use crate::config::{DetectorKind, ExperimentConfig, FeedbackMode, Variant};
use crate::constellation::RingPhaseConstellation;
use crate::detection::{
    detect_sequence, detect_successive_block, detect_symbol_block, DetectionResult, Feedback,
    HypothesisTable,
};
use crate::error::Result;

/// Per-dimension error tallies at one SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SerPoint {
    pub snr_db: f64,
    /// Dimensions in order `|e_x|`, `|e_y|`, `theta`, `gamma`.
    pub errors: [u64; 4],
    /// Detected slots (the same for every dimension).
    pub trials: u64,
    pub blocks: u64,
}

impl SerPoint {
    /// `dimension` is 0-based.
    pub fn ser(&self, dimension: usize) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.errors[dimension] as f64 / self.trials as f64
        }
    }

    pub fn interval(&self, dimension: usize) -> (f64, f64) {
        wilson_interval(self.errors[dimension], self.trials)
    }
}

/// 95 % Wilson score interval for a binomial proportion.
pub fn wilson_interval(errors: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054_f64;
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SerCurve {
    pub delta_sq: f64,
    pub variant: Variant,
    pub points: Vec<SerPoint>,
}

fn detect(
    table: &HypothesisTable,
    block: &SimulatedBlock,
    variant: Variant,
    feedback: FeedbackMode,
) -> Result<Vec<DetectionResult>> {
    let fb = match feedback {
        FeedbackMode::Decision => Feedback::Decision,
        FeedbackMode::Genie => Feedback::Genie(&block.symbols),
    };
    let (obs, s2, mode) = (&block.observations, block.sigma_sq, variant.mode);
    match variant.detector {
        DetectorKind::Symbol => detect_symbol_block(table, obs, s2, mode, fb),
        DetectorKind::Sequence => detect_sequence(table, obs, s2, mode),
        DetectorKind::Successive => detect_successive_block(table, obs, s2, mode, fb),
    }
}

fn block_errors(
    c: &RingPhaseConstellation,
    cfg: &ExperimentConfig,
    variants: &[Variant],
    sigma_sq: f64,
    index: u64,
) -> Result<Vec<[u64; 4]>> {
    let mut rng = stream_rng(cfg.seed, StreamPurpose::Ser, index);
    let block = simulate_block(c, &cfg.channel, cfg.block_len, sigma_sq, &mut rng)?;
    let table = HypothesisTable::new(c, &block.h);
    variants
        .iter()
        .map(|v| {
            let decisions = detect(&table, &block, *v, cfg.feedback)?;
            let mut errs = [0u64; 4];
            for (d, s) in decisions.iter().zip(&block.symbols) {
                for (e, wrong) in errs.iter_mut().zip(d.dimension_errors(s)) {
                    *e += wrong as u64;
                }
            }
            Ok(errs)
        })
        .collect()
}

fn active_dimensions(c: &RingPhaseConstellation) -> Vec<usize> {
    let mut dims = Vec::new();
    if c.n_r() > 1 {
        dims.extend([0, 1]);
    }
    if c.n_p() > 1 {
        dims.extend([2, 3]);
    }
    dims
}

/// Simulates one SNR point for all variants on shared blocks.
fn run_point(
    c: &RingPhaseConstellation,
    cfg: &ExperimentConfig,
    variants: &[Variant],
    snr_db: f64,
) -> Result<Vec<SerPoint>> {
    let sigma_sq = c.noise_sigma_sq_db(snr_db);
    let dims = active_dimensions(c);
    let mut points = vec![
        SerPoint {
            snr_db,
            errors: [0; 4],
            trials: 0,
            blocks: 0,
        };
        variants.len()
    ];
    let mut next = 0usize;
    while next < cfg.max_blocks {
        let end = (next + cfg.batch_blocks).min(cfg.max_blocks);
        let batch: Vec<Result<Vec<[u64; 4]>>> = (next..end)
            .into_par_iter()
            .map(|b| block_errors(c, cfg, variants, sigma_sq, b as u64))
            .collect();
        for per_block in batch {
            for (p, errs) in points.iter_mut().zip(per_block?) {
                for (acc, e) in p.errors.iter_mut().zip(errs) {
                    *acc += e;
                }
                p.trials += cfg.block_len as u64;
                p.blocks += 1;
            }
        }
        next = end;
        let done = points
            .iter()
            .all(|p| dims.iter().all(|&d| p.errors[d] >= cfg.target_errors));
        if done {
            break;
        }
    }
    Ok(points)
}

/// SER sweep over every `delta_sq` and SNR of `cfg` for the given variants.
///
/// All variants see the same blocks, and every SNR point reuses the same
/// block streams with rescaled noise. Each point stops after `max_blocks` or
/// once every variant has `target_errors` errors in every dimension.
/// Runs on the calling thread pool.
pub fn run_ser_sweep_with(cfg: &ExperimentConfig, variants: &[Variant]) -> Result<Vec<SerCurve>> {
    cfg.validate()?;
    let mut curves = Vec::new();
    for delta in &cfg.delta_sq {
        let c = cfg.constellation(delta)?;
        let mut per_variant: Vec<Vec<SerPoint>> = vec![Vec::new(); variants.len()];
        for &snr in &cfg.snr_db {
            for (dst, p) in per_variant.iter_mut().zip(run_point(&c, cfg, variants, snr)?) {
                dst.push(p);
            }
        }
        for (v, points) in variants.iter().zip(per_variant) {
            curves.push(SerCurve {
                delta_sq: c.delta_sq(),
                variant: *v,
                points,
            });
        }
    }
    Ok(curves)
}

/// [`run_ser_sweep_with`] for the configured variants on `cfg.threads` workers.
pub fn run_ser_sweep(cfg: &ExperimentConfig) -> Result<Vec<SerCurve>> {
    let variants = cfg.variants();
    with_threads(cfg.threads, || run_ser_sweep_with(cfg, &variants))?
}
