use super::{run_ser_sweep_with, with_threads, SerCurve, SerPoint};
use crate::config::{ExperimentConfig, Variant};
use crate::error::{Error, Result};

/// SNR (dB) at which a dimension's SER curve crosses `target`, interpolated
/// linearly in `(SNR dB, log SER)` between the first bracketing pair of points.
///
/// A zero-error point is floored at half an error over its trials.
pub fn ser_crossing(points: &[SerPoint], dimension: usize, target: f64) -> Result<f64> {
    let mut sorted: Vec<&SerPoint> = points.iter().collect();
    sorted.sort_by(|a, b| a.snr_db.total_cmp(&b.snr_db));
    let floored = |p: &SerPoint| {
        let ser = p.ser(dimension);
        if ser > 0.0 {
            ser
        } else {
            0.5 / p.trials.max(1) as f64
        }
    };
    for w in sorted.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (s_lo, s_hi) = (floored(lo), floored(hi));
        if s_lo >= target && s_hi < target {
            if s_lo == target {
                return Ok(lo.snr_db);
            }
            let t = (target.ln() - s_lo.ln()) / (s_hi.ln() - s_lo.ln());
            return Ok(lo.snr_db + t * (hi.snr_db - lo.snr_db));
        }
    }
    Err(Error::NotBracketed {
        target,
        dimension: dimension + 1,
    })
}

/// Least-squares slope of `log10 SER` against `log10 SNR` over the points with
/// `snr_db >= min_snr_db` and at least one error.
pub fn fit_log_slope(points: &[SerPoint], dimension: usize, min_snr_db: f64) -> Option<f64> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.snr_db >= min_snr_db && p.errors[dimension] > 0)
        .map(|p| (p.snr_db / 10.0, p.ser(dimension).log10()))
        .collect();
    if xy.len() < 2 {
        return None;
    }
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = xy.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xy.iter().map(|(x, _)| (x - mx).powi(2)).sum();
    Some(sxy / sxx)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub delta_sq: f64,
    pub target_ser: f64,
    pub baseline: Variant,
    pub candidate: Variant,
    /// Crossing SNRs per dimension; `None` when not bracketed.
    pub baseline_db: [Option<f64>; 4],
    pub candidate_db: [Option<f64>; 4],
}

impl GapReport {
    /// `candidate - baseline` in dB.
    pub fn gap(&self, dimension: usize) -> Option<f64> {
        Some(self.candidate_db[dimension]? - self.baseline_db[dimension]?)
    }
}

/// Compares two curves of the same `delta_sq` at `target`.
pub fn gap_between(baseline: &SerCurve, candidate: &SerCurve, target: f64) -> GapReport {
    let cross = |c: &SerCurve| std::array::from_fn(|d| ser_crossing(&c.points, d, target).ok());
    GapReport {
        delta_sq: baseline.delta_sq,
        target_ser: target,
        baseline: baseline.variant,
        candidate: candidate.variant,
        baseline_db: cross(baseline),
        candidate_db: cross(candidate),
    }
}

/// Runs the baseline and candidate detectors on shared blocks and reports the
/// per-dimension SNR gap at `gap.target_ser`, for every configured mode and
/// `delta_sq`.
pub fn compare_successive_gap(cfg: &ExperimentConfig) -> Result<(Vec<SerCurve>, Vec<GapReport>)> {
    let mut variants = Vec::new();
    for &mode in &cfg.modes {
        variants.push(Variant { detector: cfg.gap_baseline, mode });
        if cfg.gap_candidate != cfg.gap_baseline {
            variants.push(Variant { detector: cfg.gap_candidate, mode });
        }
    }
    let curves = with_threads(cfg.threads, || run_ser_sweep_with(cfg, &variants))??;
    let mut reports = Vec::new();
    for base in curves.iter().filter(|c| c.variant.detector == cfg.gap_baseline) {
        let cand = curves
            .iter()
            .find(|c| {
                c.delta_sq == base.delta_sq
                    && c.variant.mode == base.variant.mode
                    && c.variant.detector == cfg.gap_candidate
            })
            .unwrap_or(base);
        reports.push(gap_between(base, cand, cfg.gap_target_ser));
    }
    Ok((curves, reports))
}
