//! Two-step detection: `(|k_x|, |k_y|, theta')` jointly, then `gamma'` alone.

use num_complex::Complex64;

use super::{DetectionResult, Feedback, HypothesisTable, Mode};
use crate::constellation::SymbolIndex;
use crate::error::{Error, Result};
use crate::frontend::DVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessiveDecision {
    pub result: DetectionResult,
    /// Winning triple of the first step.
    pub triple: usize,
    /// First-step objective of the winning triple.
    pub first_step_score: f64,
    /// `arg <d_k^, d_r^>` of the winning triple.
    pub alpha: f64,
    /// Hypotheses examined: `n_r^2 n_p + n_p`.
    pub hypotheses_examined: usize,
}

/// Step 1 minimizes `|d_k^|^2 - 2 sigma^2 ln I0(|<d_k^, d_r^>| / sigma^2)` over
/// the triples; step 2 picks the feasible `gamma'` maximizing
/// `cos(gamma' - gamma'' - alpha)`.
pub fn detect_successive(
    table: &HypothesisTable,
    d_r: &DVector,
    prev: usize,
    sigma_sq: f64,
    mode: Mode,
) -> Result<SuccessiveDecision> {
    if d_r.c3.norm_sqr() == 0.0 {
        return Err(Error::DegeneratePhase("|D r_y| = 0, fourth dimension undecidable"));
    }
    let dr2 = d_r.c2.conj();
    let mut best_t = 0;
    let mut best_score = f64::INFINITY;
    let mut best_corr = Complex64::new(0.0, 0.0);
    for (t, e) in table.triples.iter().enumerate() {
        let a = Complex64::from(e.kx_mag * d_r.c1) + e.dk2 * dr2;
        let score = mode.score(e.norm_sqr_hat, a.norm(), sigma_sq);
        if score < best_score {
            best_t = t;
            best_score = score;
            best_corr = a;
        }
    }

    let n_p = table.n_p();
    // Re(e^{i(gamma' - gamma'' - alpha)}) up to a positive factor common to all gamma'
    let reference = d_r.c3.conj() * best_corr.conj();
    let mut best_g = 0;
    let mut best_cos = f64::NEG_INFINITY;
    for g in 0..n_p {
        let v = (table.third(prev, best_t, g) * reference).re;
        if v > best_cos {
            best_cos = v;
            best_g = g;
        }
    }

    let c = table.constellation();
    let symbol = SymbolIndex::from_triple(best_t, best_g, c.n_r(), n_p);
    let d_k = table.d_k(prev, symbol);
    Ok(SuccessiveDecision {
        result: DetectionResult {
            symbol,
            score: mode.score(d_k.norm_sqr(), d_k.inner(d_r).norm(), sigma_sq),
        },
        triple: best_t,
        first_step_score: best_score,
        alpha: best_corr.arg(),
        hypotheses_examined: table.triple_count() + n_p,
    })
}

pub fn detect_successive_block(
    table: &HypothesisTable,
    observations: &[DVector],
    sigma_sq: f64,
    mode: Mode,
    feedback: Feedback<'_>,
) -> Result<Vec<DetectionResult>> {
    if observations.is_empty() {
        return Err(Error::EmptyBlock);
    }
    let c = table.constellation();
    let mut prev = table.pilot_triple();
    let mut out = Vec::with_capacity(observations.len());
    for (j, d_r) in observations.iter().enumerate() {
        let dec = detect_successive(table, d_r, prev, sigma_sq, mode)?;
        prev = match feedback {
            Feedback::Decision => dec.triple,
            Feedback::Genie(truth) => truth[j].triple(c.n_r(), c.n_p()),
        };
        out.push(dec.result);
    }
    Ok(out)
}
