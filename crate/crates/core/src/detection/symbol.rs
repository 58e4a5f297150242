//! Symbol-by-symbol detection over all `(n_r n_p)^2` hypotheses of a slot.

use num_complex::Complex64;

use super::{DetectionResult, Feedback, Hypothesis, HypothesisTable, Mode};
use crate::error::{Error, Result};
use crate::frontend::DVector;

/// Brute-force argmin of `|d_k|^2 - 2 sigma^2 ln I0(|<d_k, d_r>| / sigma^2)`
/// (or `|d_k|^2 - 2 |<d_k, d_r>|`) over `hypotheses`. Ties go to the first.
pub fn detect_symbol(
    d_r: &DVector,
    hypotheses: &[Hypothesis],
    sigma_sq: f64,
    mode: Mode,
) -> Result<DetectionResult> {
    let mut best: Option<DetectionResult> = None;
    for h in hypotheses {
        let score = mode.score(h.d_k.norm_sqr(), h.d_k.inner(d_r).norm(), sigma_sq);
        if best.is_none_or(|b| score < b.score) {
            best = Some(DetectionResult {
                symbol: h.symbol,
                score,
            });
        }
    }
    best.ok_or(Error::EmptyHypotheses)
}

/// Same decision as [`detect_symbol`] over `table.hypotheses(prev)`, with
/// triples skipped whenever `|<d_k, d_r>| <= |<d_k^, d_r^>| + |D k_y||D r_y|`
/// already rules them out.
pub fn detect_symbol_fast(
    table: &HypothesisTable,
    d_r: &DVector,
    prev: usize,
    sigma_sq: f64,
    mode: Mode,
) -> DetectionResult {
    let n_p = table.n_p();
    let dr2 = d_r.c2.conj();
    let dr3 = d_r.c3.conj();
    let c3_sq = table.ky_mag(prev).powi(2);
    let b_mag = table.ky_mag(prev) * d_r.c3.norm();
    let bases: Vec<Complex64> = (0..n_p).map(|g| table.third_base(prev, g) * dr3).collect();

    let mut hat_corr = Vec::with_capacity(table.triple_count());
    let mut bounds = Vec::with_capacity(table.triple_count());
    let mut seed = 0;
    for (t, e) in table.triples.iter().enumerate() {
        let a = Complex64::from(e.kx_mag * d_r.c1) + e.dk2 * dr2;
        let lb = e.norm_sqr_hat + c3_sq - mode.log_bessel_term(a.norm() + b_mag, sigma_sq);
        if lb < bounds.get(seed).copied().unwrap_or(f64::INFINITY) {
            seed = t;
        }
        hat_corr.push(a);
        bounds.push(lb);
    }

    let mut best = DetectionResult {
        symbol: Default::default(),
        score: f64::INFINITY,
    };
    let mut best_flat = usize::MAX;
    let c = table.constellation();
    let visit = |t: usize, best: &mut DetectionResult, best_flat: &mut usize| {
        let e = &table.triples[t];
        for (g, base) in bases.iter().enumerate() {
            let corr = (hat_corr[t] + e.ux * base).norm();
            let score = e.norm_sqr_hat + c3_sq - mode.log_bessel_term(corr, sigma_sq);
            let flat = t * n_p + g;
            if score < best.score || (score == best.score && flat < *best_flat) {
                *best = DetectionResult {
                    symbol: crate::constellation::SymbolIndex::from_flat(flat, c.n_r(), n_p),
                    score,
                };
                *best_flat = flat;
            }
        }
    };
    visit(seed, &mut best, &mut best_flat);
    for t in 0..table.triple_count() {
        if t == seed {
            continue;
        }
        // slack absorbs rounding in |a + b| versus |a| + |b|
        if bounds[t] > best.score + 1e-12 * best.score.abs().max(1.0) {
            continue;
        }
        visit(t, &mut best, &mut best_flat);
    }
    best
}

/// Runs [`detect_symbol_fast`] over a block, feeding back the previous slot.
pub fn detect_symbol_block(
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
        let res = detect_symbol_fast(table, d_r, prev, sigma_sq, mode);
        prev = match feedback {
            Feedback::Decision => res.symbol.triple(c.n_r(), c.n_p()),
            Feedback::Genie(truth) => truth[j].triple(c.n_r(), c.n_p()),
        };
        out.push(res);
    }
    Ok(out)
}
