//! Sequence detection by min-sum on the block's chain factor graph.
//!
//! The per-slot cost
//! `|k_x[j]|^2 + |k_y[j]|^2 - 2 sigma^2 ln(I0(|<d_k[j], d_r[j]>| / sigma^2) / I0(lambda_y[j-1]))`
//! depends on slot `j`'s symbol and on the previous slot's `(|e_x|, |e_y|, theta)`
//! triple, so the chain state is that triple (`n_r^2 n_p` states), starting
//! from the pilot.

use num_complex::Complex64;

use super::{DetectionResult, HypothesisTable, Mode};
use crate::constellation::SymbolIndex;
use crate::error::{Error, Result};
use crate::frontend::DVector;

/// Global minimizer of the summed cost over all symbol sequences of the block.
///
/// `observations[j]` is `d_r` of data slot `j + 1`; its third entry carries
/// `|r_y|` of the preceding slot. Each result's `score` is the path metric up
/// to and including that slot.
pub fn detect_sequence(
    table: &HypothesisTable,
    observations: &[DVector],
    sigma_sq: f64,
    mode: Mode,
) -> Result<Vec<DetectionResult>> {
    if observations.is_empty() {
        return Err(Error::EmptyBlock);
    }
    let n_states = table.triple_count();
    let n_p = table.n_p();
    let mut metric = vec![f64::INFINITY; n_states];
    metric[table.pilot_triple()] = 0.0;
    // survivor (previous state, gamma) for every slot and state
    let mut survivors: Vec<Vec<(u32, u32)>> = Vec::with_capacity(observations.len());
    let mut metrics: Vec<Vec<f64>> = Vec::with_capacity(observations.len());
    let mut hat_corr = vec![Complex64::new(0.0, 0.0); n_states];

    for d_r in observations {
        let dr2 = d_r.c2.conj();
        let dr3 = d_r.c3.conj();
        let prev_r_y = d_r.c3.norm();
        for (a, e) in hat_corr.iter_mut().zip(&table.triples) {
            *a = Complex64::from(e.kx_mag * d_r.c1) + e.dk2 * dr2;
        }
        let mut next = vec![f64::INFINITY; n_states];
        let mut surv = vec![(0u32, 0u32); n_states];
        for p in 0..n_states {
            if !metric[p].is_finite() {
                continue;
            }
            let base = metric[p] + mode.log_bessel_term(table.ky_mag(p) * prev_r_y, sigma_sq);
            for g in 0..n_p {
                let b = table.third_base(p, g) * dr3;
                for (t, e) in table.triples.iter().enumerate() {
                    let corr = (hat_corr[t] + e.ux * b).norm();
                    let cand = base + e.norm_sqr_hat - mode.log_bessel_term(corr, sigma_sq);
                    if cand < next[t] {
                        next[t] = cand;
                        surv[t] = (p as u32, g as u32);
                    }
                }
            }
        }
        metric = next;
        survivors.push(surv);
        metrics.push(metric.clone());
    }

    let mut state = 0;
    for t in 1..n_states {
        if metric[t] < metric[state] {
            state = t;
        }
    }
    let c = table.constellation();
    let mut out = vec![
        DetectionResult {
            symbol: SymbolIndex::default(),
            score: 0.0
        };
        observations.len()
    ];
    for j in (0..observations.len()).rev() {
        let (p, g) = survivors[j][state];
        out[j] = DetectionResult {
            symbol: SymbolIndex::from_triple(state, g as usize, c.n_r(), n_p),
            score: metrics[j][state],
        };
        state = p as usize;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{sample_channel, ChannelMatrix};
    use crate::constellation::RingPhaseConstellation;
    use crate::detection::{detect_symbol_fast, Mode};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_block_rejected() {
        let c = RingPhaseConstellation::new(2, 4, 1.0, 1.0).unwrap();
        let table = HypothesisTable::new(&c, &ChannelMatrix::identity());
        assert_eq!(detect_sequence(&table, &[], 1.0, Mode::Exact), Err(Error::EmptyBlock));
    }

    #[test]
    fn single_slot_matches_symbol_detector() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let c = RingPhaseConstellation::new(2, 4, 1.0, 4.83).unwrap();
        for _ in 0..300 {
            let table = HypothesisTable::new(&c, &sample_channel(&mut rng));
            let sigma_sq = c.noise_sigma_sq_db(rng.random_range(0.0..20.0));
            let d_r = DVector::new(
                rng.random_range(0.1..3.0),
                Complex64::from_polar(rng.random_range(0.1..3.0), rng.random_range(-3.0..3.0)),
                Complex64::from_polar(rng.random_range(0.1..3.0), rng.random_range(-3.0..3.0)),
            );
            for mode in Mode::ALL {
                let seq = detect_sequence(&table, &[d_r], sigma_sq, mode).unwrap();
                let sym = detect_symbol_fast(&table, &d_r, 0, sigma_sq, mode);
                assert_eq!(seq[0].symbol, sym.symbol);
            }
        }
    }

    #[test]
    fn noiseless_block_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let c = RingPhaseConstellation::new(2, 4, 1.0, 4.83).unwrap();
        for _ in 0..50 {
            let table = HypothesisTable::new(&c, &sample_channel(&mut rng));
            let symbols: Vec<SymbolIndex> = (0..10)
                .map(|_| SymbolIndex::from_flat(rng.random_range(0..64), 2, 4))
                .collect();
            let mut prev = 0;
            let obs: Vec<DVector> = symbols
                .iter()
                .map(|s| {
                    let d = table.d_k(prev, *s);
                    prev = s.triple(2, 4);
                    d
                })
                .collect();
            let dec = detect_sequence(&table, &obs, c.noise_sigma_sq_db(40.0), Mode::Exact).unwrap();
            let got: Vec<SymbolIndex> = dec.iter().map(|d| d.symbol).collect();
            assert_eq!(got, symbols);
        }
    }
}
