//! Independent oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;
use stokesdd::channel::{add_noise, sample_channel, ChannelMatrix};
use stokesdd::constellation::{DifferentialEncoder, RingPhaseConstellation, SymbolIndex};
use stokesdd::detection::{log_i0, HypothesisTable, Mode};
use stokesdd::frontend::DVector;

/// Composite Simpson rule on `[a, b]` with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Simpson nodes and weights on `[a, b]`.
pub fn simpson_rule(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (a + i as f64 * h, w * h / 3.0)
        })
        .collect()
}

/// Equally weighted nodes for a periodic integrand on `[-pi, pi)`.
pub fn periodic_rule(n: usize) -> Vec<(f64, f64)> {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    (0..n).map(|i| (-std::f64::consts::PI + i as f64 * h, h)).collect()
}

/// `d_k` of symbol `s` after `prev`, built from the Jones vectors the
/// transmitter emits (the common phase of the pair cancels).
pub fn chain_d_k(c: &RingPhaseConstellation, h: &ChannelMatrix, prev: Option<SymbolIndex>, s: SymbolIndex) -> DVector {
    let mut enc = DifferentialEncoder::new(c);
    let e_prev = match prev {
        Some(p) => enc.encode(p),
        None => enc.pilot(),
    };
    let e = enc.encode(s);
    DVector::from_jones(&h.apply(&e), &h.apply(&e_prev))
}

pub fn random_symbol<R: Rng>(c: &RingPhaseConstellation, rng: &mut R) -> SymbolIndex {
    SymbolIndex::from_flat(rng.random_range(0..c.symbol_count()), c.n_r(), c.n_p())
}

/// One noisy slot with a known predecessor.
pub struct Slot {
    pub h: ChannelMatrix,
    pub prev: SymbolIndex,
    pub truth: SymbolIndex,
    pub d_r: DVector,
    pub sigma_sq: f64,
}

pub fn random_slot<R: Rng>(c: &RingPhaseConstellation, snr_db: (f64, f64), rng: &mut R) -> Slot {
    let h = sample_channel(rng);
    let prev = random_symbol(c, rng);
    let truth = random_symbol(c, rng);
    let sigma_sq = c.noise_sigma_sq_db(rng.random_range(snr_db.0..snr_db.1));
    let mut enc = DifferentialEncoder::new(c);
    let r_prev = add_noise(&h.apply(&enc.encode(prev)), sigma_sq, rng);
    let r = add_noise(&h.apply(&enc.encode(truth)), sigma_sq, rng);
    Slot {
        h,
        prev,
        truth,
        d_r: DVector::from_jones(&r, &r_prev),
        sigma_sq,
    }
}

/// Per-slot sequence cost
/// `|k_x|^2 + |k_y|^2 - 2 sigma^2 [ln I0(|<d_k, d_r>| / sigma^2) - ln I0(|D k_y||D r_y| / sigma^2)]`
/// written out from the d-vectors directly.
pub fn slot_cost(d_k: &DVector, d_r: &DVector, sigma_sq: f64, mode: Mode) -> f64 {
    let corr: Complex64 = Complex64::from(d_k.c1 * d_r.c1) + d_k.c2 * d_r.c2.conj() + d_k.c3 * d_r.c3.conj();
    let prev = d_k.c3.norm() * d_r.c3.norm();
    let energy = d_k.c1 * d_k.c1 + d_k.c2.norm_sqr();
    match mode {
        Mode::Exact => {
            energy - 2.0 * sigma_sq * (log_i0(corr.norm() / sigma_sq) - log_i0(prev / sigma_sq))
        }
        Mode::HighSnr => energy - 2.0 * (corr.norm() - prev),
    }
}

/// Exhaustive minimizer of the summed slot cost over all `symbol_count^3`
/// sequences of a three-slot block.
pub fn exhaustive_three_slot(
    c: &RingPhaseConstellation,
    h: &ChannelMatrix,
    obs: &[DVector; 3],
    sigma_sq: f64,
    mode: Mode,
) -> [SymbolIndex; 3] {
    let m = c.symbol_count();
    let sym = |i: usize| SymbolIndex::from_flat(i, c.n_r(), c.n_p());
    let first: Vec<f64> = (0..m)
        .map(|s| slot_cost(&chain_d_k(c, h, None, sym(s)), &obs[0], sigma_sq, mode))
        .collect();
    let pair = |o: &DVector| -> Vec<f64> {
        let mut t = vec![0.0; m * m];
        for p in 0..m {
            for s in 0..m {
                t[p * m + s] = slot_cost(&chain_d_k(c, h, Some(sym(p)), sym(s)), o, sigma_sq, mode);
            }
        }
        t
    };
    let second = pair(&obs[1]);
    let third = pair(&obs[2]);
    let mut best = (f64::INFINITY, [0usize; 3]);
    for a in 0..m {
        for b in 0..m {
            let ab = first[a] + second[a * m + b];
            for (x, cost) in third[b * m..(b + 1) * m].iter().enumerate() {
                let total = ab + cost;
                if total < best.0 {
                    best = (total, [a, b, x]);
                }
            }
        }
    }
    best.1.map(sym)
}

/// Noisy three-slot block observations for `symbols` after the pilot.
pub fn three_slot_block<R: Rng>(
    c: &RingPhaseConstellation,
    h: &ChannelMatrix,
    symbols: &[SymbolIndex; 3],
    sigma_sq: f64,
    rng: &mut R,
) -> [DVector; 3] {
    let mut enc = DifferentialEncoder::new(c);
    let mut prev = add_noise(&h.apply(&enc.pilot()), sigma_sq, rng);
    let mut out = [DVector::new(0.0, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 3];
    for (o, s) in out.iter_mut().zip(symbols) {
        let r = add_noise(&h.apply(&enc.encode(*s)), sigma_sq, rng);
        *o = DVector::from_jones(&r, &prev);
        prev = r;
    }
    out
}

pub fn table(c: &RingPhaseConstellation, h: &ChannelMatrix) -> HypothesisTable {
    HypothesisTable::new(c, h)
}
