//! Monte Carlo experiment engine.
//!
//! Every block (or rate sample) draws from its own ChaCha8 stream selected by
//! `(seed, purpose, index)`, blocks are processed in fixed-size batches, and
//! batch results are reduced in index order. Results therefore do not depend
//! on the number of worker threads.

mod gap;
mod rate;
mod ser;

pub use gap::{compare_successive_gap, fit_log_slope, gap_between, ser_crossing, GapReport};
pub use rate::{information_density, run_rate_sweep, RatePoint};
pub use ser::{run_ser_sweep, run_ser_sweep_with, wilson_interval, SerCurve, SerPoint};

use rand::SeedableRng;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::channel::{add_noise, sample_b_zero_channel, sample_channel, ChannelMatrix, JonesPair};
use crate::config::ChannelMode;
use crate::constellation::{DifferentialEncoder, RingPhaseConstellation, SymbolIndex};
use crate::error::{Error, Result};
use crate::frontend::{front_end, observation_to_dr, DVector};

/// Independent random streams per experiment kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum StreamPurpose {
    Ser = 1,
    Rate = 2,
}

/// The generator for item `index` of an experiment.
pub fn stream_rng(seed: u64, purpose: StreamPurpose, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | index);
    rng
}

pub fn draw_channel<R: Rng + ?Sized>(mode: &ChannelMode, rng: &mut R) -> ChannelMatrix {
    match mode {
        ChannelMode::Random => sample_channel(rng),
        ChannelMode::BZero => sample_b_zero_channel(rng),
        ChannelMode::Fixed(h) => *h,
    }
}

/// One transmitted block after the receiver front end.
#[derive(Debug, Clone)]
pub struct SimulatedBlock {
    pub h: ChannelMatrix,
    pub sigma_sq: f64,
    /// Data symbols of slots `1..=n` (slot 0 is the pilot).
    pub symbols: Vec<SymbolIndex>,
    /// Received Jones pairs of slots `0..=n`.
    pub received: Vec<JonesPair>,
    /// `d_r` of slots `1..=n`.
    pub observations: Vec<DVector>,
}

/// Builds `d_r` through the six photodetector outputs; falls back to the
/// field-domain construction in the measure-zero case of a vanishing intensity.
pub fn observe(r: &JonesPair, prev: &JonesPair) -> DVector {
    let w = front_end(r, prev.y);
    observation_to_dr(&w, prev.y.norm()).unwrap_or_else(|_| DVector::from_jones(r, prev))
}

/// Draws `H`, then `block_len` uniform symbols, then the noise, in that order.
pub fn simulate_block<R: Rng + ?Sized>(
    c: &RingPhaseConstellation,
    channel: &ChannelMode,
    block_len: usize,
    sigma_sq: f64,
    rng: &mut R,
) -> Result<SimulatedBlock> {
    if block_len == 0 {
        return Err(Error::EmptyBlock);
    }
    let h = draw_channel(channel, rng);
    let (n_r, n_p) = (c.n_r(), c.n_p());
    let symbols: Vec<SymbolIndex> = (0..block_len)
        .map(|_| SymbolIndex::from_flat(rng.random_range(0..c.symbol_count()), n_r, n_p))
        .collect();
    let mut enc = DifferentialEncoder::new(c);
    let mut received = Vec::with_capacity(block_len + 1);
    received.push(add_noise(&h.apply(&enc.pilot()), sigma_sq, rng));
    for s in &symbols {
        let e = enc.encode(*s);
        received.push(add_noise(&h.apply(&e), sigma_sq, rng));
    }
    let observations = received.windows(2).map(|w| observe(&w[1], &w[0])).collect();
    Ok(SimulatedBlock {
        h,
        sigma_sq,
        symbols,
        received,
        observations,
    })
}

/// Runs `f` on a pool with `threads` workers (0 means the rayon default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}
