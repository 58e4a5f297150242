//! Viterbi sequence detection against symbol-by-symbol detection on the same
//! noisy blocks.

use stokesdd::config::ChannelMode;
use stokesdd::constellation::RingPhaseConstellation;
use stokesdd::detection::{detect_sequence, detect_symbol_block, Feedback, HypothesisTable, Mode};
use stokesdd::harness::{simulate_block, stream_rng, StreamPurpose};

fn main() -> stokesdd::Result<()> {
    let c = RingPhaseConstellation::balanced(2, 8, 1.0)?;
    for snr_db in [8.0, 12.0, 16.0] {
        let s2 = c.noise_sigma_sq_db(snr_db);
        let (mut sym_errors, mut seq_errors, mut total) = (0, 0, 0);
        for b in 0..200 {
            let mut rng = stream_rng(3, StreamPurpose::Ser, b);
            let block = simulate_block(&c, &ChannelMode::Random, 64, s2, &mut rng)?;
            let table = HypothesisTable::new(&c, &block.h);
            let sym = detect_symbol_block(&table, &block.observations, s2, Mode::Exact, Feedback::Decision)?;
            let seq = detect_sequence(&table, &block.observations, s2, Mode::Exact)?;
            for ((a, b), s) in sym.iter().zip(&seq).zip(&block.symbols) {
                sym_errors += (a.symbol != *s) as usize;
                seq_errors += (b.symbol != *s) as usize;
                total += 1;
            }
        }
        println!(
            "{snr_db:>5.1} dB  symbol-by-symbol {:.3e}  sequence {:.3e}",
            sym_errors as f64 / total as f64,
            seq_errors as f64 / total as f64
        );
    }
    Ok(())
}
