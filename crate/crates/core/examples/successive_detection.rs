//! Two-step successive detection: how many hypotheses it scores and how its
//! third-dimension SER compares with the full search.

use stokesdd::config::{DeltaSpec, DetectorKind, ExperimentConfig};
use stokesdd::constellation::RingPhaseConstellation;
use stokesdd::detection::{detect_successive, HypothesisTable, Mode};
use stokesdd::harness::compare_successive_gap;

fn main() -> stokesdd::Result<()> {
    let c = RingPhaseConstellation::new(8, 8, 1.0, 0.69)?;
    let table = HypothesisTable::new(&c, &stokesdd::channel::ChannelMatrix::identity());
    let d_r = table.d_k(table.pilot_triple(), c.symbols().nth(1234).unwrap());
    let decision = detect_successive(&table, &d_r, table.pilot_triple(), 0.01, Mode::Exact)?;
    println!(
        "successive search scored {} hypotheses out of {}",
        decision.hypotheses_examined,
        c.symbol_count()
    );

    let cfg = ExperimentConfig {
        n_r: 8,
        n_p: 8,
        delta_sq: vec![DeltaSpec::Value(0.69)],
        snr_db: vec![12.0, 14.0, 16.0, 18.0, 20.0],
        max_blocks: 300,
        detectors: vec![DetectorKind::Symbol, DetectorKind::Successive],
        gap_target_ser: 1e-2,
        ..ExperimentConfig::default()
    };
    let (_, reports) = compare_successive_gap(&cfg)?;
    for d in 0..4 {
        match reports[0].gap(d) {
            Some(g) => println!("dimension {}: successive costs {g:+.2} dB at SER 1e-2", d + 1),
            None => println!("dimension {}: SER 1e-2 not bracketed", d + 1),
        }
    }
    Ok(())
}
