//! Transmits blocks through random channels without noise, detects them and
//! maps the decisions back to the transmitted four-dimensional symbols.

use stokesdd::config::ChannelMode;
use stokesdd::constellation::RingPhaseConstellation;
use stokesdd::detection::{decisions_to_e_domain, detect_symbol_block, Feedback, HypothesisTable, Mode};
use stokesdd::harness::{simulate_block, stream_rng, StreamPurpose};

fn main() -> stokesdd::Result<()> {
    let c = RingPhaseConstellation::balanced(4, 8, 1.0)?;
    let mut worst = 0.0f64;
    for b in 0..100 {
        let mut rng = stream_rng(7, StreamPurpose::Ser, b);
        let block = simulate_block(&c, &ChannelMode::Random, 32, 0.0, &mut rng)?;
        let table = HypothesisTable::new(&c, &block.h);
        let decisions = detect_symbol_block(&table, &block.observations, 0.0, Mode::Exact, Feedback::Decision)?;
        assert!(decisions.iter().zip(&block.symbols).all(|(d, s)| d.symbol == *s));

        let mut d_ks = vec![table.pilot_d_k()];
        let mut prev = table.pilot_triple();
        for d in &decisions {
            d_ks.push(table.d_k(prev, d.symbol));
            prev = d.symbol.triple(c.n_r(), c.n_p());
        }
        for (got, s) in decisions_to_e_domain(&d_ks, &block.h)?.iter().zip(&block.symbols) {
            let want = c.four_d(*s);
            worst = worst.max((got.mag_x - want.mag_x).abs()).max((got.mag_y - want.mag_y).abs());
        }
    }
    println!("100 blocks of 32 symbols recovered; largest magnitude error {worst:.2e}");
    Ok(())
}
