//! Achievable rate of two constellations over SNR.

use stokesdd::config::{DeltaSpec, ExperimentConfig};
use stokesdd::harness::run_rate_sweep;

fn main() -> stokesdd::Result<()> {
    for (n_r, n_p) in [(2, 4), (4, 8)] {
        let cfg = ExperimentConfig {
            n_r,
            n_p,
            delta_sq: vec![DeltaSpec::Balanced],
            snr_db: (0..=30).step_by(5).map(f64::from).collect(),
            rate_samples: 2000,
            ..ExperimentConfig::default()
        };
        println!("{n_r}-ring / {n_p}-ary (max {} bits)", 2.0 * ((n_r * n_p) as f64).log2());
        for p in run_rate_sweep(&cfg)? {
            println!("  {:>5.1} dB  {:>7.3} bits  (se {:.3})", p.snr_db, p.rate_bits, p.stderr);
        }
    }
    Ok(())
}
