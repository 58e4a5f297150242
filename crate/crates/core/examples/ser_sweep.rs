//! Per-dimension SER of the symbol-by-symbol detector for two ring spacings.

use stokesdd::config::{DeltaSpec, ExperimentConfig};
use stokesdd::detection::Mode;
use stokesdd::harness::{run_ser_sweep, ser_crossing};

fn main() -> stokesdd::Result<()> {
    let cfg = ExperimentConfig {
        n_r: 2,
        n_p: 4,
        delta_sq: vec![DeltaSpec::Value(1.0), DeltaSpec::Balanced],
        snr_db: (8..=26).step_by(2).map(f64::from).collect(),
        max_blocks: 600,
        modes: vec![Mode::Exact],
        ..ExperimentConfig::default()
    };
    for curve in run_ser_sweep(&cfg)? {
        println!("delta_sq = {:.3} ({})", curve.delta_sq, curve.variant);
        println!("  {:>6} {:>10} {:>10} {:>10} {:>10}", "SNR", "|e_x|", "|e_y|", "theta", "gamma");
        for p in &curve.points {
            println!(
                "  {:>6.1} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
                p.snr_db,
                p.ser(0),
                p.ser(1),
                p.ser(2),
                p.ser(3)
            );
        }
        for d in 0..4 {
            if let Ok(snr) = ser_crossing(&curve.points, d, 1e-2) {
                println!("  dimension {} reaches SER 1e-2 at {snr:.2} dB", d + 1);
            }
        }
    }
    Ok(())
}
