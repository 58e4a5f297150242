//! Fourth-dimension SER under random channels and under channels with no
//! cross-polarization coupling.

use stokesdd::config::{ChannelMode, DeltaSpec, ExperimentConfig};
use stokesdd::detection::Mode;
use stokesdd::harness::{fit_log_slope, run_ser_sweep};

fn main() -> stokesdd::Result<()> {
    for (name, channel) in [("random H", ChannelMode::Random), ("b = 0", ChannelMode::BZero)] {
        let cfg = ExperimentConfig {
            delta_sq: vec![DeltaSpec::Balanced],
            snr_db: (10..=28).step_by(3).map(f64::from).collect(),
            max_blocks: 600,
            modes: vec![Mode::Exact],
            channel,
            ..ExperimentConfig::default()
        };
        let curve = &run_ser_sweep(&cfg)?[0];
        println!("{name}");
        for p in &curve.points {
            println!("  {:>5.1} dB  theta {:.2e}  gamma {:.2e}", p.snr_db, p.ser(2), p.ser(3));
        }
        if let Some(slope) = fit_log_slope(&curve.points, 3, 18.0) {
            println!("  gamma log-log slope above 18 dB: {slope:.2}");
        }
    }
    Ok(())
}
