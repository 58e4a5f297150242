//! Balanced ring spacing for the reference constellations.

use stokesdd::constellation::{balanced_delta_sq, RingPhaseConstellation};

fn main() -> stokesdd::Result<()> {
    println!("{:>4} {:>4} {:>10} {:>12}", "n_r", "n_p", "delta_sq", "outer radius");
    for (n_r, n_p) in stokesdd::io::TABLE1_PAIRS {
        let delta_sq = balanced_delta_sq(n_r, n_p)?;
        let c = RingPhaseConstellation::new(n_r, n_p, 1.0, delta_sq)?;
        let outer = c.radii().last().copied().unwrap_or(1.0);
        println!("{n_r:>4} {n_p:>4} {delta_sq:>10.4} {outer:>12.4}");
    }
    Ok(())
}
