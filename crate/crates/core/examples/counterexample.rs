//! Scores the three-vector example where maximum likelihood and minimum
//! Euclidean distance are claimed to disagree.

use num_complex::Complex64;
use stokesdd::detection::{min_distance_score, Mode};
use stokesdd::frontend::DVector;

fn main() {
    let p = Complex64::from_polar;
    let d_r = DVector::new(0.6, p(1.8, -2.0), p(1.8, 3.0));
    let hypotheses = [
        ("d_k1", DVector::new(3.5, p(1.2, -3.0), p(2.8, -2.0))),
        ("d_k2", DVector::new(2.1, p(2.8, 0.5), p(2.8, 3.0))),
    ];
    println!("{:>6} {:>12} {:>14}", "", "high-SNR ML", "min distance");
    for (name, d_k) in &hypotheses {
        let ml = Mode::HighSnr.score(d_k.norm_sqr(), d_k.inner(&d_r).norm(), 1.0);
        println!("{name:>6} {ml:>12.4} {:>14.4}", min_distance_score(d_k, &d_r));
    }
    println!("(lower is better in both columns)");
}
