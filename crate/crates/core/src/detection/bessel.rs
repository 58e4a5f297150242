//! `ln I0(x)` without overflow.
//!
//! Below [`SERIES_CROSSOVER`] the power series `sum (x^2/4)^k / (k!)^2` is
//! summed directly (all terms positive, so no cancellation); above it the
//! asymptotic expansion
//! `ln I0(x) = x - ln sqrt(2 pi x) + ln(1 + sum_k prod_{j<=k} (2j-1)^2 / (8 j x))`
//! is used, truncated at its smallest term.

use std::f64::consts::PI;

/// Switch point between the power series and the asymptotic expansion.
pub const SERIES_CROSSOVER: f64 = 25.0;

pub fn log_i0(x: f64) -> f64 {
    debug_assert!(x >= 0.0 || x.is_nan(), "log_i0 of negative argument {x}");
    let x = x.abs();
    if x < SERIES_CROSSOVER {
        log_i0_series(x)
    } else {
        log_i0_asymptotic(x)
    }
}

fn log_i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut tail = 0.0;
    let mut k = 1.0;
    loop {
        term *= q / (k * k);
        tail += term;
        if term <= 1e-17 * (1.0 + tail) {
            break;
        }
        k += 1.0;
    }
    tail.ln_1p()
}

fn log_i0_asymptotic(x: f64) -> f64 {
    let inv8x = 1.0 / (8.0 * x);
    let mut term = 1.0;
    let mut tail = 0.0;
    let mut k = 1.0;
    loop {
        let odd = 2.0 * k - 1.0;
        let next = term * odd * odd * inv8x / k;
        if next >= term || next <= 1e-17 {
            if next < term {
                tail += next;
            }
            break;
        }
        term = next;
        tail += term;
        k += 1.0;
    }
    x - 0.5 * (2.0 * PI * x).ln() + tail.ln_1p()
}
