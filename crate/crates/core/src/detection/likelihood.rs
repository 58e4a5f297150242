//! Log-densities of the received dimensions given a k-domain hypothesis.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::bessel::log_i0;
use crate::constellation::wrap_angle;
use crate::frontend::DVector;

/// Quantities shared by the phase and joint likelihoods of one (hypothesis, observation) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LikelihoodTerms {
    pub sigma_sq: f64,
    /// `|r_x||k_x| / sigma^2`
    pub lambda_x: f64,
    /// `|r_y||k_y| / sigma^2`
    pub lambda_y: f64,
    /// `|D r_y||D k_y| / sigma^2`
    pub prev_lambda_y: f64,
    /// `<d_k, d_r>`
    pub corr: Complex64,
    pub corr_mag: f64,
    /// `<d_k^, d_r^>`
    pub corr_hat: Complex64,
    pub corr_mag_hat: f64,
    /// `arg <d_k^, d_r^>`
    pub alpha: f64,
    /// `arg <d_k, d_r> - alpha`, wrapped
    pub beta: f64,
}

impl LikelihoodTerms {
    pub fn new(d_k: &DVector, d_r: &DVector, sigma_sq: f64) -> Self {
        let corr = d_k.inner(d_r);
        let corr_hat = d_k.inner_hat(d_r);
        let alpha = corr_hat.arg();
        Self {
            sigma_sq,
            lambda_x: d_r.mag_x() * d_k.mag_x() / sigma_sq,
            lambda_y: d_r.mag_y() * d_k.mag_y() / sigma_sq,
            prev_lambda_y: d_r.prev_mag_y() * d_k.prev_mag_y() / sigma_sq,
            corr,
            corr_mag: corr.norm(),
            corr_hat,
            corr_mag_hat: corr_hat.norm(),
            alpha,
            beta: wrap_angle(corr.arg() - alpha),
        }
    }
}

/// Rician log-density of one received magnitude.
pub fn rician_log_density(r: f64, k: f64, sigma_sq: f64) -> f64 {
    (r / sigma_sq).ln() - (r * r + k * k) / (2.0 * sigma_sq) + log_i0(r * k / sigma_sq)
}

/// Log-density of `(|r_x|, |r_y|)` given `(|k_x|, |k_y|)`.
pub fn radii_likelihood(r_mags: (f64, f64), k_mags: (f64, f64), sigma_sq: f64) -> f64 {
    rician_log_density(r_mags.0, k_mags.0, sigma_sq) + rician_log_density(r_mags.1, k_mags.1, sigma_sq)
}

/// Log-density of `(theta'', gamma'')` given the magnitudes and the hypothesis.
pub fn phase_likelihood(terms: &LikelihoodTerms) -> f64 {
    log_i0(terms.corr_mag / terms.sigma_sq)
        - (4.0 * PI * PI).ln()
        - log_i0(terms.lambda_x)
        - log_i0(terms.lambda_y)
        - log_i0(terms.prev_lambda_y)
}

/// Log-density of `(|r_x|, |r_y|, theta'', gamma'')` given `d_k` and `|D r_y|`.
pub fn joint_likelihood(d_r: &DVector, d_k: &DVector, sigma_sq: f64) -> f64 {
    let (rx, ry) = (d_r.mag_x(), d_r.mag_y());
    let (kx, ky) = (d_k.mag_x(), d_k.mag_y());
    let corr = d_k.inner(d_r).norm();
    (rx * ry / (4.0 * PI * PI * sigma_sq * sigma_sq)).ln()
        - (rx * rx + ry * ry + kx * kx + ky * ky) / (2.0 * sigma_sq)
        + log_i0(corr / sigma_sq)
        - log_i0(d_r.prev_mag_y() * d_k.prev_mag_y() / sigma_sq)
}

/// Log-density of `(|r_x|, |r_y|, theta'')` given the truncated hypothesis;
/// the third entries of both vectors are ignored.
pub fn first_step_likelihood(d_r: &DVector, d_k: &DVector, sigma_sq: f64) -> f64 {
    let (rx, ry) = (d_r.mag_x(), d_r.mag_y());
    (rx * ry / (2.0 * PI * sigma_sq * sigma_sq)).ln()
        - (d_r.norm_sqr_hat() + d_k.norm_sqr_hat()) / (2.0 * sigma_sq)
        + log_i0(d_k.inner_hat(d_r).norm() / sigma_sq)
}

/// Euclidean-distance objective `|d_k|^2 - 2 Re <d_k, d_r>`.
pub fn min_distance_score(d_k: &DVector, d_r: &DVector) -> f64 {
    d_k.norm_sqr() - 2.0 * d_k.inner(d_r).re
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::Mode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_d(rng: &mut ChaCha8Rng, scale: f64) -> DVector {
        DVector::from_polar(
            rng.random_range(0.1..scale),
            rng.random_range(0.1..scale),
            rng.random_range(-PI..PI),
            rng.random_range(0.1..scale),
            rng.random_range(-PI..PI),
        )
    }

    #[test]
    fn zero_mean_collapses_to_rayleigh() {
        let s2: f64 = 0.8;
        for r in [0.1_f64, 0.5, 1.3, 3.0] {
            let rayleigh = (r / s2).ln() - r * r / (2.0 * s2);
            assert!((rician_log_density(r, 0.0, s2) - rayleigh).abs() < 1e-14);
        }
        let got = radii_likelihood((0.4, 1.1), (0.0, 0.0), s2);
        let want = (0.4 / s2).ln() - 0.16 / (2.0 * s2) + (1.1 / s2).ln() - 1.21 / (2.0 * s2);
        assert!((got - want).abs() < 1e-14);
    }

    #[test]
    fn phase_density_uniform_without_signal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d_r = random_d(&mut rng, 2.0);
        let zero = DVector::default();
        let t = LikelihoodTerms::new(&zero, &d_r, 0.5);
        assert!((phase_likelihood(&t) + (4.0 * PI * PI).ln()).abs() < 1e-14);
    }

    #[test]
    fn joint_factorizes_into_radii_and_phase() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let s2 = rng.random_range(0.05..2.0);
            let d_k = random_d(&mut rng, 3.0);
            let d_r = random_d(&mut rng, 3.0);
            let t = LikelihoodTerms::new(&d_k, &d_r, s2);
            let sum = radii_likelihood((d_r.mag_x(), d_r.mag_y()), (d_k.mag_x(), d_k.mag_y()), s2)
                + phase_likelihood(&t);
            let joint = joint_likelihood(&d_r, &d_k, s2);
            assert!((sum - joint).abs() < 1e-12 * joint.abs().max(1.0), "{sum} vs {joint}");
        }
    }

    #[test]
    fn terms_respect_geometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let d_k = random_d(&mut rng, 3.0);
            let d_r = random_d(&mut rng, 3.0);
            let t = LikelihoodTerms::new(&d_k, &d_r, 1.0);
            let cs = (d_k.norm_sqr() * d_r.norm_sqr()).sqrt();
            assert!(t.corr_mag <= cs * (1.0 + 1e-12));
            let third = d_k.prev_mag_y() * d_r.prev_mag_y();
            assert!(t.corr_mag_hat <= t.corr_mag + third + 1e-12);
            // alpha and beta close the triangle
            let rebuilt = Complex64::from_polar(t.corr_mag, t.alpha + t.beta);
            assert!((rebuilt - t.corr).norm() < 1e-9);
        }
    }

    #[test]
    fn joint_monotone_in_correlation() {
        // rotate the observation's third phase toward the hypothesis
        let d_k = DVector::from_polar(1.0, 1.0, 0.3, 1.0, 0.2);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=20 {
            let g = 0.2 + PI * (1.0 - i as f64 / 20.0);
            let d_r = DVector::from_polar(1.1, 0.9, 0.3, 1.2, g);
            let v = joint_likelihood(&d_r, &d_k, 0.3);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn score_limit_at_zero_noise() {
        assert_eq!(Mode::Exact.score(5.0, 2.0, 0.0), 1.0);
        assert_eq!(Mode::HighSnr.score(5.0, 2.0, 0.7), 1.0);
    }
}
