//! Fiber rotation, amplifier noise, and the intensity-domain map it induces.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance on `|a|^2 + |b|^2 = 1` for user-supplied channel matrices.
const UNITARY_TOL: f64 = 1e-9;

/// Both polarizations of one symbol slot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JonesPair {
    pub x: Complex64,
    pub y: Complex64,
}

impl JonesPair {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        Self { x, y }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.x.norm_sqr() + self.y.norm_sqr()
    }

    pub fn scale(&self, z: Complex64) -> Self {
        Self::new(self.x * z, self.y * z)
    }
}

/// The rotation `H = [[a, b], [-b*, a*]]` with `|a|^2 + |b|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelMatrix {
    a: Complex64,
    b: Complex64,
}

impl ChannelMatrix {
    pub fn new(a: Complex64, b: Complex64) -> Result<Self> {
        let n = a.norm_sqr() + b.norm_sqr();
        if !n.is_finite() || (n - 1.0).abs() > UNITARY_TOL {
            return Err(Error::NonUnitaryChannel(n));
        }
        Ok(Self { a, b })
    }

    /// Builds `H` from any nonzero pair by normalizing it.
    pub fn normalized(a: Complex64, b: Complex64) -> Result<Self> {
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::NonUnitaryChannel(n * n));
        }
        Ok(Self { a: a / n, b: b / n })
    }

    pub fn identity() -> Self {
        Self {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    /// `H^H`, which is also `H^{-1}` for this family.
    pub fn inverse(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    pub fn apply(&self, e: &JonesPair) -> JonesPair {
        JonesPair::new(
            self.a * e.x + self.b * e.y,
            -self.b.conj() * e.x + self.a.conj() * e.y,
        )
    }

    pub fn determinant(&self) -> Complex64 {
        self.a * self.a.conj() + self.b * self.b.conj()
    }
}

/// Draws `H` from the rotation-invariant measure: `a = cos(phi) e^{i alpha}`,
/// `b = sin(phi) e^{i beta}`, with `alpha, beta` uniform and `cos(2 phi)` uniform on `[-1, 1]`.
pub fn sample_channel<R: Rng + ?Sized>(rng: &mut R) -> ChannelMatrix {
    let cos_2phi: f64 = rng.random_range(-1.0..=1.0);
    let phi = 0.5 * cos_2phi.acos();
    let alpha = rng.random_range(-PI..PI);
    let beta = rng.random_range(-PI..PI);
    ChannelMatrix {
        a: Complex64::from_polar(phi.cos(), alpha),
        b: Complex64::from_polar(phi.sin(), beta),
    }
}

/// Draws `H` with `b = 0` and `a = e^{i zeta}`, `zeta` uniform.
pub fn sample_b_zero_channel<R: Rng + ?Sized>(rng: &mut R) -> ChannelMatrix {
    let zeta = rng.random_range(-PI..PI);
    ChannelMatrix {
        a: Complex64::from_polar(1.0, zeta),
        b: Complex64::new(0.0, 0.0),
    }
}

pub fn apply_channel(h: &ChannelMatrix, e: &JonesPair) -> JonesPair {
    h.apply(e)
}

/// One complex Gaussian sample whose real and imaginary parts each have variance `sigma_sq`.
pub fn complex_gaussian<R: Rng + ?Sized>(sigma_sq: f64, rng: &mut R) -> Complex64 {
    let s = sigma_sq.sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// `r = k + n`. Real and imaginary parts of each polarization's noise have
/// variance `sigma_sq`, so `E|n_u|^2 = 2 sigma_sq`.
pub fn add_noise<R: Rng + ?Sized>(k: &JonesPair, sigma_sq: f64, rng: &mut R) -> JonesPair {
    if sigma_sq == 0.0 {
        return *k;
    }
    JonesPair::new(
        k.x + complex_gaussian(sigma_sq, rng),
        k.y + complex_gaussian(sigma_sq, rng),
    )
}

/// `(|e_x|, |e_y|, theta)` of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PolarizationState {
    pub mag_x: f64,
    pub mag_y: f64,
    pub theta: f64,
}

impl PolarizationState {
    pub fn new(mag_x: f64, mag_y: f64, theta: f64) -> Self {
        Self { mag_x, mag_y, theta }
    }

    pub fn from_jones(v: &JonesPair) -> Self {
        Self {
            mag_x: v.x.norm(),
            mag_y: v.y.norm(),
            theta: (v.x * v.y.conj()).arg(),
        }
    }

    /// `(|v_x|^2, |v_y|^2, 2|v_x||v_y| cos theta, 2|v_x||v_y| sin theta)`.
    pub fn quadruple(&self) -> [f64; 4] {
        let p = 2.0 * self.mag_x * self.mag_y;
        [
            self.mag_x * self.mag_x,
            self.mag_y * self.mag_y,
            p * self.theta.cos(),
            p * self.theta.sin(),
        ]
    }
}

/// Intensity quadruple computed straight from a Jones pair.
pub fn jones_quadruple(v: &JonesPair) -> [f64; 4] {
    let z = 2.0 * v.x * v.y.conj();
    [v.x.norm_sqr(), v.y.norm_sqr(), z.re, z.im]
}

/// Real 4x4 map taking the e-domain intensity quadruple to the k-domain one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StokesMap {
    forward: [[f64; 4]; 4],
    inverse: [[f64; 4]; 4],
}

impl StokesMap {
    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.forward
    }

    pub fn inverse_matrix(&self) -> &[[f64; 4]; 4] {
        &self.inverse
    }

    pub fn apply(&self, q: &[f64; 4]) -> [f64; 4] {
        mat_vec(&self.forward, q)
    }
}

fn mat_vec(m: &[[f64; 4]; 4], q: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(q).map(|(a, b)| a * b).sum();
    }
    out
}

fn stokes_matrix(a: Complex64, b: Complex64) -> [[f64; 4]; 4] {
    let ab = a * b;
    let ab_c = a * b.conj();
    let a2 = a * a;
    let b2 = b * b;
    let (aa, bb) = (a.norm_sqr(), b.norm_sqr());
    [
        [aa, bb, ab_c.re, -ab_c.im],
        [bb, aa, -ab_c.re, ab_c.im],
        [-2.0 * ab.re, 2.0 * ab.re, (a2 - b2).re, -(a2 + b2).im],
        [-2.0 * ab.im, 2.0 * ab.im, (a2 - b2).im, (a2 + b2).re],
    ]
}

pub fn stokes_map(h: &ChannelMatrix) -> StokesMap {
    let inv = h.inverse();
    StokesMap {
        forward: stokes_matrix(h.a, h.b),
        inverse: stokes_matrix(inv.a, inv.b),
    }
}

/// Recovers `(|e_x|, |e_y|, theta)` from a k-domain intensity quadruple.
pub fn invert_stokes_map(m: &StokesMap, k_quad: &[f64; 4]) -> Result<PolarizationState> {
    let q = mat_vec(&m.inverse, k_quad);
    let scale = k_quad[0].abs() + k_quad[1].abs();
    let tol = 1e-9 * scale.max(f64::MIN_POSITIVE);
    if q[0] < -tol || q[1] < -tol {
        return Err(Error::InconsistentQuadruple(format!(
            "negative recovered intensity ({:e}, {:e})",
            q[0], q[1]
        )));
    }
    let (ix, iy) = (q[0].max(0.0), q[1].max(0.0));
    if ix * iy <= tol * tol {
        return Err(Error::DegeneratePhase("zero-magnitude polarization"));
    }
    Ok(PolarizationState {
        mag_x: ix.sqrt(),
        mag_y: iy.sqrt(),
        theta: q[3].atan2(q[2]),
    })
}

/// The fourth-dimension gain `c`, with `|k_x||D k_y| e^{i gamma'} = c e^{i gamma}`.
pub fn fading_coefficient(
    h: &ChannelMatrix,
    current: &PolarizationState,
    previous: &PolarizationState,
) -> Complex64 {
    let (a, b) = (h.a, h.b);
    let ell = [
        Complex64::new(current.mag_x * previous.mag_y, 0.0),
        Complex64::from_polar(
            current.mag_y * previous.mag_x,
            -(current.theta + previous.theta),
        ),
        Complex64::from_polar(current.mag_x * previous.mag_x, -previous.theta),
        Complex64::from_polar(current.mag_y * previous.mag_y, -current.theta),
    ];
    a * a * ell[0] - b * b * ell[1] - a * b * ell[2] + a * b * ell[3]
}

/// Solves for the e-domain `gamma` given the decided k-domain `gamma'`.
pub fn recover_gamma(
    h: &ChannelMatrix,
    current: &PolarizationState,
    previous: &PolarizationState,
    gamma_prime: f64,
    k_mags: (f64, f64),
) -> Result<f64> {
    let scale = k_mags.0 * k_mags.1;
    if scale <= 0.0 {
        return Err(Error::DegeneratePhase("zero |k_x| or |D k_y|"));
    }
    let c = fading_coefficient(h, current, previous);
    let energy = (current.mag_x.powi(2) + current.mag_y.powi(2))
        * (previous.mag_x.powi(2) + previous.mag_y.powi(2));
    if c.norm() <= 1e-12 * energy.sqrt().max(f64::MIN_POSITIVE) {
        return Err(Error::DeepFade(c.norm()));
    }
    Ok(crate::constellation::wrap_angle(gamma_prime - c.arg()))
}
