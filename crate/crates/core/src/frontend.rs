//! The six direct-detection outputs and the detection-space vectors built from them.

use num_complex::Complex64;

use crate::channel::JonesPair;
use crate::error::{Error, Result};

/// The six real front-end outputs of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrontEndObservation {
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub w4: f64,
    pub w5: f64,
    pub w6: f64,
}

impl FrontEndObservation {
    pub fn as_array(&self) -> [f64; 6] {
        [self.w1, self.w2, self.w3, self.w4, self.w5, self.w6]
    }
}

/// Intensities and interferometric outputs of the receiver.
///
/// `w1 = |r_x|^2`, `w2 = |r_y|^2`, `w3 + i w4 = 2 r_x r_y*`, `w5 + i w6 = 2 r_x (D r_y)*`.
pub fn front_end(r: &JonesPair, prev_r_y: Complex64) -> FrontEndObservation {
    let z = 2.0 * r.x * r.y.conj();
    let d = 2.0 * r.x * prev_r_y.conj();
    FrontEndObservation {
        w1: r.x.norm_sqr(),
        w2: r.y.norm_sqr(),
        w3: z.re,
        w4: z.im,
        w5: d.re,
        w6: d.im,
    }
}

/// `[|v_x|, |v_y| e^{i theta}, |D v_y| e^{i gamma}]` in any of the e, k or r domains.
///
/// Dropping the third entry gives the truncated ("hatted") vector; see
/// [`DVector::inner_hat`] and [`DVector::norm_sqr_hat`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DVector {
    pub c1: f64,
    pub c2: Complex64,
    pub c3: Complex64,
}

impl DVector {
    pub fn new(c1: f64, c2: Complex64, c3: Complex64) -> Self {
        Self { c1, c2, c3 }
    }

    pub fn from_polar(mag_x: f64, mag_y: f64, theta: f64, prev_mag_y: f64, gamma: f64) -> Self {
        Self {
            c1: mag_x,
            c2: Complex64::from_polar(mag_y, theta),
            c3: Complex64::from_polar(prev_mag_y, gamma),
        }
    }

    /// Builds the vector straight from the current and previous Jones pairs.
    pub fn from_jones(current: &JonesPair, previous: &JonesPair) -> Self {
        let mx = current.x.norm();
        if mx == 0.0 {
            return Self::new(0.0, Complex64::from(current.y.norm()), Complex64::from(previous.y.norm()));
        }
        let ux = current.x / mx;
        Self {
            c1: mx,
            c2: ux * current.y.conj(),
            c3: ux * previous.y.conj(),
        }
    }

    /// `<u, v> = sum u(i) v(i)*`.
    pub fn inner(&self, other: &DVector) -> Complex64 {
        self.inner_hat(other) + self.c3 * other.c3.conj()
    }

    /// Inner product of the truncated two-entry vectors.
    pub fn inner_hat(&self, other: &DVector) -> Complex64 {
        Complex64::from(self.c1 * other.c1) + self.c2 * other.c2.conj()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.norm_sqr_hat() + self.c3.norm_sqr()
    }

    pub fn norm_sqr_hat(&self) -> f64 {
        self.c1 * self.c1 + self.c2.norm_sqr()
    }

    pub fn mag_x(&self) -> f64 {
        self.c1
    }

    pub fn mag_y(&self) -> f64 {
        self.c2.norm()
    }

    pub fn prev_mag_y(&self) -> f64 {
        self.c3.norm()
    }

    pub fn theta(&self) -> f64 {
        self.c2.arg()
    }

    pub fn gamma(&self) -> f64 {
        self.c3.arg()
    }
}

/// Builds `d_r` from the front-end outputs and the previous slot's `|r_y|`.
pub fn observation_to_dr(w: &FrontEndObservation, prev_mag_r_y: f64) -> Result<DVector> {
    if w.w1 < 0.0 || w.w2 < 0.0 {
        return Err(Error::InconsistentQuadruple("negative photocurrent".into()));
    }
    if w.w1 * w.w2 == 0.0 {
        return Err(Error::DegeneratePhase("theta'' undefined for a zero-intensity slot"));
    }
    let dz = Complex64::new(w.w5, w.w6);
    if prev_mag_r_y <= 0.0 || dz == Complex64::new(0.0, 0.0) {
        return Err(Error::DegeneratePhase("gamma'' undefined for a zero-intensity slot"));
    }
    let theta = w.w4.atan2(w.w3);
    let gamma = w.w6.atan2(w.w5);
    Ok(DVector::from_polar(
        w.w1.sqrt(),
        w.w2.sqrt(),
        theta,
        prev_mag_r_y,
        gamma,
    ))
}
