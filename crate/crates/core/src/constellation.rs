//! Ring/phase constellations and the differential four-dimensional symbol map.
//!
//! Each polarization carries a point of an `n_r`-ring / `n_p`-ary phase
//! alphabet whose squared radii are equally spaced. Data rides on four
//! dimensions: the two magnitudes, the inter-polarization phase `theta`, and
//! the inter-slot phase `gamma` between the current X sample and the previous
//! Y sample.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::channel::JonesPair;
use crate::error::{Error, Result};

/// Tolerance used when comparing wrapped angles.
pub const ANGLE_TOL: f64 = 1e-9;

/// Wraps an angle into `[-pi, pi)`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    // rem_euclid may round up to exactly 2pi
    if y >= PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Wrapped difference comparison with [`ANGLE_TOL`].
pub fn angles_equal(a: f64, b: f64) -> bool {
    let d = wrap_angle(a - b);
    d.abs() <= ANGLE_TOL || (d + 2.0 * PI).abs() <= ANGLE_TOL
}

/// An `n_r`-ring / `n_p`-ary phase alphabet with equally spaced squared radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RingPhaseConstellation {
    n_r: usize,
    n_p: usize,
    r1: f64,
    delta_sq: f64,
    radii: Vec<f64>,
    roots: Vec<Complex64>,
}

impl RingPhaseConstellation {
    /// Builds the constellation. `delta_sq` is ignored (and stored as 0) when
    /// there is a single ring.
    pub fn new(n_r: usize, n_p: usize, r1: f64, delta_sq: f64) -> Result<Self> {
        if n_r == 0 {
            return Err(Error::InvalidConstellation("ring count must be >= 1".into()));
        }
        if n_p == 0 {
            return Err(Error::InvalidConstellation("phase count must be >= 1".into()));
        }
        if !(r1 > 0.0 && r1.is_finite()) {
            return Err(Error::InvalidConstellation(format!("r1 must be positive, got {r1}")));
        }
        let delta_sq = if n_r == 1 {
            0.0
        } else if delta_sq > 0.0 && delta_sq.is_finite() {
            delta_sq
        } else {
            return Err(Error::InvalidConstellation(format!(
                "delta_sq must be positive, got {delta_sq}"
            )));
        };
        let radii = (0..n_r)
            .map(|m| r1 * (1.0 + m as f64 * delta_sq).sqrt())
            .collect();
        let roots = (0..n_p)
            .map(|l| Complex64::from_polar(1.0, 2.0 * PI * l as f64 / n_p as f64))
            .collect();
        Ok(Self {
            n_r,
            n_p,
            r1,
            delta_sq,
            radii,
            roots,
        })
    }

    /// Same as [`RingPhaseConstellation::new`] with `delta_sq` set to the balanced spacing.
    pub fn balanced(n_r: usize, n_p: usize, r1: f64) -> Result<Self> {
        Self::new(n_r, n_p, r1, balanced_delta_sq(n_r, n_p)?)
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_p(&self) -> usize {
        self.n_p
    }

    pub fn r1(&self) -> f64 {
        self.r1
    }

    pub fn delta_sq(&self) -> f64 {
        self.delta_sq
    }

    /// Radius set in increasing order.
    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn radius(&self, ring: usize) -> f64 {
        self.radii[ring]
    }

    /// Phase `2 pi l / n_p` in `[0, 2 pi)`.
    pub fn phase(&self, index: usize) -> f64 {
        2.0 * PI * (index % self.n_p) as f64 / self.n_p as f64
    }

    /// Phase set `{2 pi l / n_p}` in `[0, 2 pi)`.
    pub fn phases(&self) -> Vec<f64> {
        (0..self.n_p).map(|l| self.phase(l)).collect()
    }

    /// `exp(i 2 pi l / n_p)`, reduced modulo `n_p`.
    pub fn root(&self, index: usize) -> Complex64 {
        self.roots[index % self.n_p]
    }

    /// Index of the phase equal to `angle` (wrapped comparison), if any.
    pub fn phase_index(&self, angle: f64) -> Option<usize> {
        let idx = self.nearest_phase(angle);
        angles_equal(self.phase(idx), angle).then_some(idx)
    }

    /// Index of the phase closest to `angle` on the circle.
    pub fn nearest_phase(&self, angle: f64) -> usize {
        let step = 2.0 * PI / self.n_p as f64;
        let k = (angle.rem_euclid(2.0 * PI) / step).round() as usize;
        k % self.n_p
    }

    /// Index of the ring whose radius is closest to `mag`.
    pub fn nearest_ring(&self, mag: f64) -> usize {
        let mut best = 0;
        for (i, r) in self.radii.iter().enumerate() {
            if (r - mag).abs() < (self.radii[best] - mag).abs() {
                best = i;
            }
        }
        best
    }

    /// Points per polarization, `n_r * n_p`.
    pub fn points_per_polarization(&self) -> usize {
        self.n_r * self.n_p
    }

    /// Size of the joint per-slot alphabet, `(n_r n_p)^2`.
    pub fn symbol_count(&self) -> usize {
        self.points_per_polarization().pow(2)
    }

    /// Number of distinct `(|e_x|, |e_y|, theta)` triples, `n_r^2 n_p`.
    pub fn triple_count(&self) -> usize {
        self.n_r * self.n_r * self.n_p
    }

    /// Average energy per polarization of a uniformly drawn point.
    pub fn average_energy(&self) -> f64 {
        self.r1 * self.r1 * (1.0 + self.delta_sq * (self.n_r as f64 - 1.0) / 2.0)
    }

    /// Per-component noise variance for a linear SNR.
    pub fn noise_sigma_sq(&self, snr_linear: f64) -> f64 {
        snr_to_noise_sigma_sq(self, snr_linear)
    }

    /// Per-component noise variance for an SNR in dB.
    pub fn noise_sigma_sq_db(&self, snr_db: f64) -> f64 {
        self.noise_sigma_sq(db_to_linear(snr_db))
    }

    /// Known symbol `[r1, r1]` opening every block.
    pub fn pilot_symbol(&self) -> JonesPair {
        JonesPair::new(Complex64::new(self.r1, 0.0), Complex64::new(self.r1, 0.0))
    }

    /// The four-dimensional values carried by a symbol index.
    pub fn four_d(&self, s: SymbolIndex) -> FourDSymbol {
        FourDSymbol {
            mag_x: self.radius(s.ring_x),
            mag_y: self.radius(s.ring_y),
            theta: wrap_angle(self.phase(s.theta)),
            gamma: wrap_angle(self.phase(s.gamma)),
        }
    }

    /// Snaps continuous four-dimensional values to the nearest symbol index.
    pub fn quantize(&self, s: &FourDSymbol) -> SymbolIndex {
        SymbolIndex {
            ring_x: self.nearest_ring(s.mag_x),
            ring_y: self.nearest_ring(s.mag_y),
            theta: self.nearest_phase(s.theta),
            gamma: self.nearest_phase(s.gamma),
        }
    }

    /// All symbols in flat-index order.
    pub fn symbols(&self) -> impl Iterator<Item = SymbolIndex> + '_ {
        (0..self.symbol_count()).map(move |i| SymbolIndex::from_flat(i, self.n_r, self.n_p))
    }
}

/// Convenience constructor mirroring the library's operation names.
pub fn build_constellation(
    n_r: usize,
    n_p: usize,
    r1: f64,
    delta_sq: f64,
) -> Result<RingPhaseConstellation> {
    RingPhaseConstellation::new(n_r, n_p, r1, delta_sq)
}

/// Ring spacing that equalizes the innermost intra-ring distance and the
/// distance between the two outermost rings.
pub fn balanced_delta_sq(n_r: usize, n_p: usize) -> Result<f64> {
    if n_r < 2 {
        return Err(Error::InvalidConstellation(
            "balanced spacing needs at least two rings".into(),
        ));
    }
    if n_p < 2 {
        return Err(Error::InvalidConstellation(
            "balanced spacing needs at least two phases".into(),
        ));
    }
    let s = (PI / n_p as f64).sin();
    let nr = n_r as f64;
    Ok(4.0 * s * s * (2.0 * nr - 3.0)
        + 4.0 * s * (4.0 * (nr - 1.0) * (nr - 2.0) * s * s + 1.0).sqrt())
}

/// Per-component noise variance `sigma^2` giving the requested linear SNR,
/// where SNR is average energy per polarization over `2 sigma^2`.
pub fn snr_to_noise_sigma_sq(c: &RingPhaseConstellation, snr_linear: f64) -> f64 {
    c.average_energy() / (2.0 * snr_linear)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn pilot_symbol(c: &RingPhaseConstellation) -> JonesPair {
    c.pilot_symbol()
}

/// Index of one transmitted slot: ring of each polarization plus the indices
/// of `theta` and `gamma` in the phase set.
///
/// Flat ordering is ring-major: `((ring_x * n_r + ring_y) * n_p + theta) * n_p + gamma`.
/// The first three coordinates form the "triple" index `flat / n_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SymbolIndex {
    pub ring_x: usize,
    pub ring_y: usize,
    pub theta: usize,
    pub gamma: usize,
}

impl SymbolIndex {
    pub fn new(ring_x: usize, ring_y: usize, theta: usize, gamma: usize) -> Self {
        Self {
            ring_x,
            ring_y,
            theta,
            gamma,
        }
    }

    pub fn from_flat(flat: usize, n_r: usize, n_p: usize) -> Self {
        let gamma = flat % n_p;
        let triple = flat / n_p;
        let (ring_x, ring_y, theta) = triple_parts(triple, n_r, n_p);
        Self {
            ring_x,
            ring_y,
            theta,
            gamma,
        }
    }

    pub fn from_triple(triple: usize, gamma: usize, n_r: usize, n_p: usize) -> Self {
        Self::from_flat(triple * n_p + gamma, n_r, n_p)
    }

    pub fn flat(&self, n_r: usize, n_p: usize) -> usize {
        self.triple(n_r, n_p) * n_p + self.gamma
    }

    pub fn triple(&self, n_r: usize, n_p: usize) -> usize {
        (self.ring_x * n_r + self.ring_y) * n_p + self.theta
    }

    /// Per-dimension mismatch flags against another symbol.
    pub fn dimension_errors(&self, other: &SymbolIndex) -> [bool; 4] {
        [
            self.ring_x != other.ring_x,
            self.ring_y != other.ring_y,
            self.theta != other.theta,
            self.gamma != other.gamma,
        ]
    }
}

/// Splits a triple index into `(ring_x, ring_y, theta)`.
pub fn triple_parts(triple: usize, n_r: usize, n_p: usize) -> (usize, usize, usize) {
    let theta = triple % n_p;
    let rings = triple / n_p;
    (rings / n_r, rings % n_r, theta)
}

/// Continuous four-dimensional view of one slot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FourDSymbol {
    /// `|e_x|`
    pub mag_x: f64,
    /// `|e_y|`
    pub mag_y: f64,
    /// `arg(e_x e_y*)` in `[-pi, pi)`
    pub theta: f64,
    /// `arg(e_x D e_y*)` in `[-pi, pi)`
    pub gamma: f64,
}

impl FourDSymbol {
    /// Reads the four dimensions off a Jones pair and the previous slot's pair.
    pub fn from_jones(current: &JonesPair, previous: &JonesPair) -> Self {
        Self {
            mag_x: current.x.norm(),
            mag_y: current.y.norm(),
            theta: wrap_angle((current.x * current.y.conj()).arg()),
            gamma: wrap_angle((current.x * previous.y.conj()).arg()),
        }
    }
}

/// Maps four-dimensional symbols to absolute Jones pairs, tracking the
/// absolute phase of the previous Y sample from the pilot on.
#[derive(Debug, Clone)]
pub struct DifferentialEncoder<'a> {
    constellation: &'a RingPhaseConstellation,
    prev_phase_y: usize,
}

impl<'a> DifferentialEncoder<'a> {
    /// Starts a block; the pilot has phase index 0 on both polarizations.
    pub fn new(constellation: &'a RingPhaseConstellation) -> Self {
        Self {
            constellation,
            prev_phase_y: 0,
        }
    }

    pub fn pilot(&self) -> JonesPair {
        self.constellation.pilot_symbol()
    }

    /// Emits the Jones pair for `s` and advances the phase reference.
    pub fn encode(&mut self, s: SymbolIndex) -> JonesPair {
        let c = self.constellation;
        let n_p = c.n_p();
        let phase_x = (s.gamma + self.prev_phase_y) % n_p;
        let phase_y = (phase_x + n_p - s.theta) % n_p;
        self.prev_phase_y = phase_y;
        JonesPair::new(
            c.root(phase_x) * c.radius(s.ring_x),
            c.root(phase_y) * c.radius(s.ring_y),
        )
    }
}
