//! Per-block cache of the k-domain hypotheses.
//!
//! A triple `t = (ring_x, ring_y, theta)` with reference phase 0 on X maps to
//! `k0(t) = H [R_x, R_y e^{-i theta}]`. A full hypothesis `(t, gamma)` following
//! a slot whose triple was `p` is that vector rotated by `e^{i(gamma - theta_p)}`
//! relative to the previous one, so
//! `d_k = [|k0_x(t)|, |k0_y(t)| e^{i theta'(t)}, e^{i(gamma - theta_p)} u_x(t) k0_y(p)*]`
//! with `u_x(t) = k0_x(t) / |k0_x(t)|`. The common absolute phase of the block
//! cancels.

use num_complex::Complex64;

use crate::channel::{ChannelMatrix, JonesPair};
use crate::constellation::{triple_parts, RingPhaseConstellation, SymbolIndex};
use crate::frontend::DVector;

/// A k-domain hypothesis together with the e-domain symbol it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hypothesis {
    pub d_k: DVector,
    pub symbol: SymbolIndex,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct TripleEntry {
    pub kx_mag: f64,
    /// `|k_y| e^{i theta'}`
    pub dk2: Complex64,
    pub ux: Complex64,
    pub ky: Complex64,
    pub norm_sqr_hat: f64,
    pub theta: usize,
}

#[derive(Debug, Clone)]
pub struct HypothesisTable {
    constellation: RingPhaseConstellation,
    h: ChannelMatrix,
    pub(crate) triples: Vec<TripleEntry>,
    roots: Vec<Complex64>,
}

impl HypothesisTable {
    pub fn new(constellation: &RingPhaseConstellation, h: &ChannelMatrix) -> Self {
        let (n_r, n_p) = (constellation.n_r(), constellation.n_p());
        let triples = (0..constellation.triple_count())
            .map(|t| {
                let (rx, ry, theta) = triple_parts(t, n_r, n_p);
                let e0 = JonesPair::new(
                    Complex64::from(constellation.radius(rx)),
                    constellation.root(n_p - theta) * constellation.radius(ry),
                );
                let k0 = h.apply(&e0);
                let kx_mag = k0.x.norm();
                let ux = if kx_mag > 0.0 {
                    k0.x / kx_mag
                } else {
                    Complex64::new(1.0, 0.0)
                };
                TripleEntry {
                    kx_mag,
                    dk2: ux * k0.y.conj(),
                    ux,
                    ky: k0.y,
                    norm_sqr_hat: k0.norm_sqr(),
                    theta,
                }
            })
            .collect();
        let roots = (0..n_p).map(|m| constellation.root(m)).collect();
        Self {
            constellation: constellation.clone(),
            h: *h,
            triples,
            roots,
        }
    }

    pub fn constellation(&self) -> &RingPhaseConstellation {
        &self.constellation
    }

    pub fn channel(&self) -> &ChannelMatrix {
        &self.h
    }

    pub fn n_p(&self) -> usize {
        self.constellation.n_p()
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    /// Triple index of the pilot, `(0, 0, 0)`.
    pub fn pilot_triple(&self) -> usize {
        0
    }

    /// `|k_y|` of a triple, i.e. `|D k_y|` for the slot that follows it.
    pub fn ky_mag(&self, triple: usize) -> f64 {
        self.triples[triple].ky.norm()
    }

    /// Truncated hypothesis `[|k_x|, |k_y| e^{i theta'}, 0]` of a triple.
    pub fn hat(&self, triple: usize) -> DVector {
        let e = &self.triples[triple];
        DVector::new(e.kx_mag, e.dk2, Complex64::new(0.0, 0.0))
    }

    /// `|d_k^|^2`.
    pub fn norm_sqr_hat(&self, triple: usize) -> f64 {
        self.triples[triple].norm_sqr_hat
    }

    /// Third entry of `d_k` for triple `t` and phase `gamma` after triple `prev`.
    #[inline]
    pub fn third(&self, prev: usize, t: usize, gamma: usize) -> Complex64 {
        let p = &self.triples[prev];
        let n_p = self.roots.len();
        let rot = self.roots[(gamma + n_p - p.theta) % n_p];
        rot * self.triples[t].ux * p.ky.conj()
    }

    /// Rotation `e^{i(gamma - theta_prev)} k0_y(prev)*`, shared by all `t`.
    #[inline]
    pub(crate) fn third_base(&self, prev: usize, gamma: usize) -> Complex64 {
        let p = &self.triples[prev];
        let n_p = self.roots.len();
        self.roots[(gamma + n_p - p.theta) % n_p] * p.ky.conj()
    }

    pub fn d_k(&self, prev: usize, s: SymbolIndex) -> DVector {
        let c = &self.constellation;
        let t = s.triple(c.n_r(), c.n_p());
        let e = &self.triples[t];
        DVector::new(e.kx_mag, e.dk2, self.third(prev, t, s.gamma))
    }

    /// All `(n_r n_p)^2` hypotheses following `prev`, in flat-index order.
    pub fn hypotheses(&self, prev: usize) -> Vec<Hypothesis> {
        self.constellation
            .symbols()
            .map(|s| Hypothesis {
                d_k: self.d_k(prev, s),
                symbol: s,
            })
            .collect()
    }

    /// The pilot's k-domain vector (its own third entry uses itself as predecessor).
    pub fn pilot_d_k(&self) -> DVector {
        self.d_k(0, SymbolIndex::default())
    }
}
