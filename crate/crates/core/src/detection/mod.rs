//! Likelihoods and the three maximum-likelihood decision procedures.
//!
//! Decisions are taken in the k domain (after the fiber rotation) over
//! hypotheses that remember which e-domain symbol produced them, so the
//! transmitted symbol is read off the winning hypothesis directly.
//! [`decisions_to_e_domain`] provides the algebraic k-to-e route as well.

mod bessel;
mod hypotheses;
mod likelihood;
mod recovery;
mod sequence;
mod successive;
mod symbol;

pub use bessel::{log_i0, SERIES_CROSSOVER};
pub use hypotheses::{Hypothesis, HypothesisTable};
pub use likelihood::{
    first_step_likelihood, joint_likelihood, min_distance_score, phase_likelihood,
    radii_likelihood, rician_log_density, LikelihoodTerms,
};
pub use recovery::{decisions_to_e_domain, k_quadruple};
pub use sequence::detect_sequence;
pub use successive::{detect_successive, detect_successive_block, SuccessiveDecision};
pub use symbol::{detect_symbol, detect_symbol_block, detect_symbol_fast};

use crate::constellation::{FourDSymbol, RingPhaseConstellation, SymbolIndex};

/// Exact Bessel-function objective or its high-SNR approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Exact,
    HighSnr,
}

impl Mode {
    pub const ALL: [Mode; 2] = [Mode::Exact, Mode::HighSnr];

    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::HighSnr => "high_snr",
        }
    }

    /// `norm_sq - 2 sigma^2 ln I0(corr / sigma^2)` or `norm_sq - 2 corr`.
    ///
    /// With `sigma_sq == 0` the exact objective degenerates to its limit, the
    /// high-SNR form.
    #[inline]
    pub fn score(&self, norm_sq: f64, corr_mag: f64, sigma_sq: f64) -> f64 {
        match self {
            Mode::Exact if sigma_sq > 0.0 => {
                norm_sq - 2.0 * sigma_sq * log_i0(corr_mag / sigma_sq)
            }
            _ => norm_sq - 2.0 * corr_mag,
        }
    }

    /// `2 sigma^2 ln I0(x / sigma^2)` or its limit `2 x`.
    #[inline]
    pub fn log_bessel_term(&self, x: f64, sigma_sq: f64) -> f64 {
        match self {
            Mode::Exact if sigma_sq > 0.0 => 2.0 * sigma_sq * log_i0(x / sigma_sq),
            _ => 2.0 * x,
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "high_snr" | "apx" => Ok(Mode::HighSnr),
            _ => Err(crate::Error::Config(format!("unknown mode `{s}`"))),
        }
    }
}

/// Where symbol-by-symbol and successive detectors take the previous slot from.
#[derive(Debug, Clone, Copy)]
pub enum Feedback<'a> {
    /// Their own previous decision.
    Decision,
    /// The transmitted previous symbol (diagnostic).
    Genie(&'a [SymbolIndex]),
}

/// Outcome of one slot's decision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionResult {
    pub symbol: SymbolIndex,
    /// Final objective value of the winning hypothesis.
    pub score: f64,
}

impl DetectionResult {
    pub fn four_d(&self, c: &RingPhaseConstellation) -> FourDSymbol {
        c.four_d(self.symbol)
    }

    /// Per-dimension error flags against the transmitted symbol.
    pub fn dimension_errors(&self, truth: &SymbolIndex) -> [bool; 4] {
        self.symbol.dimension_errors(truth)
    }
}
