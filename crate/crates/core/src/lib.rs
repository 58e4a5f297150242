//! Maximum-likelihood detection for a four-dimensional direct-detection
//! optical receiver that measures the Stokes parameters of the received field
//! plus the phase relation between consecutive Y polarizations.
//!
//! The library is organised along the signal chain:
//! [`constellation`] builds ring/phase symbol sets and the differential
//! encoder, [`channel`] models the fiber rotation and noise, [`frontend`]
//! forms the six photodetector outputs and the d-vector, [`detection`] holds
//! the likelihoods and decision rules, and [`harness`] runs Monte Carlo
//! sweeps whose results [`io`] writes as CSV.

pub mod channel;
pub mod cli;
pub mod config;
pub mod constellation;
pub mod detection;
mod error;
pub mod frontend;
pub mod harness;
pub mod io;

pub use error::{Error, Result};
