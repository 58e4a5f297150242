//! Experiment configuration in a flat `key = value` text format.
//!
//! ```text
//! # comments start with '#'
//! constellation.n_r = 2
//! constellation.n_p = 4
//! constellation.delta_sq = 1, bl
//! sweep.snr_db = 10, 12, 14
//! detectors = sym, suc
//! detector.mode = both
//! ```
//!
//! Lists are comma separated. `bl` in `constellation.delta_sq` stands for the
//! balanced spacing of the constellation.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::channel::ChannelMatrix;
use crate::constellation::{balanced_delta_sq, RingPhaseConstellation};
use crate::detection::Mode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DetectorKind {
    Symbol,
    Sequence,
    Successive,
}

impl DetectorKind {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorKind::Symbol => "sym",
            DetectorKind::Sequence => "seq",
            DetectorKind::Successive => "suc",
        }
    }
}

impl FromStr for DetectorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym" => Ok(DetectorKind::Symbol),
            "seq" => Ok(DetectorKind::Sequence),
            "suc" => Ok(DetectorKind::Successive),
            _ => Err(Error::Config(format!("unknown detector `{s}`"))),
        }
    }
}

/// A detector together with its objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variant {
    pub detector: DetectorKind,
    pub mode: Mode,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.detector.name(), self.mode.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaSpec {
    Value(f64),
    Balanced,
}

impl DeltaSpec {
    pub fn resolve(&self, n_r: usize, n_p: usize) -> Result<f64> {
        match self {
            DeltaSpec::Value(v) => Ok(*v),
            DeltaSpec::Balanced => balanced_delta_sq(n_r, n_p),
        }
    }
}

impl fmt::Display for DeltaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaSpec::Value(v) => write!(f, "{v}"),
            DeltaSpec::Balanced => write!(f, "bl"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelMode {
    /// Uniformly distributed unitary matrix per block.
    Random,
    /// Random `a = e^{i zeta}`, `b = 0` per block.
    BZero,
    Fixed(ChannelMatrix),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeedbackMode {
    Decision,
    Genie,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n_r: usize,
    pub n_p: usize,
    pub r1: f64,
    pub delta_sq: Vec<DeltaSpec>,
    pub snr_db: Vec<f64>,
    pub block_len: usize,
    pub max_blocks: usize,
    /// Blocks simulated between two checks of the stopping rule.
    pub batch_blocks: usize,
    pub target_errors: u64,
    pub detectors: Vec<DetectorKind>,
    pub modes: Vec<Mode>,
    pub feedback: FeedbackMode,
    pub channel: ChannelMode,
    pub rate_samples: usize,
    pub rate_target_stderr: f64,
    pub rate_batch: usize,
    pub gap_target_ser: f64,
    pub gap_baseline: DetectorKind,
    pub gap_candidate: DetectorKind,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub threads: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            n_r: 2,
            n_p: 4,
            r1: 1.0,
            delta_sq: vec![DeltaSpec::Balanced],
            snr_db: vec![10.0],
            block_len: 64,
            max_blocks: 2000,
            batch_blocks: 32,
            target_errors: 100,
            detectors: vec![DetectorKind::Symbol],
            modes: vec![Mode::Exact],
            feedback: FeedbackMode::Decision,
            channel: ChannelMode::Random,
            rate_samples: 4000,
            rate_target_stderr: 0.02,
            rate_batch: 250,
            gap_target_ser: 1e-3,
            gap_baseline: DetectorKind::Symbol,
            gap_candidate: DetectorKind::Successive,
            seed: 1,
            output_dir: PathBuf::from("results"),
            threads: 1,
        }
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{v}`")))
}

fn parse_list<T, F>(key: &str, v: &str, f: F) -> Result<Vec<T>>
where
    F: Fn(&str) -> Result<T>,
{
    let items: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::Config(format!("`{key}`: empty list")));
    }
    items.into_iter().map(f).collect()
}

fn parse_complex(key: &str, v: &str) -> Result<Complex64> {
    v.parse::<Complex64>()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse complex `{v}`")))
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        let mut a = None;
        let mut b = None;
        let mut channel_mode = "random".to_string();
        let mut mode_text = "exact".to_string();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "constellation.n_r" => cfg.n_r = parse_num(key, value)?,
                "constellation.n_p" => cfg.n_p = parse_num(key, value)?,
                "constellation.r1" => cfg.r1 = parse_num(key, value)?,
                "constellation.delta_sq" => {
                    cfg.delta_sq = parse_list(key, value, |s| match s {
                        "bl" => Ok(DeltaSpec::Balanced),
                        _ => parse_num(key, s).map(DeltaSpec::Value),
                    })?
                }
                "sweep.snr_db" => cfg.snr_db = parse_list(key, value, |s| parse_num(key, s))?,
                "sweep.block_len" => cfg.block_len = parse_num(key, value)?,
                "sweep.max_blocks" => cfg.max_blocks = parse_num(key, value)?,
                "sweep.batch_blocks" => cfg.batch_blocks = parse_num(key, value)?,
                "sweep.target_errors" => cfg.target_errors = parse_num(key, value)?,
                "detectors" => cfg.detectors = parse_list(key, value, str::parse)?,
                "detector.mode" => mode_text = value.to_string(),
                "detector.feedback" => {
                    cfg.feedback = match value {
                        "decision" => FeedbackMode::Decision,
                        "genie" => FeedbackMode::Genie,
                        _ => return Err(Error::Config(format!("`{key}`: unknown `{value}`"))),
                    }
                }
                "channel.mode" => channel_mode = value.to_string(),
                "channel.a" => a = Some(parse_complex(key, value)?),
                "channel.b" => b = Some(parse_complex(key, value)?),
                "rate.samples" => cfg.rate_samples = parse_num(key, value)?,
                "rate.target_stderr" => cfg.rate_target_stderr = parse_num(key, value)?,
                "rate.batch" => cfg.rate_batch = parse_num(key, value)?,
                "gap.target_ser" => cfg.gap_target_ser = parse_num(key, value)?,
                "gap.baseline" => cfg.gap_baseline = value.parse()?,
                "gap.candidate" => cfg.gap_candidate = value.parse()?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "output.dir" => cfg.output_dir = PathBuf::from(value),
                "threads" => cfg.threads = parse_num(key, value)?,
                _ => return Err(Error::Config(format!("unknown key `{key}`"))),
            }
        }
        cfg.set_modes(&mode_text)?;
        cfg.channel = match channel_mode.as_str() {
            "random" => ChannelMode::Random,
            "b_zero" => ChannelMode::BZero,
            "fixed" => {
                let a = a.ok_or_else(|| Error::Config("fixed channel needs `channel.a`".into()))?;
                let b = b.unwrap_or_default();
                ChannelMode::Fixed(ChannelMatrix::new(a, b)?)
            }
            other => return Err(Error::Config(format!("unknown channel mode `{other}`"))),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// `exact`, `high_snr` (or `apx`) or `both`.
    pub fn set_modes(&mut self, text: &str) -> Result<()> {
        self.modes = match text {
            "both" => Mode::ALL.to_vec(),
            _ => vec![text.parse()?],
        };
        Ok(())
    }

    pub fn set_detectors(&mut self, text: &str) -> Result<()> {
        self.detectors = parse_list("detectors", text, str::parse)?;
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for d in &self.delta_sq {
            RingPhaseConstellation::new(self.n_r, self.n_p, self.r1, d.resolve(self.n_r, self.n_p)?)?;
        }
        let checks = [
            (self.snr_db.is_empty(), "SNR grid is empty"),
            (self.snr_db.iter().any(|s| !s.is_finite()), "SNR values must be finite"),
            (self.delta_sq.is_empty(), "delta_sq list is empty"),
            (self.block_len == 0, "block length must be at least 1"),
            (self.max_blocks == 0, "max_blocks must be at least 1"),
            (self.batch_blocks == 0, "batch_blocks must be at least 1"),
            (self.detectors.is_empty(), "no detector selected"),
            (self.modes.is_empty(), "no detector mode selected"),
            (self.rate_samples == 0, "rate.samples must be at least 1"),
            (self.rate_batch == 0, "rate.batch must be at least 1"),
            (
                !(self.gap_target_ser > 0.0 && self.gap_target_ser < 1.0),
                "gap.target_ser must lie in (0, 1)",
            ),
        ];
        match checks.iter().find(|(bad, _)| *bad) {
            Some((_, msg)) => Err(Error::Config(msg.to_string())),
            None => Ok(()),
        }
    }

    pub fn constellation(&self, delta: &DeltaSpec) -> Result<RingPhaseConstellation> {
        RingPhaseConstellation::new(self.n_r, self.n_p, self.r1, delta.resolve(self.n_r, self.n_p)?)
    }

    pub fn variants(&self) -> Vec<Variant> {
        let mut out = Vec::new();
        for &detector in &self.detectors {
            for &mode in &self.modes {
                out.push(Variant { detector, mode });
            }
        }
        out
    }

    /// Canonical text; parsing it gives back an equal configuration.
    pub fn normalized(&self) -> String {
        let mut lines = self.reproducible_lines();
        lines.push(format!("output.dir = {}", self.output_dir.display()));
        lines.push(format!("threads = {}", self.threads));
        lines.join("\n") + "\n"
    }

    fn reproducible_lines(&self) -> Vec<String> {
        let mode = if self.modes.len() == 2 {
            "both".to_string()
        } else {
            join(&self.modes.iter().map(|m| m.name()).collect::<Vec<_>>())
        };
        let mut lines = vec![
            format!("constellation.n_r = {}", self.n_r),
            format!("constellation.n_p = {}", self.n_p),
            format!("constellation.r1 = {}", self.r1),
            format!("constellation.delta_sq = {}", join(&self.delta_sq)),
            format!("sweep.snr_db = {}", join(&self.snr_db)),
            format!("sweep.block_len = {}", self.block_len),
            format!("sweep.max_blocks = {}", self.max_blocks),
            format!("sweep.batch_blocks = {}", self.batch_blocks),
            format!("sweep.target_errors = {}", self.target_errors),
            format!(
                "detectors = {}",
                join(&self.detectors.iter().map(|d| d.name()).collect::<Vec<_>>())
            ),
            format!("detector.mode = {mode}"),
            format!(
                "detector.feedback = {}",
                match self.feedback {
                    FeedbackMode::Decision => "decision",
                    FeedbackMode::Genie => "genie",
                }
            ),
        ];
        match self.channel {
            ChannelMode::Random => lines.push("channel.mode = random".into()),
            ChannelMode::BZero => lines.push("channel.mode = b_zero".into()),
            ChannelMode::Fixed(h) => {
                lines.push("channel.mode = fixed".into());
                lines.push(format!("channel.a = {}", h.a()));
                lines.push(format!("channel.b = {}", h.b()));
            }
        }
        lines.extend([
            format!("rate.samples = {}", self.rate_samples),
            format!("rate.target_stderr = {}", self.rate_target_stderr),
            format!("rate.batch = {}", self.rate_batch),
            format!("gap.target_ser = {}", self.gap_target_ser),
            format!("gap.baseline = {}", self.gap_baseline.name()),
            format!("gap.candidate = {}", self.gap_candidate.name()),
            format!("seed = {}", self.seed),
        ]);
        lines
    }

    /// Short SHA-256 digest of every setting that affects results
    /// (the output directory and thread count are excluded).
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.reproducible_lines().join("\n").as_bytes());
        digest[..6].iter().map(|b| format!("{b:02x}")).collect()
    }
}
