//! Experiment configuration.
//!
//! Every field can be set from a `key = value` text file (`#` comments
//! allowed) using the same names as the long CLI flags; flags applied later
//! override file values.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::adaptive::{AllowedLengths, Rates, DEFAULT_S_REQ};
use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::modes::{Mode, BLOCK_LENGTHS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    Fixed,
    Adaptive,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Fixed => "fixed",
            Scheme::Adaptive => "adaptive",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fixed" => Ok(Scheme::Fixed),
            "adaptive" => Ok(Scheme::Adaptive),
            other => Err(Error::config(
                "scheme",
                format!("expected fixed or adaptive, got {other:?}"),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeSelection {
    Fixed,
    Adaptive,
    Both,
}

impl SchemeSelection {
    pub fn schemes(self) -> &'static [Scheme] {
        match self {
            SchemeSelection::Fixed => &[Scheme::Fixed],
            SchemeSelection::Adaptive => &[Scheme::Adaptive],
            SchemeSelection::Both => &[Scheme::Fixed, Scheme::Adaptive],
        }
    }
}

impl FromStr for SchemeSelection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "fixed" => Ok(SchemeSelection::Fixed),
            "adaptive" => Ok(SchemeSelection::Adaptive),
            "both" => Ok(SchemeSelection::Both),
            other => Err(Error::config(
                "scheme",
                format!("expected fixed, adaptive or both, got {other:?}"),
            )),
        }
    }
}

/// How SNR varies around each sweep point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fading {
    /// Every frame of a point sees exactly the point's SNR.
    None,
    /// Per-frame Rayleigh block fading with the point's SNR as mean.
    Rayleigh,
}

impl FromStr for Fading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" | "constant" => Ok(Fading::None),
            "rayleigh" => Ok(Fading::Rayleigh),
            other => Err(Error::config(
                "fading",
                format!("expected none or rayleigh, got {other:?}"),
            )),
        }
    }
}

/// Transmission rate per frame.
#[derive(Clone, Debug, PartialEq)]
pub enum RatePolicy {
    /// One rate for the whole message.
    Fixed,
    /// One rate per SNR point, in sweep order.
    PerPoint(Vec<f64>),
}

impl FromStr for RatePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "fixed" {
            return Ok(RatePolicy::Fixed);
        }
        let rates = s
            .split(',')
            .map(|r| r.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| {
                Error::config(
                    "rates",
                    format!("expected fixed or a comma list of rates, got {s:?}"),
                )
            })?;
        Ok(RatePolicy::PerPoint(rates))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub scheme: SchemeSelection,
    pub snr_min_db: f64,
    pub snr_max_db: f64,
    pub snr_step_db: f64,
    pub frames_per_point: usize,
    pub frame_bits: usize,
    pub s_req: f64,
    pub block_lengths: Vec<usize>,
    pub fixed_len: usize,
    pub channel: ChannelModel,
    pub fading: Fading,
    pub rates: RatePolicy,
    pub seed: u64,
    /// Forces every channel BER to zero during transmission.
    pub noiseless: bool,
    /// Worker threads; `None` uses all cores.
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            mode: Mode::Ecb,
            scheme: SchemeSelection::Both,
            snr_min_db: 8.0,
            snr_max_db: 16.0,
            snr_step_db: 2.0,
            frames_per_point: 200,
            frame_bits: 4096,
            s_req: DEFAULT_S_REQ,
            block_lengths: BLOCK_LENGTHS.to_vec(),
            fixed_len: 128,
            channel: ChannelModel::AwgnBpsk,
            fading: Fading::None,
            rates: RatePolicy::Fixed,
            seed: 1,
            noiseless: false,
            threads: None,
            out: None,
        }
    }
}

fn parse<T: FromStr>(field: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::config(field, format!("cannot parse {value:?}")))
}

fn parse_bool(field: &str, value: &str) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        other => Err(Error::config(
            field,
            format!("expected a boolean, got {other:?}"),
        )),
    }
}

impl ExperimentConfig {
    /// Sets one field by its flag name.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim();
        match key {
            "mode" => self.mode = value.parse()?,
            "scheme" => self.scheme = value.parse()?,
            "snr-min" => self.snr_min_db = parse(key, value)?,
            "snr-max" => self.snr_max_db = parse(key, value)?,
            "snr-step" => self.snr_step_db = parse(key, value)?,
            "frames" => self.frames_per_point = parse(key, value)?,
            "frame-bits" => self.frame_bits = parse(key, value)?,
            "sreq" => self.s_req = parse(key, value)?,
            "blocklens" => {
                self.block_lengths = value
                    .split(',')
                    .map(|v| parse(key, v))
                    .collect::<Result<Vec<usize>>>()?
            }
            "fixed-len" => self.fixed_len = parse(key, value)?,
            "channel" => self.channel = value.parse()?,
            "fading" => self.fading = value.parse()?,
            "rates" => self.rates = value.parse()?,
            "seed" => self.seed = parse(key, value)?,
            "noiseless" => self.noiseless = parse_bool(key, value)?,
            "threads" => self.threads = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value.trim())),
            other => return Err(Error::config(other, "unknown configuration key")),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("config line {}", i + 1), "expected key = value")
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
    }

    pub fn allowed(&self) -> Result<AllowedLengths> {
        let mut lengths = self.block_lengths.clone();
        lengths.sort_unstable();
        lengths.dedup();
        AllowedLengths::new(lengths)
    }

    /// Checks every field; the first problem is reported by name.
    pub fn validate(&self) -> Result<()> {
        let allowed = self.allowed()?;
        if let Some(&bad) = allowed
            .as_slice()
            .iter()
            .find(|n| !BLOCK_LENGTHS.contains(n))
        {
            return Err(Error::config(
                "blocklens",
                format!("{bad} is not a Rijndael block length"),
            ));
        }
        if !allowed.contains(self.fixed_len) {
            return Err(Error::config(
                "fixed-len",
                format!(
                    "{} is not in the allowed set {:?}",
                    self.fixed_len,
                    allowed.as_slice()
                ),
            ));
        }
        if self.frame_bits < allowed.max() {
            return Err(Error::config(
                "frame-bits",
                format!(
                    "{} is below the largest block length {}",
                    self.frame_bits,
                    allowed.max()
                ),
            ));
        }
        if self.frame_bits > u32::MAX as usize {
            return Err(Error::config(
                "frame-bits",
                "exceeds the 32-bit frame length field",
            ));
        }
        if !(self.snr_step_db > 0.0 && self.snr_step_db.is_finite()) {
            return Err(Error::config(
                "snr-step",
                format!("must be positive, got {}", self.snr_step_db),
            ));
        }
        if !self.snr_min_db.is_finite() || !self.snr_max_db.is_finite() {
            return Err(Error::config("snr-min", "SNR bounds must be finite"));
        }
        if self.snr_max_db < self.snr_min_db {
            return Err(Error::config(
                "snr-max",
                format!("{} is below snr-min {}", self.snr_max_db, self.snr_min_db),
            ));
        }
        if self.frames_per_point == 0 {
            return Err(Error::config("frames", "must be at least 1"));
        }
        if !(self.s_req > 0.0 && self.s_req <= 1.0) {
            return Err(Error::config(
                "sreq",
                format!("must lie in (0, 1], got {}", self.s_req),
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads", "must be at least 1"));
        }
        let points = self.snr_points().len();
        if points
            .checked_mul(self.frames_per_point)
            .is_none_or(|n| n > u32::MAX as usize)
        {
            return Err(Error::config(
                "frames",
                "too many frames for 32-bit frame indices",
            ));
        }
        if let RatePolicy::PerPoint(r) = &self.rates {
            if r.len() != points {
                return Err(Error::config(
                    "rates",
                    format!("{} rates given for {points} SNR points", r.len()),
                ));
            }
            if let Some(bad) = r.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
                return Err(Error::config(
                    "rates",
                    format!("rates must be positive, got {bad}"),
                ));
            }
        }
        Ok(())
    }

    /// Sweep points from `snr_min_db` to `snr_max_db` inclusive.
    pub fn snr_points(&self) -> Vec<f64> {
        if self.snr_step_db.is_nan() || self.snr_step_db <= 0.0 || self.snr_max_db < self.snr_min_db
        {
            return Vec::new();
        }
        let count =
            ((self.snr_max_db - self.snr_min_db) / self.snr_step_db + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.snr_min_db + k as f64 * self.snr_step_db)
            .collect()
    }

    /// Per-frame rates for the whole trace.
    pub fn frame_rates(&self) -> Rates {
        match &self.rates {
            RatePolicy::Fixed => Rates::Uniform,
            RatePolicy::PerPoint(r) => Rates::PerFrame(
                r.iter()
                    .flat_map(|&x| std::iter::repeat_n(x, self.frames_per_point))
                    .collect(),
            ),
        }
    }
}
