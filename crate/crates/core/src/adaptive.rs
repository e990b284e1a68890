//! Encryption block-length selection.
//!
//! The throughput-optimal real-valued length for frame `i` under a mean
//! security requirement `s_req` is
//!
//! ```text
//! N_i* = G / (R_i P_i) * 2^(s_req * s_max),   G = (Π_j R_j P_j)^(1/n)
//! ```
//!
//! which reduces to `G / P_i * 2^(s_req * s_max)` at a fixed rate. Because the
//! geometric-mean factors cancel in the product, the unquantized lengths meet
//! the security requirement with equality. Real lengths are then floored onto
//! the allowed Rijndael set.

use crate::channel::ChannelTrace;
use crate::error::{Error, Result};
use crate::metrics::security_level;

/// Callers clamp channel BERs to at least this before optimizing.
pub const BER_FLOOR: f64 = 1e-12;

/// Default required normalized security.
pub const DEFAULT_S_REQ: f64 = 0.97;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecurityConstraint {
    s_req: f64,
    n_max: usize,
}

impl SecurityConstraint {
    pub fn new(s_req: f64, n_max: usize) -> Result<Self> {
        if !(s_req > 0.0 && s_req <= 1.0) {
            return Err(Error::config(
                "sreq",
                format!("must lie in (0, 1], got {s_req}"),
            ));
        }
        if n_max < 2 {
            return Err(Error::config(
                "n_max",
                format!("must be at least 2, got {n_max}"),
            ));
        }
        Ok(SecurityConstraint { s_req, n_max })
    }

    pub fn s_req(&self) -> f64 {
        self.s_req
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn s_max(&self) -> f64 {
        (self.n_max as f64).log2()
    }

    /// 2^(s_req * s_max): the common length every frame gets on a flat channel.
    pub fn target_length(&self) -> f64 {
        (self.s_req * self.s_max()).exp2()
    }
}

/// Per-frame transmission rates.
#[derive(Clone, Debug, PartialEq)]
pub enum Rates {
    /// Every frame at the same rate.
    Uniform,
    PerFrame(Vec<f64>),
}

impl Rates {
    /// Rate of each of `n` frames; uniform rates are 1.
    pub fn resolve(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Rates::Uniform => Ok(vec![1.0; n]),
            Rates::PerFrame(r) => {
                if r.len() != n {
                    return Err(Error::LengthMismatch {
                        what: "rates vs frames",
                        left: r.len(),
                        right: n,
                    });
                }
                if let Some(bad) = r.iter().find(|&&x| !(x > 0.0 && x.is_finite())) {
                    return Err(Error::config(
                        "rate",
                        format!("rates must be positive, got {bad}"),
                    ));
                }
                Ok(r.clone())
            }
        }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Rates {
        match self {
            Rates::Uniform => Rates::Uniform,
            Rates::PerFrame(r) => Rates::PerFrame(r[range].to_vec()),
        }
    }
}

/// Ascending, non-empty set of permitted block lengths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllowedLengths(Vec<usize>);

impl AllowedLengths {
    pub fn new(lengths: Vec<usize>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::Empty("allowed block lengths"));
        }
        if lengths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("blocklens", "must be strictly ascending"));
        }
        if lengths[0] == 0 {
            return Err(Error::config("blocklens", "lengths must be positive"));
        }
        Ok(AllowedLengths(lengths))
    }

    pub fn rijndael() -> Self {
        AllowedLengths(crate::modes::BLOCK_LENGTHS.to_vec())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn min(&self) -> usize {
        self.0[0]
    }

    pub fn max(&self) -> usize {
        self.0[self.0.len() - 1]
    }

    pub fn contains(&self, n: usize) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    /// Largest member not above `raw`, clamped into [min, max].
    pub fn quantize_one(&self, raw: f64) -> usize {
        let idx = self.0.partition_point(|&n| n as f64 <= raw);
        if idx == 0 {
            self.min()
        } else {
            self.0[idx - 1]
        }
    }
}

/// Mean per-frame security, log2 of each length normalized by log2(n_max).
pub fn required_security<I>(lengths: I, n_max: usize) -> Result<f64>
where
    I: IntoIterator<Item = f64>,
{
    let s_max = (n_max as f64).log2();
    let mut n = 0usize;
    let mut sum = 0.0;
    for len in lengths {
        if len.is_nan() || len <= 0.0 {
            return Err(Error::config(
                "block length",
                format!("must be positive, got {len}"),
            ));
        }
        sum += len.log2();
        n += 1;
    }
    if n == 0 {
        return Err(Error::Empty("block length sequence"));
    }
    Ok(sum / (n as f64 * s_max))
}

/// Real-valued optimal lengths for each frame.
pub fn optimal_block_length(
    bers: &[f64],
    rates: &Rates,
    constraint: &SecurityConstraint,
) -> Result<Vec<f64>> {
    if bers.is_empty() {
        return Err(Error::Empty("channel trace"));
    }
    if let Some(index) = bers.iter().position(|&p| p.is_nan() || p <= 0.0) {
        return Err(Error::DegenerateChannel { index });
    }
    let rates = rates.resolve(bers.len())?;
    // log domain, summed in frame order so the result is reproducible
    let logs: Vec<f64> = bers.iter().zip(&rates).map(|(p, r)| (r * p).ln()).collect();
    let mean_log = logs.iter().sum::<f64>() / logs.len() as f64;
    let target_log = constraint.s_req * constraint.s_max() * std::f64::consts::LN_2;
    Ok(logs
        .iter()
        .map(|l| (mean_log - l + target_log).exp())
        .collect())
}

/// Floors each raw length onto `allowed`, clamping at both ends.
pub fn quantize(raw: &[f64], allowed: &AllowedLengths) -> Vec<usize> {
    raw.iter().map(|&r| allowed.quantize_one(r)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameAllocation {
    /// Optimal real-valued length for this frame's channel.
    pub raw_length: f64,
    /// Length actually used to encrypt.
    pub block_len: usize,
    /// Normalized security of `block_len`.
    pub security: f64,
}

impl FrameAllocation {
    /// The raw optimal length rounded to whole bits.
    pub fn cipher_strength(&self) -> u64 {
        self.raw_length.round() as u64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Allocation {
    frames: Vec<FrameAllocation>,
    n_max: usize,
}

impl Allocation {
    fn build(raw: Vec<f64>, lengths: Vec<usize>, n_max: usize) -> Self {
        let frames = raw
            .into_iter()
            .zip(lengths)
            .map(|(raw_length, block_len)| FrameAllocation {
                raw_length,
                block_len,
                security: security_level(block_len as f64, n_max),
            })
            .collect();
        Allocation { frames, n_max }
    }

    /// Allocation from explicit raw and used lengths.
    pub fn from_parts(raw: Vec<f64>, lengths: Vec<usize>, n_max: usize) -> Result<Self> {
        if raw.len() != lengths.len() {
            return Err(Error::LengthMismatch {
                what: "raw vs quantized lengths",
                left: raw.len(),
                right: lengths.len(),
            });
        }
        Ok(Self::build(raw, lengths, n_max))
    }

    pub fn frames(&self) -> &[FrameAllocation] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn block_lengths(&self) -> Vec<usize> {
        self.frames.iter().map(|f| f.block_len).collect()
    }

    /// Mean normalized security of the lengths actually used.
    pub fn achieved_security(&self) -> f64 {
        required_security(self.frames.iter().map(|f| f.block_len as f64), self.n_max).unwrap_or(0.0)
    }

    /// Mean normalized security the unquantized optimum would reach.
    pub fn raw_security(&self) -> f64 {
        required_security(self.frames.iter().map(|f| f.raw_length), self.n_max).unwrap_or(0.0)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> Allocation {
        Allocation {
            frames: self.frames[range].to_vec(),
            n_max: self.n_max,
        }
    }
}

/// Link-adaptive allocation over a whole trace.
pub fn select_adaptive(
    trace: &ChannelTrace,
    constraint: &SecurityConstraint,
    allowed: &AllowedLengths,
    rates: &Rates,
) -> Result<Allocation> {
    let raw = optimal_block_length(&trace.bers(), rates, constraint)?;
    let lengths = quantize(&raw, allowed);
    Ok(Allocation::build(raw, lengths, constraint.n_max()))
}

/// Every frame at `fixed_len`; the per-frame cipher strength is still the
/// channel-driven optimum (fixed rate).
pub fn select_fixed(
    trace: &ChannelTrace,
    fixed_len: usize,
    constraint: &SecurityConstraint,
) -> Result<Allocation> {
    if fixed_len == 0 {
        return Err(Error::config("fixed-len", "must be positive"));
    }
    let raw = optimal_block_length(&trace.bers(), &Rates::Uniform, constraint)?;
    let lengths = vec![fixed_len; raw.len()];
    Ok(Allocation::build(raw, lengths, constraint.n_max()))
}
