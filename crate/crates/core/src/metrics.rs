//! Security and throughput measures.
//!
//! Analytic throughput comes in two forms: the exact per-block survival
//! probability `(1 - P)^N` and the linearized message throughput
//! `Σ R_i (1 - N_i P_i) / (n R_max)` the optimizer maximizes. Empirical
//! throughput is measured from actual decryptions: a block counts only if it
//! comes back bit-exact.

use crate::adaptive::{Allocation, Rates};
use crate::bits::Bits;
use crate::channel::ChannelTrace;
use crate::error::{Error, Result};

/// Probability that an `n_bits` block crosses the channel untouched.
pub fn analytic_block_throughput(ber: f64, n_bits: usize) -> f64 {
    (1.0 - ber).powf(n_bits as f64)
}

/// log2(n_bits) / log2(n_max).
pub fn security_level(n_bits: f64, n_max: usize) -> f64 {
    n_bits.log2() / (n_max as f64).log2()
}

/// Linearized message throughput; frames with `N_i P_i >= 1` contribute 0.
pub fn message_throughput(
    allocation: &Allocation,
    trace: &ChannelTrace,
    rates: &Rates,
) -> Result<f64> {
    if allocation.len() != trace.len() {
        return Err(Error::LengthMismatch {
            what: "allocation vs trace",
            left: allocation.len(),
            right: trace.len(),
        });
    }
    let rates = rates.resolve(trace.len())?;
    let r_max = rates.iter().copied().fold(f64::MIN, f64::max);
    let total: f64 = allocation
        .frames()
        .iter()
        .zip(trace.states())
        .zip(&rates)
        .map(|((f, s), r)| r * (1.0 - f.block_len as f64 * s.ber).max(0.0))
        .sum();
    Ok(total / (trace.len() as f64 * r_max))
}

/// (good, total) blocks of one frame. `decrypted` must carry the padding,
/// i.e. be exactly `ceil(original / block_bits)` blocks long.
pub fn block_goodput(
    original: &Bits,
    decrypted: &Bits,
    block_bits: usize,
) -> Result<(usize, usize)> {
    let padded = original.padded_to(block_bits);
    if padded.len() != decrypted.len() {
        return Err(Error::LengthMismatch {
            what: "decrypted frame vs padded original (bits)",
            left: decrypted.len(),
            right: padded.len(),
        });
    }
    let bb = block_bits / 8;
    let total = padded.len() / block_bits;
    let good = padded
        .as_bytes()
        .chunks_exact(bb)
        .zip(decrypted.as_bytes().chunks_exact(bb))
        .filter(|(a, b)| a == b)
        .count();
    Ok((good, total))
}

/// Rate-weighted mean per-frame goodput, normalized by the peak rate.
pub fn empirical_throughput(
    originals: &[Bits],
    decrypted: &[Bits],
    allocation: &Allocation,
    rates: &Rates,
) -> Result<f64> {
    let n = allocation.len();
    for (what, len) in [
        ("originals vs allocation", originals.len()),
        ("decrypted vs allocation", decrypted.len()),
    ] {
        if len != n {
            return Err(Error::LengthMismatch {
                what,
                left: len,
                right: n,
            });
        }
    }
    if n == 0 {
        return Err(Error::Empty("allocation"));
    }
    let rates = rates.resolve(n)?;
    let r_max = rates.iter().copied().fold(f64::MIN, f64::max);
    let mut total = 0.0;
    for (((orig, dec), frame), r) in originals
        .iter()
        .zip(decrypted)
        .zip(allocation.frames())
        .zip(&rates)
    {
        let (good, blocks) = block_goodput(orig, dec, frame.block_len)?;
        let goodput = if blocks == 0 {
            1.0
        } else {
            good as f64 / blocks as f64
        };
        total += r * goodput;
    }
    Ok(total / (n as f64 * r_max))
}

/// Distribution of the largest block length an adversary can break.
#[derive(Clone, Debug, PartialEq)]
pub struct AdversaryModel {
    pmf: Vec<(f64, f64)>,
}

impl AdversaryModel {
    pub fn new(mut pmf: Vec<(f64, f64)>) -> Result<Self> {
        if pmf.is_empty() {
            return Err(Error::Empty("adversary pmf"));
        }
        if pmf.iter().any(|&(_, p)| p.is_nan() || p < 0.0) {
            return Err(Error::config(
                "adversary",
                "probabilities must be non-negative",
            ));
        }
        let sum: f64 = pmf.iter().map(|&(_, p)| p).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "adversary",
                format!("probabilities sum to {sum}, not 1"),
            ));
        }
        pmf.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(AdversaryModel { pmf })
    }

    /// P(A = a_k) ∝ 2^-k over `strengths` in ascending order (k = 1, 2, ...).
    /// A placeholder: weaker adversaries are more likely.
    pub fn geometric_tail(strengths: &[usize]) -> Result<Self> {
        let weights: Vec<f64> = (1..=strengths.len())
            .map(|k| 0.5f64.powi(k as i32))
            .collect();
        let total: f64 = weights.iter().sum();
        let mut sorted = strengths.to_vec();
        sorted.sort_unstable();
        Self::new(
            sorted
                .iter()
                .zip(weights)
                .map(|(&a, w)| (a as f64, w / total))
                .collect(),
        )
    }

    pub fn pmf(&self) -> &[(f64, f64)] {
        &self.pmf
    }
}

/// Expected fraction of the message exposed, with frame `i` carrying
/// `frame_bits[i]` bits.
pub fn vulnerability_weighted(
    allocation: &Allocation,
    frame_bits: &[usize],
    adversary: &AdversaryModel,
) -> Result<f64> {
    if frame_bits.len() != allocation.len() {
        return Err(Error::LengthMismatch {
            what: "frame sizes vs allocation",
            left: frame_bits.len(),
            right: allocation.len(),
        });
    }
    let total: usize = frame_bits.iter().sum();
    if total == 0 {
        return Ok(0.0);
    }
    let phi = adversary
        .pmf
        .iter()
        .map(|&(strength, p)| {
            let exposed: usize = allocation
                .frames()
                .iter()
                .zip(frame_bits)
                .filter(|(f, _)| f.block_len as f64 <= strength)
                .map(|(_, &b)| b)
                .sum();
            p * exposed as f64 / total as f64
        })
        .sum::<f64>();
    Ok(phi.clamp(0.0, 1.0))
}

/// [`vulnerability_weighted`] with equally sized frames.
pub fn vulnerability(allocation: &Allocation, adversary: &AdversaryModel) -> f64 {
    vulnerability_weighted(allocation, &vec![1; allocation.len()], adversary).unwrap_or(0.0)
}
