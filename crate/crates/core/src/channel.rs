//! Per-frame channel states and the memoryless bit-error channel.
//!
//! The channel is block fading with known state: each frame sees one SNR and
//! the corresponding bit error probability, and every payload bit is flipped
//! independently with that probability.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Gaussian tail probability Q(x) = P(Z > x).
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Piecewise-linear SNR → BER table.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelTable {
    points: Vec<(f64, f64)>,
}

impl ChannelTable {
    pub fn new(mut points: Vec<(f64, f64)>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty("channel table"));
        }
        for (i, &(snr, ber)) in points.iter().enumerate() {
            if !snr.is_finite() || !(0.0..=1.0).contains(&ber) {
                return Err(Error::ChannelTable {
                    line: i + 1,
                    reason: format!("bad point ({snr}, {ber})"),
                });
            }
        }
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        if points.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::ChannelTable {
                line: 0,
                reason: "duplicate SNR entries".into(),
            });
        }
        Ok(ChannelTable { points })
    }

    /// Parses `snr_db,ber` lines; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::ChannelTable {
                line: i + 1,
                reason: reason.to_string(),
            };
            let (snr, ber) = line
                .split_once(',')
                .ok_or_else(|| bad("expected snr_db,ber"))?;
            let snr: f64 = snr.trim().parse().map_err(|_| bad("unparseable snr_db"))?;
            let ber: f64 = ber.trim().parse().map_err(|_| bad("unparseable ber"))?;
            points.push((snr, ber));
        }
        Self::new(points)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn lookup(&self, snr_db: f64) -> Result<f64> {
        let (min, max) = (self.points[0].0, self.points[self.points.len() - 1].0);
        if !(min..=max).contains(&snr_db) {
            return Err(Error::TableRange { snr_db, min, max });
        }
        let hi = self.points.partition_point(|p| p.0 < snr_db);
        if hi == 0 || self.points[hi].0 == snr_db {
            return Ok(self.points[hi].1);
        }
        let (x0, y0) = self.points[hi - 1];
        let (x1, y1) = self.points[hi];
        Ok(y0 + (y1 - y0) * (snr_db - x0) / (x1 - x0))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChannelModel {
    /// Coherent BPSK over AWGN: Q(sqrt(2γ)).
    AwgnBpsk,
    /// BPSK averaged over Rayleigh fading: ½(1 − sqrt(γ/(1+γ))).
    RayleighBpsk,
    Table(ChannelTable),
}

impl ChannelModel {
    pub fn ber(&self, snr_db: f64) -> Result<f64> {
        ber_from_snr(snr_db, self)
    }
}

impl fmt::Display for ChannelModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelModel::AwgnBpsk => f.write_str("awgn-bpsk"),
            ChannelModel::RayleighBpsk => f.write_str("rayleigh-bpsk"),
            ChannelModel::Table(t) => write!(f, "table({} points)", t.points.len()),
        }
    }
}

impl FromStr for ChannelModel {
    type Err = Error;

    /// `awgn-bpsk`, `rayleigh-bpsk` or `table:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "awgn-bpsk" | "awgn" => Ok(ChannelModel::AwgnBpsk),
            "rayleigh-bpsk" | "rayleigh" => Ok(ChannelModel::RayleighBpsk),
            _ => match s.strip_prefix("table:") {
                Some(path) => Ok(ChannelModel::Table(ChannelTable::load(Path::new(path))?)),
                None => Err(Error::config(
                    "channel",
                    format!("expected awgn-bpsk, rayleigh-bpsk or table:<path>, got {s:?}"),
                )),
            },
        }
    }
}

pub fn ber_from_snr(snr_db: f64, model: &ChannelModel) -> Result<f64> {
    let ber = match model {
        ChannelModel::AwgnBpsk => q_function((2.0 * db_to_linear(snr_db)).sqrt()),
        ChannelModel::RayleighBpsk => {
            let g = db_to_linear(snr_db);
            if g.is_infinite() {
                0.0
            } else {
                0.5 * (1.0 - (g / (1.0 + g)).sqrt())
            }
        }
        ChannelModel::Table(t) => t.lookup(snr_db)?,
    };
    Ok(ber.clamp(0.0, 0.5))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChannelState {
    pub snr_db: f64,
    pub ber: f64,
}

/// Channel states for every frame of a message, known before transmission.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelTrace {
    states: Vec<ChannelState>,
}

impl ChannelTrace {
    pub fn new(states: Vec<ChannelState>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::Empty("channel trace"));
        }
        Ok(ChannelTrace { states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[ChannelState] {
        &self.states
    }

    pub fn bers(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.ber).collect()
    }

    /// Copy with every BER raised to at least `floor`.
    pub fn with_ber_floor(&self, floor: f64) -> ChannelTrace {
        ChannelTrace {
            states: self
                .states
                .iter()
                .map(|s| ChannelState {
                    snr_db: s.snr_db,
                    ber: s.ber.max(floor),
                })
                .collect(),
        }
    }

    /// Sub-trace over `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<ChannelTrace> {
        ChannelTrace::new(self.states[range].to_vec())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SnrPolicy {
    Constant(f64),
    /// Per-frame linear SNR drawn from an exponential with the given mean (dB).
    Rayleigh {
        mean_db: f64,
    },
    Explicit(Vec<f64>),
}

/// Builds `n` frame states.
///
/// Rayleigh draws are instantaneous SNRs, so they go through the model's
/// conditional AWGN curve; with [`ChannelModel::RayleighBpsk`] that means
/// plain AWGN BPSK, since the fade is already in the draw.
pub fn generate_trace<R: Rng + ?Sized>(
    n: usize,
    policy: &SnrPolicy,
    model: &ChannelModel,
    rng: &mut R,
) -> Result<ChannelTrace> {
    if n == 0 {
        return Err(Error::Empty("frame count"));
    }
    let mut states = Vec::with_capacity(n);
    match policy {
        SnrPolicy::Constant(snr_db) => {
            let ber = ber_from_snr(*snr_db, model)?;
            states.resize(
                n,
                ChannelState {
                    snr_db: *snr_db,
                    ber,
                },
            );
        }
        SnrPolicy::Rayleigh { mean_db } => {
            for _ in 0..n {
                states.push(rayleigh_state(*mean_db, model, rng)?);
            }
        }
        SnrPolicy::Explicit(list) => {
            if list.is_empty() {
                return Err(Error::Empty("explicit SNR list"));
            }
            if list.len() != n {
                return Err(Error::LengthMismatch {
                    what: "explicit SNR list vs frame count",
                    left: list.len(),
                    right: n,
                });
            }
            for &snr_db in list {
                states.push(ChannelState {
                    snr_db,
                    ber: ber_from_snr(snr_db, model)?,
                });
            }
        }
    }
    ChannelTrace::new(states)
}

/// One block-fading draw around `mean_db`.
pub fn rayleigh_state<R: Rng + ?Sized>(
    mean_db: f64,
    model: &ChannelModel,
    rng: &mut R,
) -> Result<ChannelState> {
    let mean = db_to_linear(mean_db);
    let exp = Exp::new(1.0 / mean).map_err(|e| Error::config("snr", e.to_string()))?;
    let gamma: f64 = exp.sample(rng);
    let snr_db = linear_to_db(gamma);
    let conditional = match model {
        ChannelModel::RayleighBpsk => &ChannelModel::AwgnBpsk,
        other => other,
    };
    Ok(ChannelState {
        snr_db,
        ber: ber_from_snr(snr_db, conditional)?,
    })
}

/// Flips each bit of `bytes` independently with probability `ber`.
pub fn flip_bits<R: Rng + ?Sized>(bytes: &mut [u8], ber: f64, rng: &mut R) {
    if ber <= 0.0 {
        return;
    }
    if ber >= 1.0 {
        bytes.iter_mut().for_each(|b| *b = !*b);
        return;
    }
    for b in bytes.iter_mut() {
        let mut mask = 0u8;
        for bit in 0..8 {
            if rng.random::<f64>() < ber {
                mask |= 0x80 >> bit;
            }
        }
        *b ^= mask;
    }
}

/// Passes `bits` through the binary symmetric channel.
pub fn transmit<R: Rng + ?Sized>(bits: &Bits, ber: f64, rng: &mut R) -> Bits {
    let mut bytes = bits.as_bytes().to_vec();
    flip_bits(&mut bytes, ber, rng);
    Bits::from_bytes_truncated(bytes, bits.len())
}

/// Transmits a serialized frame: the first `header_len` bytes are carried
/// error-free, the rest goes through the channel.
pub fn transmit_frame<R: Rng + ?Sized>(
    wire: &[u8],
    header_len: usize,
    ber: f64,
    rng: &mut R,
) -> Vec<u8> {
    let mut out = wire.to_vec();
    flip_bits(&mut out[header_len..], ber, rng);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn awgn_at_zero_db() {
        let b = ber_from_snr(0.0, &ChannelModel::AwgnBpsk).unwrap();
        assert!((b - 0.078_649_603_525).abs() < 1e-9, "{b}");
    }

    #[test]
    fn noiseless_limit() {
        for m in [ChannelModel::AwgnBpsk, ChannelModel::RayleighBpsk] {
            assert_eq!(ber_from_snr(f64::INFINITY, &m).unwrap(), 0.0);
            assert!(ber_from_snr(60.0, &m).unwrap() < 1e-5);
            assert!(ber_from_snr(-60.0, &m).unwrap() <= 0.5);
        }
    }

    #[test]
    fn rayleigh_closed_form() {
        let b = ber_from_snr(10.0, &ChannelModel::RayleighBpsk).unwrap();
        assert!((b - 0.5 * (1.0 - (10.0f64 / 11.0).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn monotone_in_snr() {
        for m in [ChannelModel::AwgnBpsk, ChannelModel::RayleighBpsk] {
            let mut prev = 1.0;
            for i in -200..=400 {
                let b = ber_from_snr(i as f64 * 0.1, &m).unwrap();
                assert!(b <= prev);
                prev = b;
            }
        }
    }

    #[test]
    fn table_interpolates_and_rejects_out_of_range() {
        let t = ChannelTable::parse("# snr,ber\n10,0.01\n\n8, 0.03 # low\n12,0.001\n").unwrap();
        let m = ChannelModel::Table(t);
        assert!((ber_from_snr(9.0, &m).unwrap() - 0.02).abs() < 1e-12);
        assert_eq!(ber_from_snr(12.0, &m).unwrap(), 0.001);
        assert_eq!(ber_from_snr(8.0, &m).unwrap(), 0.03);
        assert!(matches!(
            ber_from_snr(12.5, &m),
            Err(Error::TableRange { .. })
        ));
        assert!(matches!(
            ber_from_snr(7.0, &m),
            Err(Error::TableRange { .. })
        ));
    }

    #[test]
    fn table_parse_errors() {
        assert!(ChannelTable::parse("").is_err());
        assert!(matches!(
            ChannelTable::parse("1,0.1\nfoo"),
            Err(Error::ChannelTable { line: 2, .. })
        ));
        assert!(ChannelTable::parse("1,2.0").is_err());
        assert!(ChannelTable::parse("1,0.1\n1,0.2").is_err());
    }

    #[test]
    fn transmit_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let bits = Bits::random(1001, &mut rng);
        assert_eq!(transmit(&bits, 0.0, &mut rng), bits);
        let all = transmit(&bits, 1.0, &mut rng);
        assert_eq!(all.hamming_distance(&bits), 1001);
        assert_eq!(all.len(), 1001);
    }

    #[test]
    fn transmit_half_rate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 1_000_000;
        let out = transmit(&Bits::zeros(n), 0.5, &mut rng);
        let frac = out.hamming_distance(&Bits::zeros(n)) as f64 / n as f64;
        assert!((frac - 0.5).abs() <= 0.0015, "{frac}");
    }

    #[test]
    fn frame_header_untouched() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let wire = vec![0u8; 64];
        let out = transmit_frame(&wire, 20, 1.0, &mut rng);
        assert!(out[..20].iter().all(|&b| b == 0));
        assert!(out[20..].iter().all(|&b| b == 0xff));
    }

    #[test]
    fn trace_policies() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = generate_trace(
            5,
            &SnrPolicy::Constant(16.0),
            &ChannelModel::AwgnBpsk,
            &mut rng,
        )
        .unwrap();
        assert!(t.states().iter().all(|s| *s == t.states()[0]));
        let list = vec![8.0, 10.0, 12.0, 14.0, 16.0];
        let t = generate_trace(
            5,
            &SnrPolicy::Explicit(list.clone()),
            &ChannelModel::AwgnBpsk,
            &mut rng,
        )
        .unwrap();
        assert_eq!(
            t.states().iter().map(|s| s.snr_db).collect::<Vec<_>>(),
            list
        );
        assert!(generate_trace(
            5,
            &SnrPolicy::Explicit(vec![]),
            &ChannelModel::AwgnBpsk,
            &mut rng
        )
        .is_err());
        assert!(generate_trace(
            0,
            &SnrPolicy::Constant(1.0),
            &ChannelModel::AwgnBpsk,
            &mut rng
        )
        .is_err());
        assert!(generate_trace(
            3,
            &SnrPolicy::Explicit(list),
            &ChannelModel::AwgnBpsk,
            &mut rng
        )
        .is_err());
    }

    #[test]
    fn rayleigh_trace_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let mean_db = 10.0;
        let t = generate_trace(
            n,
            &SnrPolicy::Rayleigh { mean_db },
            &ChannelModel::AwgnBpsk,
            &mut rng,
        )
        .unwrap();
        let g: f64 = t
            .states()
            .iter()
            .map(|s| db_to_linear(s.snr_db))
            .sum::<f64>()
            / n as f64;
        let mean = db_to_linear(mean_db);
        // exponential: sd = mean
        let sigma = mean / (n as f64).sqrt();
        assert!((g - mean).abs() <= 3.0 * sigma, "{g} vs {mean}");
        for s in t.states() {
            assert_eq!(
                s.ber,
                ber_from_snr(s.snr_db, &ChannelModel::AwgnBpsk).unwrap()
            );
        }
    }
}
