//! Fixed vs. adaptive sweeps over SNR.
//!
//! All SNR points share one message: frame `f` of point `p` is global frame
//! `p * frames_per_point + f`, and block lengths are optimized over the whole
//! trace before any frame is sent. Each frame then draws its plaintext, key,
//! IV and channel errors from its own substream, so the result is a pure
//! function of the configuration and does not depend on thread scheduling.
//! Schemes and modes reuse the same draws for the same frame.

mod config;
mod output;
mod tables;

pub use config::{ExperimentConfig, Fading, RatePolicy, Scheme, SchemeSelection};
pub use output::{
    csv_string, emit_csv, emit_tradeoff_curve, emit_tradeoff_svg, format_g, parse_csv, read_csv,
    tradeoff_csv, tradeoff_curve, tradeoff_lengths, tradeoff_svg, write_csv, TradeoffPoint,
    CSV_HEADER,
};
pub use tables::{ComparisonTables, TableKind, TableRow};

use rand::Rng;
use rayon::prelude::*;

use crate::adaptive::{select_adaptive, select_fixed, Allocation, SecurityConstraint, BER_FLOOR};
use crate::bits::Bits;
use crate::channel::{ber_from_snr, rayleigh_state, transmit_frame, ChannelState, ChannelTrace};
use crate::error::Result;
use crate::metrics::{
    analytic_block_throughput, empirical_throughput, vulnerability, AdversaryModel,
};
use crate::modes::{decrypt_padded, encrypt, FramePayload, Mode};
use crate::rng::{substream, Purpose};

/// One CSV row: a (SNR point, scheme, mode) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub snr_db: f64,
    pub scheme: Scheme,
    pub mode: Mode,
    pub mean_block_len_bits: f64,
    pub cipher_strength_bits: f64,
    pub throughput_analytic: f64,
    pub throughput_empirical: f64,
    pub security_norm: f64,
    pub vulnerability: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn rows(&self) -> &[SweepRow] {
        &self.rows
    }

    /// Rows of one scheme and mode in SNR order.
    pub fn series(&self, scheme: Scheme, mode: Mode) -> Vec<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.scheme == scheme && r.mode == mode)
            .collect()
    }

    pub fn row(&self, snr_db: f64, scheme: Scheme, mode: Mode) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.scheme == scheme && r.mode == mode && (r.snr_db - snr_db).abs() < 1e-9)
    }

    /// Mean normalized security of a scheme over all its rows.
    pub fn mean_security(&self, scheme: Scheme) -> Option<f64> {
        let rows: Vec<f64> = self
            .rows
            .iter()
            .filter(|r| r.scheme == scheme)
            .map(|r| r.security_norm)
            .collect();
        if rows.is_empty() {
            None
        } else {
            Some(rows.iter().sum::<f64>() / rows.len() as f64)
        }
    }
}

/// Channel states for the whole message.
pub fn build_trace(config: &ExperimentConfig) -> Result<ChannelTrace> {
    let fpp = config.frames_per_point;
    let mut states = Vec::with_capacity(config.snr_points().len() * fpp);
    for (p, &snr_db) in config.snr_points().iter().enumerate() {
        match config.fading {
            Fading::None => {
                let ber = ber_from_snr(snr_db, &config.channel)?;
                states.extend(std::iter::repeat_n(ChannelState { snr_db, ber }, fpp));
            }
            Fading::Rayleigh => {
                for f in 0..fpp {
                    let mut rng = substream(config.seed, p as u32, f as u32, Purpose::Fading);
                    states.push(rayleigh_state(snr_db, &config.channel, &mut rng)?);
                }
            }
        }
    }
    ChannelTrace::new(states)
}

/// Allocation for one scheme over the whole trace.
pub fn allocate(
    config: &ExperimentConfig,
    scheme: Scheme,
    trace: &ChannelTrace,
) -> Result<Allocation> {
    let allowed = config.allowed()?;
    let constraint = SecurityConstraint::new(config.s_req, allowed.max())?;
    let clamped = trace.with_ber_floor(BER_FLOOR);
    match scheme {
        Scheme::Fixed => select_fixed(&clamped, config.fixed_len, &constraint),
        Scheme::Adaptive => select_adaptive(&clamped, &constraint, &allowed, &config.frame_rates()),
    }
}

/// Plaintext and padded decryption of one frame.
#[derive(Clone, Debug)]
pub struct FrameOutcome {
    pub original: Bits,
    pub decrypted: Bits,
}

fn random_bytes(len: usize, purpose: Purpose, seed: u64, point: u32, frame: u32) -> Vec<u8> {
    let mut rng = substream(seed, point, frame, purpose);
    // fixed-size draw so every block length gets a prefix of the same bytes
    let mut buf = [0u8; 32];
    rng.fill(&mut buf[..]);
    buf[..len].to_vec()
}

/// Encrypts, transmits and decrypts frame `frame` of SNR point `point`.
pub fn simulate_frame(
    config: &ExperimentConfig,
    mode: Mode,
    point: u32,
    frame: u32,
    block_len_bits: usize,
    ber: f64,
) -> Result<FrameOutcome> {
    let seed = config.seed;
    let original = Bits::random(
        config.frame_bits,
        &mut substream(seed, point, frame, Purpose::Plaintext),
    );
    let bb = block_len_bits / 8;
    let key = random_bytes(bb, Purpose::Key, seed, point, frame);
    let iv = match mode {
        Mode::Ecb => None,
        Mode::Cbc => Some(random_bytes(bb, Purpose::Iv, seed, point, frame)),
    };
    let global = point as usize * config.frames_per_point + frame as usize;
    let payload =
        encrypt(mode, &original, &key, block_len_bits, iv.as_deref())?.with_index(global as u32);
    let wire = payload.to_bytes();
    let ber = if config.noiseless { 0.0 } else { ber };
    let received = transmit_frame(
        &wire,
        payload.header_len(),
        ber,
        &mut substream(seed, point, frame, Purpose::Channel),
    );
    let decrypted = decrypt_padded(&FramePayload::from_bytes(&received)?, &key)?;
    Ok(FrameOutcome {
        original,
        decrypted,
    })
}

fn thread_pool(config: &ExperimentConfig) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| crate::Error::config("threads", e.to_string()))
}

/// Runs the configured experiment. Rows are ordered by SNR, then scheme
/// (fixed before adaptive).
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepReport> {
    config.validate()?;
    let points = config.snr_points();
    let fpp = config.frames_per_point;
    let trace = build_trace(config)?;
    let tx_trace = if config.noiseless {
        ChannelTrace::new(
            trace
                .states()
                .iter()
                .map(|s| ChannelState {
                    snr_db: s.snr_db,
                    ber: 0.0,
                })
                .collect(),
        )?
    } else {
        trace.clone()
    };
    let rates = config.frame_rates();
    let all_rates = rates.resolve(trace.len())?;
    let r_max = all_rates.iter().copied().fold(f64::MIN, f64::max);
    let allowed = config.allowed()?;
    let adversary = AdversaryModel::geometric_tail(allowed.as_slice())?;
    let pool = thread_pool(config)?;

    let mut per_scheme = Vec::new();
    for &scheme in config.scheme.schemes() {
        let alloc = allocate(config, scheme, &trace)?;
        let outcomes: Vec<FrameOutcome> = pool.install(|| {
            (0..trace.len())
                .into_par_iter()
                .map(|g| {
                    simulate_frame(
                        config,
                        config.mode,
                        (g / fpp) as u32,
                        (g % fpp) as u32,
                        alloc.frames()[g].block_len,
                        tx_trace.states()[g].ber,
                    )
                })
                .collect::<Result<Vec<_>>>()
        })?;
        per_scheme.push((scheme, alloc, outcomes));
    }

    let mut rows = Vec::new();
    for (p, &snr_db) in points.iter().enumerate() {
        let range = p * fpp..(p + 1) * fpp;
        let sub_rates = rates.slice(range.clone());
        let local = &all_rates[range.clone()];
        // rows are normalized by the peak rate of the whole message
        let scale = local.iter().copied().fold(f64::MIN, f64::max) / r_max;
        for (scheme, alloc, outcomes) in &per_scheme {
            let sub = alloc.slice(range.clone());
            let frames = sub.frames();
            let n = frames.len() as f64;
            let analytic = frames
                .iter()
                .zip(&tx_trace.states()[range.clone()])
                .zip(local)
                .map(|((f, s), r)| r * analytic_block_throughput(s.ber, f.block_len))
                .sum::<f64>()
                / (n * r_max);
            let originals: Vec<Bits> = outcomes[range.clone()]
                .iter()
                .map(|o| o.original.clone())
                .collect();
            let decrypted: Vec<Bits> = outcomes[range.clone()]
                .iter()
                .map(|o| o.decrypted.clone())
                .collect();
            let empirical = empirical_throughput(&originals, &decrypted, &sub, &sub_rates)? * scale;
            rows.push(SweepRow {
                snr_db,
                scheme: *scheme,
                mode: config.mode,
                mean_block_len_bits: frames.iter().map(|f| f.block_len as f64).sum::<f64>() / n,
                cipher_strength_bits: frames
                    .iter()
                    .map(|f| f.cipher_strength() as f64)
                    .sum::<f64>()
                    / n,
                throughput_analytic: analytic,
                throughput_empirical: empirical,
                security_norm: sub.achieved_security(),
                vulnerability: vulnerability(&sub, &adversary),
            });
        }
    }
    Ok(SweepReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            frames_per_point: 6,
            frame_bits: 1024,
            ..Default::default()
        }
    }

    #[test]
    fn row_layout() {
        let r = run_sweep(&small()).unwrap();
        assert_eq!(r.rows.len(), 10);
        assert_eq!(r.rows[0].scheme, Scheme::Fixed);
        assert_eq!(r.rows[1].scheme, Scheme::Adaptive);
        assert_eq!(r.rows[0].snr_db, 8.0);
        assert_eq!(r.rows[9].snr_db, 16.0);
        assert!(r
            .series(Scheme::Fixed, Mode::Ecb)
            .iter()
            .all(|row| row.mean_block_len_bits == 128.0));
    }

    #[test]
    fn noiseless_is_lossless() {
        for mode in [Mode::Ecb, Mode::Cbc] {
            let c = ExperimentConfig {
                noiseless: true,
                mode,
                ..small()
            };
            for row in run_sweep(&c).unwrap().rows {
                assert_eq!(row.throughput_empirical, 1.0);
                assert_eq!(row.throughput_analytic, 1.0);
            }
        }
    }

    #[test]
    fn invalid_config_rejected_up_front() {
        let c = ExperimentConfig {
            fixed_len: 100,
            ..small()
        };
        assert!(run_sweep(&c).is_err());
    }

    #[test]
    fn fading_trace_is_seeded() {
        let c = ExperimentConfig {
            fading: Fading::Rayleigh,
            ..small()
        };
        let a = build_trace(&c).unwrap();
        assert_eq!(a, build_trace(&c).unwrap());
        assert_ne!(a, build_trace(&ExperimentConfig { seed: 2, ..c }).unwrap());
        assert_eq!(a.len(), 30);
    }

    #[test]
    fn per_point_rates_scale_rows() {
        let c = ExperimentConfig {
            noiseless: true,
            rates: RatePolicy::PerPoint(vec![1.0, 2.0, 2.0, 4.0, 4.0]),
            ..small()
        };
        let r = run_sweep(&c).unwrap();
        let first = r.row(8.0, Scheme::Fixed, Mode::Ecb).unwrap();
        assert_eq!(first.throughput_empirical, 0.25);
        assert_eq!(
            r.row(16.0, Scheme::Adaptive, Mode::Ecb)
                .unwrap()
                .throughput_empirical,
            1.0
        );
    }
}
