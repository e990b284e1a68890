use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use linkcrypt::modes::Mode;
use linkcrypt::rijndael::{CipherParams, Rijndael};
use linkcrypt::sim::{
    csv_string, emit_csv, emit_tradeoff_curve, emit_tradeoff_svg, format_g, run_sweep,
    tradeoff_csv, tradeoff_curve, tradeoff_lengths, ComparisonTables, ExperimentConfig, Scheme,
    SchemeSelection,
};
use linkcrypt::{Error, Result};

#[derive(Parser)]
#[command(
    name = "linkcrypt",
    version,
    about = "Link-adaptive Rijndael encryption simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a fixed/adaptive sweep over SNR and write CSV.
    Sweep(ExperimentArgs),
    /// Block-level throughput and security against block length.
    Tradeoff(TradeoffArgs),
    /// Encrypt or decrypt a single block given in hex.
    Kat(KatArgs),
    /// Run ECB and CBC sweeps and print the four comparison tables.
    Tables(TablesArgs),
}

/// Experiment settings. Flags override values read from `--config`.
#[derive(Args, Default)]
struct ExperimentArgs {
    /// key = value file using the long flag names as keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// ecb or cbc
    #[arg(long)]
    mode: Option<String>,
    /// fixed, adaptive or both
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    snr_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    snr_max: Option<String>,
    #[arg(long)]
    snr_step: Option<String>,
    /// Frames per SNR point
    #[arg(long)]
    frames: Option<String>,
    /// Payload bits per frame
    #[arg(long)]
    frame_bits: Option<String>,
    /// Required mean normalized security in (0, 1]
    #[arg(long)]
    sreq: Option<String>,
    /// Comma-separated allowed block lengths
    #[arg(long)]
    blocklens: Option<String>,
    #[arg(long)]
    fixed_len: Option<String>,
    /// awgn-bpsk, rayleigh-bpsk or table:<path>
    #[arg(long)]
    channel: Option<String>,
    /// none or rayleigh
    #[arg(long)]
    fading: Option<String>,
    /// fixed, or one comma-separated rate per SNR point
    #[arg(long)]
    rates: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Transmit without channel errors
    #[arg(long)]
    noiseless: bool,
    #[arg(long)]
    threads: Option<String>,
    /// Output CSV path (stdout if absent)
    #[arg(long)]
    out: Option<String>,
}

impl ExperimentArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = ExperimentConfig::default();
        if let Some(path) = &self.config {
            config.apply_file(path)?;
        }
        let flags = [
            ("mode", &self.mode),
            ("scheme", &self.scheme),
            ("snr-min", &self.snr_min),
            ("snr-max", &self.snr_max),
            ("snr-step", &self.snr_step),
            ("frames", &self.frames),
            ("frame-bits", &self.frame_bits),
            ("sreq", &self.sreq),
            ("blocklens", &self.blocklens),
            ("fixed-len", &self.fixed_len),
            ("channel", &self.channel),
            ("fading", &self.fading),
            ("rates", &self.rates),
            ("seed", &self.seed),
            ("threads", &self.threads),
            ("out", &self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if self.noiseless {
            config.noiseless = true;
        }
        config.validate()?;
        Ok(config)
    }
}

#[derive(Args)]
struct TradeoffArgs {
    #[arg(long, default_value_t = 0.0024)]
    ber: f64,
    /// CSV output (stdout if absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also draw both curves to this SVG file
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("direction").required(true).args(["encrypt", "decrypt"])))]
struct KatArgs {
    /// Key in hex; 16 to 32 bytes in steps of 4
    #[arg(long)]
    key: String,
    #[arg(long, default_value_t = 128)]
    block_bits: usize,
    /// Plaintext block in hex
    #[arg(long)]
    encrypt: Option<String>,
    /// Ciphertext block in hex
    #[arg(long)]
    decrypt: Option<String>,
}

#[derive(Args)]
struct TablesArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Write table1.csv to table4.csv here
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn decode_hex(field: &str, s: &str) -> Result<Vec<u8>> {
    hex::decode(s.trim()).map_err(|e| Error::InvalidConfig {
        field: field.into(),
        reason: e.to_string(),
    })
}

fn kat(args: &KatArgs) -> Result<String> {
    let key = decode_hex("key", &args.key)?;
    if key.len() % 4 != 0 {
        return Err(Error::InvalidConfig {
            field: "key".into(),
            reason: format!("{} bytes is not a whole number of 32-bit words", key.len()),
        });
    }
    if !args.block_bits.is_multiple_of(32) {
        return Err(Error::UnsupportedBlockLength(args.block_bits));
    }
    let cipher = Rijndael::new(
        &key,
        CipherParams::new(args.block_bits / 32, key.len() / 4)?,
    )?;
    let out = match (&args.encrypt, &args.decrypt) {
        (Some(pt), _) => cipher.encrypt_block(&decode_hex("encrypt", pt)?)?,
        (_, Some(ct)) => cipher.decrypt_block(&decode_hex("decrypt", ct)?)?,
        _ => unreachable!("clap enforces one direction"),
    };
    Ok(hex::encode(out))
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Io {
            path: PathBuf::from("<stdout>"),
            source: e,
        }),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep(args) => {
            let config = args.resolve()?;
            let report = run_sweep(&config)?;
            match &config.out {
                Some(path) => emit_csv(&report, path)?,
                None => emit(&csv_string(&report))?,
            }
        }
        Command::Tradeoff(args) => {
            let lengths = tradeoff_lengths();
            match &args.out {
                Some(path) => {
                    emit_tradeoff_curve(args.ber, &lengths, path)?;
                }
                None => {
                    let points = tradeoff_curve(args.ber, &lengths)?;
                    emit(&tradeoff_csv(&points))?;
                }
            }
            if let Some(svg) = &args.svg {
                let points = tradeoff_curve(args.ber, &lengths)?;
                emit_tradeoff_svg(&points, args.ber, svg)?;
            }
        }
        Command::Kat(args) => emit(&format!("{}\n", kat(&args)?))?,
        Command::Tables(args) => {
            let mut config = args.experiment.resolve()?;
            config.scheme = SchemeSelection::Both;
            let mut reports = Vec::new();
            for mode in [Mode::Ecb, Mode::Cbc] {
                config.mode = mode;
                reports.push(run_sweep(&config)?);
            }
            let tables = ComparisonTables::from_reports(&reports[0], &reports[1])?;
            emit(&tables.render())?;
            if let Some(dir) = &args.out_dir {
                tables.write_dir(dir)?;
            }
            for (label, report) in [("ECB", &reports[0]), ("CBC", &reports[1])] {
                let mean = |s| report.mean_security(s).map(format_g).unwrap_or_default();
                emit(&format!(
                    "{label} mean security: fixed {}, adaptive {}\n",
                    mean(Scheme::Fixed),
                    mean(Scheme::Adaptive)
                ))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("linkcrypt: {e}");
            ExitCode::FAILURE
        }
    }
}
