//! CSV and plot files.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use super::{SweepReport, SweepRow};
use crate::error::{Error, Result};
use crate::metrics::{analytic_block_throughput, security_level};

pub const CSV_HEADER: [&str; 9] = [
    "snr_db",
    "scheme",
    "mode",
    "mean_block_len_bits",
    "cipher_strength_bits",
    "throughput_analytic",
    "throughput_empirical",
    "security_norm",
    "vulnerability",
];

/// `%g` with 6 significant digits.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!(
            "{}e{sign}{:02}",
            trim_zeros(mantissa.to_string()),
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn record(row: &SweepRow) -> [String; 9] {
    [
        format_g(row.snr_db),
        row.scheme.to_string(),
        row.mode.to_string(),
        format_g(row.mean_block_len_bits),
        format_g(row.cipher_strength_bits),
        format_g(row.throughput_analytic),
        format_g(row.throughput_empirical),
        format_g(row.security_norm),
        format_g(row.vulnerability),
    ]
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(report: &SweepReport, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in &report.rows {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn csv_string(report: &SweepReport) -> String {
    let mut buf = Vec::new();
    write_csv(report, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}

pub fn emit_csv(report: &SweepReport, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(report, file).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, row: usize) -> Result<T> {
    let raw = rec.get(i).ok_or_else(|| Error::Report {
        row,
        reason: format!("missing column {}", CSV_HEADER[i]),
    })?;
    raw.parse().map_err(|_| Error::Report {
        row,
        reason: format!("bad {} value {raw:?}", CSV_HEADER[i]),
    })
}

fn parse_reader<R: std::io::Read>(input: R, origin: &Path) -> Result<SweepReport> {
    let mut r = csv::Reader::from_reader(input);
    let csv_err = |source| Error::Csv {
        path: origin.to_path_buf(),
        source,
    };
    let header = r.headers().map_err(csv_err)?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Report {
            row: 0,
            reason: format!("unexpected header {:?}", header.iter().collect::<Vec<_>>()),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let n = i + 1;
        rows.push(SweepRow {
            snr_db: field(&rec, 0, n)?,
            scheme: field(&rec, 1, n)?,
            mode: field(&rec, 2, n)?,
            mean_block_len_bits: field(&rec, 3, n)?,
            cipher_strength_bits: field(&rec, 4, n)?,
            throughput_analytic: field(&rec, 5, n)?,
            throughput_empirical: field(&rec, 6, n)?,
            security_norm: field(&rec, 7, n)?,
            vulnerability: field(&rec, 8, n)?,
        });
    }
    Ok(SweepReport { rows })
}

/// Parses CSV text produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<SweepReport> {
    parse_reader(text.as_bytes(), &PathBuf::from("<memory>"))
}

pub fn read_csv(path: &Path) -> Result<SweepReport> {
    let file = std::fs::File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_reader(file, path)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TradeoffPoint {
    pub block_len_bits: usize,
    pub throughput: f64,
    pub security: f64,
}

/// 1 and then 16 to 256 in steps of 16.
pub fn tradeoff_lengths() -> Vec<usize> {
    std::iter::once(1).chain((16..=256).step_by(16)).collect()
}

/// Block-level throughput `(1 - ber)^N` and security `log2 N / log2 N_max`
/// for each length, with `N_max` the largest length given.
pub fn tradeoff_curve(ber: f64, lengths: &[usize]) -> Result<Vec<TradeoffPoint>> {
    if !(ber > 0.0 && ber < 1.0) {
        return Err(Error::config(
            "ber",
            format!("must lie in (0, 1), got {ber}"),
        ));
    }
    let n_max = *lengths
        .iter()
        .max()
        .ok_or(Error::Empty("block length set"))?;
    if lengths.contains(&0) || n_max < 2 {
        return Err(Error::config(
            "lengths",
            "need positive lengths with a maximum of at least 2",
        ));
    }
    Ok(lengths
        .iter()
        .map(|&n| TradeoffPoint {
            block_len_bits: n,
            throughput: analytic_block_throughput(ber, n),
            security: security_level(n as f64, n_max),
        })
        .collect())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn tradeoff_csv(points: &[TradeoffPoint]) -> String {
    let mut s = String::from("block_len_bits,throughput,security\n");
    for p in points {
        writeln!(
            s,
            "{},{},{}",
            p.block_len_bits,
            format_g(p.throughput),
            format_g(p.security)
        )
        .unwrap();
    }
    s
}

pub fn emit_tradeoff_curve(ber: f64, lengths: &[usize], path: &Path) -> Result<Vec<TradeoffPoint>> {
    let points = tradeoff_curve(ber, lengths)?;
    write_file(path, &tradeoff_csv(&points))?;
    Ok(points)
}

/// Both curves on one set of axes as a standalone SVG.
pub fn tradeoff_svg(points: &[TradeoffPoint], ber: f64) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const M: f64 = 50.0;
    let n_max = points.iter().map(|p| p.block_len_bits).max().unwrap_or(1) as f64;
    let x = |n: usize| M + (W - 2.0 * M) * n as f64 / n_max;
    let y = |v: f64| H - M - (H - 2.0 * M) * v;
    let path = |f: &dyn Fn(&TradeoffPoint) -> f64| {
        points
            .iter()
            .map(|p| format!("{:.1},{:.1}", x(p.block_len_bits), y(f(p))))
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<path d="M{M},{t} V{b} H{r}" fill="none" stroke="black"/>"#,
        t = M,
        b = H - M,
        r = W - M
    )
    .unwrap();
    for tick in [0.0, 0.25, 0.5, 0.75, 1.0] {
        writeln!(
            s,
            r#"<text x="{}" y="{:.1}" text-anchor="end">{tick}</text>"#,
            M - 6.0,
            y(tick) + 4.0
        )
        .unwrap();
    }
    for p in points.iter().filter(|p| p.block_len_bits % 64 == 0) {
        writeln!(
            s,
            r#"<text x="{:.1}" y="{}" text-anchor="middle">{}</text>"#,
            x(p.block_len_bits),
            H - M + 16.0,
            p.block_len_bits
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        path(&|p| p.throughput)
    )
    .unwrap();
    writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="firebrick" stroke-width="2"/>"#,
        path(&|p| p.security)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">block length (bits), BER {}</text>"#,
        W / 2.0,
        H - 12.0,
        format_g(ber)
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" fill="steelblue">throughput</text>"#,
        W - M - 160.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" fill="firebrick">security</text>"#,
        W - M - 70.0
    )
    .unwrap();
    s.push_str("</svg>\n");
    s
}

pub fn emit_tradeoff_svg(points: &[TradeoffPoint], ber: f64, path: &Path) -> Result<()> {
    write_file(path, &tradeoff_svg(points, ber))
}
