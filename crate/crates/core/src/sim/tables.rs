//! Fixed vs. adaptive comparison tables, one per (mode, measure).

use std::fmt::{self, Write as _};
use std::path::Path;

use super::config::Scheme;
use super::output::format_g;
use super::SweepReport;
use crate::error::{Error, Result};
use crate::modes::Mode;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    EcbStrength,
    EcbThroughput,
    CbcStrength,
    CbcThroughput,
}

impl TableKind {
    pub const ALL: [TableKind; 4] = [
        TableKind::EcbStrength,
        TableKind::EcbThroughput,
        TableKind::CbcStrength,
        TableKind::CbcThroughput,
    ];

    pub fn number(self) -> usize {
        match self {
            TableKind::EcbStrength => 1,
            TableKind::EcbThroughput => 2,
            TableKind::CbcStrength => 3,
            TableKind::CbcThroughput => 4,
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            TableKind::EcbStrength | TableKind::EcbThroughput => Mode::Ecb,
            _ => Mode::Cbc,
        }
    }

    fn is_strength(self) -> bool {
        matches!(self, TableKind::EcbStrength | TableKind::CbcStrength)
    }

    pub fn value_label(self) -> &'static str {
        if self.is_strength() {
            "cipher_strength_bits"
        } else {
            "throughput_normalized"
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = if self.is_strength() {
            "Cipher strength"
        } else {
            "Throughput"
        };
        write!(
            f,
            "Table {}. {what}, fixed vs. variable block length, {} mode",
            self.number(),
            self.mode().to_string().to_uppercase()
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub snr_db: f64,
    pub fixed_block_len: f64,
    pub fixed_value: f64,
    pub adaptive_block_len: f64,
    pub adaptive_value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonTables {
    pub tables: Vec<(TableKind, Vec<TableRow>)>,
}

impl ComparisonTables {
    /// Builds all four tables from an ECB and a CBC report, each holding both
    /// schemes.
    pub fn from_reports(ecb: &SweepReport, cbc: &SweepReport) -> Result<Self> {
        let mut tables = Vec::new();
        for kind in TableKind::ALL {
            let report = if kind.mode() == Mode::Ecb { ecb } else { cbc };
            let fixed = report.series(Scheme::Fixed, kind.mode());
            let adaptive = report.series(Scheme::Adaptive, kind.mode());
            if fixed.is_empty() || fixed.len() != adaptive.len() {
                return Err(Error::Report {
                    row: 0,
                    reason: format!("{kind} needs matching fixed and adaptive rows"),
                });
            }
            let value = |r: &super::SweepRow| {
                if kind.is_strength() {
                    r.cipher_strength_bits
                } else {
                    r.throughput_empirical
                }
            };
            let rows = fixed
                .iter()
                .zip(&adaptive)
                .map(|(f, a)| TableRow {
                    snr_db: f.snr_db,
                    fixed_block_len: f.mean_block_len_bits,
                    fixed_value: value(f),
                    adaptive_block_len: a.mean_block_len_bits,
                    adaptive_value: value(a),
                })
                .collect();
            tables.push((kind, rows));
        }
        Ok(ComparisonTables { tables })
    }

    pub fn table(&self, kind: TableKind) -> &[TableRow] {
        &self
            .tables
            .iter()
            .find(|(k, _)| *k == kind)
            .expect("all four tables")
            .1
    }

    pub fn csv(&self, kind: TableKind) -> String {
        let mut s = format!(
            "snr_db,fixed_block_len_bits,fixed_{v},adaptive_block_len_bits,adaptive_{v}\n",
            v = kind.value_label()
        );
        for r in self.table(kind) {
            writeln!(
                s,
                "{},{},{},{},{}",
                format_g(r.snr_db),
                format_g(r.fixed_block_len),
                format_g(r.fixed_value),
                format_g(r.adaptive_block_len),
                format_g(r.adaptive_value)
            )
            .unwrap();
        }
        s
    }

    /// Plain-text rendering of all four tables.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for (kind, rows) in &self.tables {
            let label = if kind.is_strength() {
                "strength"
            } else {
                "throughput"
            };
            writeln!(s, "{kind}").unwrap();
            writeln!(
                s,
                "{:>8}  {:>10} {:>10}  {:>10} {:>10}",
                "SNR dB", "fixed len", label, "adapt len", label
            )
            .unwrap();
            for r in rows {
                let v = |x: f64| {
                    if kind.is_strength() {
                        format!("{x:.0}")
                    } else {
                        format!("{x:.4}")
                    }
                };
                writeln!(
                    s,
                    "{:>8}  {:>10} {:>10}  {:>10} {:>10}",
                    format_g(r.snr_db),
                    format_g(r.fixed_block_len),
                    v(r.fixed_value),
                    format_g(r.adaptive_block_len),
                    v(r.adaptive_value)
                )
                .unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Writes `table1.csv` to `table4.csv` into `dir`.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for kind in TableKind::ALL {
            let path = dir.join(format!("table{}.csv", kind.number()));
            std::fs::write(&path, self.csv(kind)).map_err(|source| Error::Io { path, source })?;
        }
        Ok(())
    }
}
