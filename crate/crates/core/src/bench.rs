//! Size/time comparison against stock compressors, and a per-chunk audit of
//! where the container's bytes go.

use std::collections::BTreeMap;
use std::env;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::time::Instant;

use crate::container::{encode, CodecConfig, HEADER_LEN};
use crate::error::{Error, Result};

pub const LPPIE: &str = "LPPIE";

/// External compressors the harness knows how to drive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Zip,
    Xz,
    SevenZ,
    Gz,
    Bzip2,
    Zstd,
}

impl Method {
    /// Default tool set for the comparison table, in row order.
    pub const TABLE: [Method; 4] = [Method::Zip, Method::Xz, Method::SevenZ, Method::Gz];
    pub const ALL: [Method; 6] = [
        Method::Zip,
        Method::Xz,
        Method::SevenZ,
        Method::Gz,
        Method::Bzip2,
        Method::Zstd,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Method::Zip => "ZIP",
            Method::Xz => "XZ",
            Method::SevenZ => "7z",
            Method::Gz => "GZ",
            Method::Bzip2 => "BZ2",
            Method::Zstd => "ZSTD",
        }
    }

    fn program(self) -> &'static str {
        match self {
            Method::Zip => "zip",
            Method::Xz => "xz",
            Method::SevenZ => "7z",
            Method::Gz => "gzip",
            Method::Bzip2 => "bzip2",
            Method::Zstd => "zstd",
        }
    }

    /// Runs the tool with default settings and returns the compressed size.
    fn run(self, program: &Path, input: &Path) -> Result<u64> {
        let output = match self {
            Method::SevenZ => {
                let dir = tempfile::tempdir()?;
                let archive = dir.path().join("out.7z");
                let status = Command::new(program)
                    .args(["a", "-bd", "-y"])
                    .arg(&archive)
                    .arg(input)
                    .stdout(Stdio::null())
                    .stderr(Stdio::null())
                    .status()?;
                if !status.success() {
                    return Err(tool_failed(self, status));
                }
                return Ok(fs::metadata(&archive)?.len());
            }
            Method::Zip => Command::new(program).args(["-q", "-"]).arg(input).output()?,
            Method::Zstd => Command::new(program).args(["-q", "-c"]).arg(input).output()?,
            Method::Xz | Method::Gz | Method::Bzip2 => Command::new(program).arg("-c").arg(input).output()?,
        };
        if !output.status.success() {
            return Err(tool_failed(self, output.status));
        }
        Ok(output.stdout.len() as u64)
    }
}

fn tool_failed(method: Method, status: std::process::ExitStatus) -> Error {
    Error::Io(std::io::Error::other(format!(
        "{} exited with {status}",
        method.program()
    )))
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "zip" => Ok(Method::Zip),
            "xz" => Ok(Method::Xz),
            "7z" => Ok(Method::SevenZ),
            "gz" | "gzip" => Ok(Method::Gz),
            "bz2" | "bzip2" => Ok(Method::Bzip2),
            "zstd" | "zst" => Ok(Method::Zstd),
            other => Err(Error::InvalidConfig(format!("unknown method {other:?}"))),
        }
    }
}

/// Looks `program` up on `PATH`.
pub fn find_program(program: &str) -> Option<PathBuf> {
    env::var_os("PATH").and_then(|paths| {
        env::split_paths(&paths)
            .map(|dir| dir.join(program))
            .find(|candidate| candidate.is_file())
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub method: String,
    pub size: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchReport {
    pub input_size: u64,
    pub rows: Vec<BenchRow>,
    /// Requested methods that did not produce a row, with the reason.
    pub skipped: Vec<(String, String)>,
    /// Worker threads used for the LPPIE row.
    pub workers: usize,
}

impl BenchReport {
    pub fn ratio(&self, row: &BenchRow) -> Option<f64> {
        (self.input_size > 0).then(|| row.size as f64 / self.input_size as f64)
    }

    pub fn row(&self, method: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

/// Compresses `input` with LPPIE and with every requested tool found on the
/// system. Each method reads the original file.
pub fn run_benchmark(input: &Path, methods: &[Method], config: &CodecConfig) -> Result<BenchReport> {
    let data = fs::read(input)?;
    let mut rows = Vec::new();

    let start = Instant::now();
    let container = encode(&data, config)?.to_bytes();
    rows.push(BenchRow {
        method: LPPIE.to_string(),
        size: container.len() as u64,
        seconds: start.elapsed().as_secs_f64(),
    });

    let mut skipped = Vec::new();
    let mut seen = Vec::new();
    for &method in methods {
        if seen.contains(&method) {
            continue;
        }
        seen.push(method);
        let Some(program) = find_program(method.program()) else {
            skipped.push((method.label().to_string(), format!("{} not found", method.program())));
            continue;
        };
        let start = Instant::now();
        match method.run(&program, input) {
            Ok(size) => rows.push(BenchRow {
                method: method.label().to_string(),
                size,
                seconds: start.elapsed().as_secs_f64(),
            }),
            Err(e) => skipped.push((method.label().to_string(), e.to_string())),
        }
    }

    Ok(BenchReport {
        input_size: data.len() as u64,
        rows,
        skipped,
        workers: config.jobs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AuditEntry {
    pub block: usize,
    pub chunk: usize,
    pub digit_len: usize,
    pub r: u8,
    pub mantissa_len: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub input_size: u64,
    pub container_size: u64,
    pub entries: Vec<AuditEntry>,
}

impl AuditReport {
    pub fn chunk_count(&self) -> usize {
        self.entries.len()
    }

    pub fn mean_digit_len(&self) -> f64 {
        mean(self.entries.iter().map(|e| e.digit_len))
    }

    pub fn mean_mantissa_len(&self) -> f64 {
        mean(self.entries.iter().map(|e| e.mantissa_len))
    }

    /// Stored mantissa digits per original chunk digit.
    pub fn mantissa_per_digit(&self) -> f64 {
        let digits: usize = self.entries.iter().map(|e| e.digit_len).sum();
        let stored: usize = self.entries.iter().map(|e| e.mantissa_len).sum();
        if digits == 0 {
            0.0
        } else {
            stored as f64 / digits as f64
        }
    }

    pub fn r_histogram(&self) -> BTreeMap<u8, usize> {
        let mut hist = BTreeMap::new();
        for e in &self.entries {
            *hist.entry(e.r).or_insert(0) += 1;
        }
        hist
    }

    /// Bytes spent on packed mantissa digits.
    pub fn mantissa_bytes(&self) -> u64 {
        self.entries.iter().map(|e| e.mantissa_len.div_ceil(2) as u64).sum()
    }

    /// Header, chunk counts and per-record fixed fields.
    pub fn overhead_bytes(&self) -> u64 {
        self.container_size - self.mantissa_bytes()
    }
}

fn mean(values: impl Iterator<Item = usize>) -> f64 {
    let (sum, n) = values.fold((0usize, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum as f64 / n as f64
    }
}

pub fn audit_bytes(data: &[u8], config: &CodecConfig) -> Result<AuditReport> {
    let container = encode(data, config)?;
    let entries = container
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(b, records)| {
            records.iter().enumerate().map(move |(c, rec)| AuditEntry {
                block: b,
                chunk: c,
                digit_len: rec.digit_len,
                r: rec.r,
                mantissa_len: rec.mantissa_len(),
            })
        })
        .collect::<Vec<_>>();
    let container_size = HEADER_LEN as u64
        + container.blocks.len() as u64 * 4
        + entries
            .iter()
            .map(|e| 9 + e.mantissa_len.div_ceil(2) as u64)
            .sum::<u64>();
    Ok(AuditReport {
        input_size: data.len() as u64,
        container_size,
        entries,
    })
}

pub fn run_audit(input: &Path, config: &CodecConfig) -> Result<AuditReport> {
    audit_bytes(&fs::read(input)?, config)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Markdown,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidConfig(format!("unknown report format {other:?}"))),
        }
    }
}

fn fmt_ratio(ratio: Option<f64>) -> String {
    ratio.map_or_else(|| "-".to_string(), |r| format!("{r:.3}"))
}

pub fn render_bench(report: &BenchReport, format: ReportFormat) -> String {
    let original_ratio = (report.input_size > 0).then_some(1.0);
    let mut out = String::new();
    match format {
        ReportFormat::Markdown => {
            out.push_str("| Method | Size (bytes) | Time (s) | Ratio |\n");
            out.push_str("|---|---:|---:|---:|\n");
            let _ = writeln!(
                out,
                "| Original | {} | - | {} |",
                report.input_size,
                fmt_ratio(original_ratio)
            );
            for row in &report.rows {
                let _ = writeln!(
                    out,
                    "| {} | {} | {:.3} | {} |",
                    row.method,
                    row.size,
                    row.seconds,
                    fmt_ratio(report.ratio(row))
                );
            }
            let _ = writeln!(out, "\nLPPIE workers: {}", report.workers);
            for (method, reason) in &report.skipped {
                let _ = writeln!(out, "Skipped {method}: {reason}");
            }
        }
        ReportFormat::Csv => {
            out.push_str("method,size_bytes,time_s,ratio\n");
            let _ = writeln!(out, "Original,{},,{}", report.input_size, fmt_ratio(original_ratio));
            for row in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{:.3},{}",
                    row.method,
                    row.size,
                    row.seconds,
                    fmt_ratio(report.ratio(row))
                );
            }
        }
    }
    out
}

pub fn render_audit(report: &AuditReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str("block,chunk,digit_len,r,mantissa_len\n");
            for e in &report.entries {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    e.block, e.chunk, e.digit_len, e.r, e.mantissa_len
                );
            }
        }
        ReportFormat::Markdown => {
            let ratio = (report.input_size > 0).then(|| report.container_size as f64 / report.input_size as f64);
            out.push_str("| Metric | Value |\n|---|---:|\n");
            let _ = writeln!(out, "| Input bytes | {} |", report.input_size);
            let _ = writeln!(out, "| Container bytes | {} |", report.container_size);
            let _ = writeln!(out, "| Ratio | {} |", fmt_ratio(ratio));
            let _ = writeln!(out, "| Chunks | {} |", report.chunk_count());
            let _ = writeln!(out, "| Mean digit_len | {:.3} |", report.mean_digit_len());
            let _ = writeln!(out, "| Mean mantissa_len | {:.3} |", report.mean_mantissa_len());
            let _ = writeln!(
                out,
                "| Mantissa digits per chunk digit | {:.3} |",
                report.mantissa_per_digit()
            );
            let _ = writeln!(out, "| Mantissa bytes | {} |", report.mantissa_bytes());
            let _ = writeln!(out, "| Overhead bytes | {} |", report.overhead_bytes());
            out.push_str("\n| r | Chunks |\n|---:|---:|\n");
            for (r, count) in report.r_histogram() {
                let _ = writeln!(out, "| {r} | {count} |");
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> BenchReport {
        BenchReport {
            input_size: 1000,
            rows: vec![
                BenchRow {
                    method: LPPIE.into(),
                    size: 1612,
                    seconds: 0.25,
                },
                BenchRow {
                    method: "GZ".into(),
                    size: 421,
                    seconds: 0.0125,
                },
            ],
            skipped: vec![],
            workers: 1,
        }
    }

    #[test]
    fn markdown_table_shape() {
        let text = render_bench(&sample_report(), ReportFormat::Markdown);
        let table: Vec<&str> = text.lines().take_while(|l| l.starts_with('|')).collect();
        assert_eq!(table[0], "| Method | Size (bytes) | Time (s) | Ratio |");
        assert_eq!(table[2], "| Original | 1000 | - | 1.000 |");
        assert_eq!(table[3], "| LPPIE | 1612 | 0.250 | 1.612 |");
        assert_eq!(table[4], "| GZ | 421 | 0.013 | 0.421 |");
        assert_eq!(table.len(), 5);
        assert_eq!(text, render_bench(&sample_report(), ReportFormat::Markdown));
    }

    #[test]
    fn csv_shape() {
        let text = render_bench(&sample_report(), ReportFormat::Csv);
        assert_eq!(
            text,
            "method,size_bytes,time_s,ratio\nOriginal,1000,,1.000\nLPPIE,1612,0.250,1.612\nGZ,421,0.013,0.421\n"
        );
    }

    #[test]
    fn audit_of_short_input() {
        // [0x41] -> "321": one 3-digit chunk
        let report = audit_bytes(&[0x41], &CodecConfig::default()).unwrap();
        assert_eq!(report.entries.len(), 1);
        assert_eq!(report.entries[0].digit_len, 3);
        assert_eq!(report.entries[0].r, 1);
        assert_eq!(report.container_size, 58 + 4 + 9 + 3);
        let csv = render_audit(&report, ReportFormat::Csv);
        assert_eq!(csv, "block,chunk,digit_len,r,mantissa_len\n0,0,3,1,5\n");
    }

    #[test]
    fn audit_size_matches_container() {
        let data: Vec<u8> = (0..9000u32).map(|i| (i * 31 % 256) as u8).collect();
        let config = CodecConfig::default();
        let report = audit_bytes(&data, &config).unwrap();
        let real = crate::compress_stream(&data, &config).unwrap();
        assert_eq!(report.container_size, real.len() as u64);
        assert_eq!(report.overhead_bytes() + report.mantissa_bytes(), report.container_size);
    }

    #[test]
    fn short_chunks_have_one_step() {
        let data: Vec<u8> = (0..4096u32).map(|i| (i.wrapping_mul(2654435761) >> 7) as u8).collect();
        let config = CodecConfig {
            chunk_digits: 8,
            ..CodecConfig::default()
        };
        let report = audit_bytes(&data, &config).unwrap();
        let (last, full) = report.entries.split_last().unwrap();
        for e in full {
            assert_eq!(e.digit_len, 8);
            // leading-zero chunks can have small values; full-width values are r = 1
            assert!(e.r <= 1);
        }
        assert!(last.digit_len <= 8);
    }

    #[test]
    fn method_names() {
        assert_eq!("gz".parse::<Method>().unwrap(), Method::Gz);
        assert_eq!("7z".parse::<Method>().unwrap(), Method::SevenZ);
        assert!("lzma".parse::<Method>().is_err());
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
    }
}
