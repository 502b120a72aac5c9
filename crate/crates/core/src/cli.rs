//! Command-line front end: `compress`, `decompress`, `verify`, `bench`,
//! `audit` and `gen-corpus`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::bench::{render_audit, render_bench, run_audit, run_benchmark, Method, ReportFormat};
use crate::container::{compress_stream, decompress_stream_with_jobs, to_hex, verify_integrity, CodecConfig};
use crate::corpus::write_corpus;
use crate::error::{Error, Result};
use crate::iterlog::PrecisionPolicy;

#[derive(Debug, Parser)]
#[command(name = "lppie", version, about = "Iterated-logarithm partition codec")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a file into an LPPI container.
    Compress {
        /// File to compress.
        #[arg(short, long)]
        input: PathBuf,
        /// Container to write.
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        codec: CodecArgs,
    },
    /// Decode a container and check its SHA-256.
    Decompress {
        /// Container to read.
        #[arg(short, long)]
        input: PathBuf,
        /// Where to write the restored file.
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        jobs: JobsArg,
    },
    /// Compare a file's SHA-256 with the one stored in a container.
    Verify {
        /// Original file.
        #[arg(short, long)]
        input: PathBuf,
        /// Container whose stored hash is checked.
        #[arg(short, long)]
        container: PathBuf,
    },
    /// Size/time table against external compressors.
    Bench {
        /// File to measure.
        #[arg(short, long)]
        input: PathBuf,
        /// Report destination; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Comma-separated tools (zip, xz, 7z, gz, bzip2, zstd); empty for LPPIE only.
        #[arg(long, value_delimiter = ',', default_value = "zip,xz,7z,gz")]
        methods: Vec<String>,
        /// markdown or csv.
        #[arg(long, default_value = "markdown")]
        format: String,
        #[command(flatten)]
        codec: CodecArgs,
    },
    /// Per-chunk breakdown of what the container stores.
    Audit {
        /// File to analyse.
        #[arg(short, long)]
        input: PathBuf,
        /// Report destination; standard output when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// markdown or csv.
        #[arg(long, default_value = "markdown")]
        format: String,
        #[command(flatten)]
        codec: CodecArgs,
    },
    /// Write a synthetic corpus (random, zero-filled, text-like, edge cases).
    GenCorpus {
        /// Directory to fill.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 1 << 20)]
        max_size: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct JobsArg {
    /// Worker threads for chunk transforms.
    #[arg(long, env = "LPPIE_JOBS", default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct CodecArgs {
    /// Decimal digits per chunk.
    #[arg(long, default_value_t = 64)]
    pub chunk_digits: u32,
    /// Bytes per block.
    #[arg(long, default_value_t = 4096)]
    pub block_size: u32,
    /// Treat the whole input as one integer.
    #[arg(long)]
    pub single_block: bool,
    /// Initial guard digits of working precision.
    #[arg(long, default_value_t = 8)]
    pub guard: u32,
    #[command(flatten)]
    pub jobs: JobsArg,
}

impl CodecArgs {
    pub fn config(&self) -> Result<CodecConfig> {
        let config = CodecConfig {
            block_size: self.block_size,
            chunk_digits: self.chunk_digits,
            policy: PrecisionPolicy {
                initial_guard: self.guard,
                ..PrecisionPolicy::default()
            },
            single_block: self.single_block,
            jobs: self.jobs.jobs,
        };
        config.validate()?;
        Ok(config)
    }
}

fn read_input(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn write_output(path: &Path, data: &[u8]) -> Result<()> {
    fs::write(path, data).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Fails early when `path` cannot be created, before any encoding work.
fn check_output(path: &Path) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    if !parent.is_dir() {
        return Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("output directory {} does not exist", parent.display()),
        )));
    }
    Ok(())
}

fn ratio(num: usize, den: usize) -> String {
    if den == 0 {
        "-".into()
    } else {
        format!("{:.3}", num as f64 / den as f64)
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_output(p, text.as_bytes()),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

/// Runs one parsed command, writing the human-readable summary to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Compress { input, output, codec } => {
            let config = codec.config()?;
            check_output(&output)?;
            let data = read_input(&input)?;
            let start = Instant::now();
            let container = compress_stream(&data, &config)?;
            let elapsed = start.elapsed().as_secs_f64();
            write_output(&output, &container)?;
            writeln!(
                out,
                "compressed {} bytes -> {} bytes (ratio {}) in {elapsed:.3}s",
                data.len(),
                container.len(),
                ratio(container.len(), data.len())
            )?;
            writeln!(out, "sha256 {}", to_hex(&container[22..54]))?;
        }
        Command::Decompress { input, output, jobs } => {
            if jobs.jobs == 0 {
                return Err(Error::InvalidConfig("job count must be at least 1".into()));
            }
            check_output(&output)?;
            let container = read_input(&input)?;
            let start = Instant::now();
            let data = decompress_stream_with_jobs(&container, jobs.jobs)?;
            let elapsed = start.elapsed().as_secs_f64();
            write_output(&output, &data)?;
            writeln!(
                out,
                "decompressed {} bytes -> {} bytes in {elapsed:.3}s",
                container.len(),
                data.len()
            )?;
            writeln!(out, "sha256 MATCH")?;
        }
        Command::Verify { input, container } => {
            let original = read_input(&input)?;
            let archive = read_input(&container)?;
            let report = verify_integrity(&original, &archive)?;
            writeln!(out, "original sha256 {}", to_hex(&report.original_hash))?;
            writeln!(out, "stored   sha256 {}", to_hex(&report.stored_hash))?;
            if !report.matched {
                writeln!(out, "MISMATCH")?;
                return Err(Error::IntegrityFailure {
                    expected: to_hex(&report.stored_hash),
                    actual: to_hex(&report.original_hash),
                });
            }
            writeln!(out, "MATCH")?;
        }
        Command::Bench {
            input,
            output,
            methods,
            format,
            codec,
        } => {
            let config = codec.config()?;
            let format: ReportFormat = format.parse()?;
            let methods = methods
                .iter()
                .filter(|m| !m.trim().is_empty())
                .map(|m| m.trim().parse::<Method>())
                .collect::<Result<Vec<_>>>()?;
            let report = run_benchmark(&input, &methods, &config)?;
            emit(out, output.as_deref(), &render_bench(&report, format))?;
        }
        Command::Audit {
            input,
            output,
            format,
            codec,
        } => {
            let config = codec.config()?;
            let format: ReportFormat = format.parse()?;
            let report = run_audit(&input, &config)?;
            emit(out, output.as_deref(), &render_audit(&report, format))?;
        }
        Command::GenCorpus {
            output,
            count,
            max_size,
            seed,
        } => {
            let paths = write_corpus(&output, count, max_size, seed)?;
            writeln!(out, "wrote {} files to {}", paths.len(), output.display())?;
        }
    }
    Ok(())
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
