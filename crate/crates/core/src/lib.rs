//! Lossless codec built on iterated base-10 logarithms.
//!
//! Input bytes are split into blocks, each block becomes one big integer,
//! its decimal expansion is cut into fixed-width chunks, and every chunk is
//! reduced by repeated `log10` to a value below 10. The container stores the
//! loop count and a verified mantissa per chunk together with the SHA-256 of
//! the input.

pub mod bench;
pub mod cli;
pub mod container;
pub mod corpus;
pub mod error;
pub mod iterlog;
pub mod partition;
pub mod precise;
pub mod radix;

pub use container::{
    compress_stream, decompress_stream, decompress_stream_with_jobs, verify_integrity, CodecConfig, Container,
    ContainerHeader, IntegrityReport,
};
pub use error::{Error, Result};
pub use iterlog::{classify_r, iterlog_decode, iterlog_forward, iterlog_invert, IterLogRecord, PrecisionPolicy};
pub use partition::{partition, reassemble, Chunk, ChunkPlan};
pub use radix::{
    bignumber_to_bytes, bignumber_to_digits, bytes_to_bignumber, digits_to_bignumber, BigNumber, DigitString,
};
