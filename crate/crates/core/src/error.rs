use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while encoding, decoding or inspecting a
/// container.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot convert an empty byte block")]
    EmptyBlock,

    #[error("decoded value is corrupt: {0}")]
    CorruptValue(String),

    #[error("malformed digit string: {0}")]
    MalformedDigits(String),

    #[error("chunk size must be at least one digit")]
    InvalidChunkSize,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("chunk value does not fit in {digit_len} digits")]
    ChunkOverflow { digit_len: usize },

    #[error("mantissa could not be verified after {attempts} precision attempts")]
    PrecisionExhausted { attempts: u32 },

    #[error("inverse is ambiguous: {0}")]
    AmbiguousInverse(String),

    #[error("unsupported container format: {0}")]
    UnsupportedFormat(String),

    #[error("container is malformed: {0}")]
    MalformedContainer(String),

    #[error("container truncated at block {block}{}", .chunk.map(|c| format!(" chunk {c}")).unwrap_or_default())]
    Truncated { block: usize, chunk: Option<usize> },

    #[error("integrity check failed: expected sha256 {expected}, got {actual}")]
    IntegrityFailure { expected: String, actual: String },

    #[error("block {block} chunk {chunk}: {source}")]
    Chunk {
        block: usize,
        chunk: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O failure: {0}")]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn at(self, block: usize, chunk: usize) -> Error {
        Error::Chunk {
            block,
            chunk,
            source: Box::new(self),
        }
    }

    /// The innermost error, with any block/chunk location stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::Chunk { source, .. } => source.root(),
            other => other,
        }
    }

    /// Process exit status used by the command-line tool.
    ///
    /// 1 usage, 2 integrity/corruption, 3 precision exhausted, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::InvalidChunkSize | Error::InvalidConfig(_) => 1,
            Error::PrecisionExhausted { .. } => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }
}
