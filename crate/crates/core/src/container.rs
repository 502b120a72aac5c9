//! The `LPPI` archive format.
//!
//! ```text
//! header (58 bytes, little-endian)
//!   0   magic          "LPPI"
//!   4   version        u8 = 1
//!   5   flags          u8, bit 0 = whole input is a single block
//!   6   block_size     u32
//!   10  chunk_digits   u32
//!   14  original_len   u64
//!   22  original_sha256 [u8; 32]
//!   54  block_count    u32
//! per block
//!   chunk_count        u32
//!   per chunk
//!     digit_len        u32
//!     r                u8
//!     mantissa_len     u32
//!     mantissa         ceil(mantissa_len / 2) bytes of BCD, high nibble
//!                      first, 0xF pads an odd count
//! ```

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::iterlog::{iterlog_decode, iterlog_forward, IterLogRecord, PrecisionPolicy};
use crate::partition::{partition, reassemble, Chunk, ChunkPlan};
use crate::radix::{
    bignumber_to_bytes, bignumber_to_digits, bytes_to_bignumber, digit_count_window, digits_to_bignumber, BigNumber,
    DigitString,
};

pub const MAGIC: [u8; 4] = *b"LPPI";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 58;
pub const FLAG_SINGLE_BLOCK: u8 = 0x01;

/// digit_len + r + mantissa_len
const RECORD_FIXED_LEN: usize = 9;
const PAD_NIBBLE: u8 = 0xF;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodecConfig {
    pub block_size: u32,
    pub chunk_digits: u32,
    pub policy: PrecisionPolicy,
    /// Convert the whole input into one integer instead of fixed-size blocks.
    pub single_block: bool,
    /// Worker threads for chunk transforms.
    pub jobs: usize,
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig {
            block_size: 4096,
            chunk_digits: 64,
            policy: PrecisionPolicy::default(),
            single_block: false,
            jobs: 1,
        }
    }
}

impl CodecConfig {
    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 {
            return Err(Error::InvalidConfig("block size must be at least 1 byte".into()));
        }
        if self.chunk_digits == 0 {
            return Err(Error::InvalidChunkSize);
        }
        if self.jobs == 0 {
            return Err(Error::InvalidConfig("job count must be at least 1".into()));
        }
        self.policy.validate()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContainerHeader {
    pub version: u8,
    pub flags: u8,
    pub block_size: u32,
    pub chunk_digits: u32,
    pub original_len: u64,
    pub original_sha256: [u8; 32],
    pub block_count: u32,
}

impl ContainerHeader {
    pub fn single_block(&self) -> bool {
        self.flags & FLAG_SINGLE_BLOCK != 0
    }

    /// Byte length of block `index`.
    pub fn block_len(&self, index: usize) -> u64 {
        if self.single_block() {
            return self.original_len;
        }
        let start = index as u64 * self.block_size as u64;
        (self.original_len - start).min(self.block_size as u64)
    }

    fn expected_block_count(&self) -> u64 {
        match (self.original_len, self.single_block()) {
            (0, _) => 0,
            (_, true) => 1,
            (len, false) => len.div_ceil(self.block_size as u64),
        }
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&MAGIC);
        out.push(self.version);
        out.push(self.flags);
        out.extend_from_slice(&self.block_size.to_le_bytes());
        out.extend_from_slice(&self.chunk_digits.to_le_bytes());
        out.extend_from_slice(&self.original_len.to_le_bytes());
        out.extend_from_slice(&self.original_sha256);
        out.extend_from_slice(&self.block_count.to_le_bytes());
    }

    pub fn parse(bytes: &[u8]) -> Result<ContainerHeader> {
        if bytes.len() < MAGIC.len() || bytes[..4] != MAGIC {
            return Err(Error::UnsupportedFormat("missing LPPI magic".into()));
        }
        if bytes.len() < HEADER_LEN {
            return Err(Error::MalformedContainer(format!(
                "header needs {HEADER_LEN} bytes, found {}",
                bytes.len()
            )));
        }
        let mut r = Reader::new(&bytes[4..HEADER_LEN]);
        let version = r.u8().expect("sized");
        if version != VERSION {
            return Err(Error::UnsupportedFormat(format!("version {version}")));
        }
        let flags = r.u8().expect("sized");
        if flags & !FLAG_SINGLE_BLOCK != 0 {
            return Err(Error::UnsupportedFormat(format!("unknown flags {flags:#04x}")));
        }
        let header = ContainerHeader {
            version,
            flags,
            block_size: r.u32().expect("sized"),
            chunk_digits: r.u32().expect("sized"),
            original_len: r.u64().expect("sized"),
            original_sha256: r.take(32).expect("sized").try_into().expect("32 bytes"),
            block_count: r.u32().expect("sized"),
        };
        if header.block_size == 0 || header.chunk_digits == 0 {
            return Err(Error::MalformedContainer(
                "block size and chunk digits must be non-zero".into(),
            ));
        }
        if header.block_count as u64 != header.expected_block_count() {
            return Err(Error::MalformedContainer(format!(
                "{} blocks declared for {} input bytes",
                header.block_count, header.original_len
            )));
        }
        Ok(header)
    }
}

/// On-disk form of one chunk record.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkRecordWire {
    pub digit_len: u32,
    pub r: u8,
    pub mantissa_len: u32,
    /// BCD, two digits per byte.
    pub packed: Vec<u8>,
}

impl ChunkRecordWire {
    pub fn from_record(rec: &IterLogRecord) -> Self {
        let digits = rec.mantissa.as_str().as_bytes();
        ChunkRecordWire {
            digit_len: u32::try_from(rec.digit_len).expect("chunk width fits in u32"),
            r: rec.r,
            mantissa_len: u32::try_from(digits.len()).expect("mantissa fits in u32"),
            packed: pack_bcd(digits),
        }
    }

    pub fn to_record(&self) -> Result<IterLogRecord> {
        if self.mantissa_len == 0 {
            return Err(Error::MalformedContainer("empty mantissa".into()));
        }
        if self.digit_len == 0 {
            return Err(Error::MalformedContainer("zero digit length".into()));
        }
        let digits = unpack_bcd(&self.packed, self.mantissa_len as usize)?;
        Ok(IterLogRecord {
            r: self.r,
            mantissa: DigitString::from_trusted(digits),
            digit_len: self.digit_len as usize,
        })
    }

    pub fn encoded_len(&self) -> usize {
        RECORD_FIXED_LEN + self.packed.len()
    }

    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&self.digit_len.to_le_bytes());
        out.push(self.r);
        out.extend_from_slice(&self.mantissa_len.to_le_bytes());
        out.extend_from_slice(&self.packed);
    }
}

pub fn pack_bcd(digits: &[u8]) -> Vec<u8> {
    digits
        .chunks(2)
        .map(|pair| {
            let hi = pair[0] - b'0';
            let lo = pair.get(1).map_or(PAD_NIBBLE, |d| d - b'0');
            hi << 4 | lo
        })
        .collect()
}

pub fn unpack_bcd(packed: &[u8], count: usize) -> Result<String> {
    if packed.len() != count.div_ceil(2) {
        return Err(Error::MalformedContainer("BCD length mismatch".into()));
    }
    let mut out = String::with_capacity(count);
    for (i, nibble) in packed.iter().flat_map(|b| [b >> 4, b & 0x0F]).enumerate() {
        if i < count {
            if nibble > 9 {
                return Err(Error::MalformedContainer(format!("BCD nibble {nibble:#x}")));
            }
            out.push(char::from(b'0' + nibble));
        } else if nibble != PAD_NIBBLE {
            return Err(Error::MalformedContainer("BCD pad nibble is not 0xF".into()));
        }
    }
    Ok(out)
}

/// A parsed archive: header plus the chunk records of every block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Container {
    pub header: ContainerHeader,
    pub blocks: Vec<Vec<IterLogRecord>>,
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.record_bytes_hint());
        self.header.write_to(&mut out);
        for block in &self.blocks {
            let count = u32::try_from(block.len()).expect("chunk count fits in u32");
            out.extend_from_slice(&count.to_le_bytes());
            for rec in block {
                ChunkRecordWire::from_record(rec).write_to(&mut out);
            }
        }
        out
    }

    fn record_bytes_hint(&self) -> usize {
        self.blocks
            .iter()
            .flatten()
            .map(|rec| 4 + RECORD_FIXED_LEN + rec.mantissa_len().div_ceil(2))
            .sum()
    }

    /// Parses and structurally validates a container. Never panics on
    /// arbitrary input.
    pub fn parse(bytes: &[u8]) -> Result<Container> {
        let header = ContainerHeader::parse(bytes)?;
        let mut r = Reader::new(&bytes[HEADER_LEN..]);
        let k = header.chunk_digits as usize;
        let mut blocks = Vec::with_capacity((header.block_count as usize).min(r.remaining() / 4));

        for b in 0..header.block_count as usize {
            let count = r.u32().ok_or(Error::Truncated { block: b, chunk: None })? as usize;
            if count == 0 {
                return Err(Error::MalformedContainer(format!("block {b} has no chunks")));
            }
            let mut records = Vec::with_capacity(count.min(r.remaining() / RECORD_FIXED_LEN));
            let mut digits = 0u64;
            for c in 0..count {
                let truncated = || Error::Truncated {
                    block: b,
                    chunk: Some(c),
                };
                let digit_len = r.u32().ok_or_else(truncated)?;
                let rr = r.u8().ok_or_else(truncated)?;
                let mantissa_len = r.u32().ok_or_else(truncated)?;
                let packed = r
                    .take((mantissa_len as usize).div_ceil(2))
                    .ok_or_else(truncated)?
                    .to_vec();
                let wire = ChunkRecordWire {
                    digit_len,
                    r: rr,
                    mantissa_len,
                    packed,
                };
                let rec = wire.to_record().map_err(|e| e.at(b, c))?;
                let last = c + 1 == count;
                if rec.digit_len > k || (!last && rec.digit_len != k) {
                    return Err(Error::MalformedContainer(format!(
                        "chunk width {} does not fit the {k}-digit partition",
                        rec.digit_len
                    ))
                    .at(b, c));
                }
                digits += rec.digit_len as u64;
                records.push(rec);
            }
            let (lo, hi) = digit_count_window(header.block_len(b) as usize);
            if digits < lo as u64 || digits > hi as u64 {
                return Err(Error::MalformedContainer(format!(
                    "block {b} holds {digits} digits, expected {lo}..={hi}"
                )));
            }
            blocks.push(records);
        }
        if r.remaining() != 0 {
            return Err(Error::MalformedContainer(format!(
                "{} trailing bytes after the last block",
                r.remaining()
            )));
        }
        Ok(Container { header, blocks })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Reader { bytes }
    }

    fn remaining(&self) -> usize {
        self.bytes.len()
    }

    fn take(&mut self, n: usize) -> Option<&'a [u8]> {
        if self.bytes.len() < n {
            return None;
        }
        let (head, tail) = self.bytes.split_at(n);
        self.bytes = tail;
        Some(head)
    }

    fn u8(&mut self) -> Option<u8> {
        self.take(1).map(|b| b[0])
    }

    fn u32(&mut self) -> Option<u32> {
        self.take(4).map(|b| u32::from_le_bytes(b.try_into().unwrap()))
    }

    fn u64(&mut self) -> Option<u64> {
        self.take(8).map(|b| u64::from_le_bytes(b.try_into().unwrap()))
    }
}

pub fn sha256(data: &[u8]) -> [u8; 32] {
    Sha256::digest(data).into()
}

pub fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("cannot start worker pool: {e}")))
}

fn encode_block(index: usize, block: &[u8], k: usize, policy: &PrecisionPolicy) -> Result<Vec<IterLogRecord>> {
    let n = bytes_to_bignumber(block)?;
    let plan = partition(&bignumber_to_digits(&n), k)?;
    plan.chunks
        .par_iter()
        .enumerate()
        .map(|(c, chunk)| {
            let value = digits_to_bignumber(&DigitString::from_trusted(chunk.digits.clone()));
            iterlog_forward(&value, chunk.digit_len, policy).map_err(|e| e.at(index, c))
        })
        .collect()
}

/// Runs the full forward pipeline and returns the parsed form of the
/// container that [`compress_stream`] would write.
pub fn encode(input: &[u8], config: &CodecConfig) -> Result<Container> {
    config.validate()?;
    let blocks: Vec<&[u8]> = match (input.is_empty(), config.single_block) {
        (true, _) => Vec::new(),
        (false, true) => vec![input],
        (false, false) => input.chunks(config.block_size as usize).collect(),
    };
    let block_count =
        u32::try_from(blocks.len()).map_err(|_| Error::InvalidConfig("input needs more than 2^32 blocks".into()))?;
    let k = config.chunk_digits as usize;
    let records = pool(config.jobs)?.install(|| {
        blocks
            .par_iter()
            .enumerate()
            .map(|(i, block)| encode_block(i, block, k, &config.policy))
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(Container {
        header: ContainerHeader {
            version: VERSION,
            flags: if config.single_block { FLAG_SINGLE_BLOCK } else { 0 },
            block_size: config.block_size,
            chunk_digits: config.chunk_digits,
            original_len: input.len() as u64,
            original_sha256: sha256(input),
            block_count,
        },
        blocks: records,
    })
}

pub fn compress_stream(input: &[u8], config: &CodecConfig) -> Result<Vec<u8>> {
    Ok(encode(input, config)?.to_bytes())
}

fn decode_block(index: usize, records: &[IterLogRecord], block_len: usize, k: usize) -> Result<Vec<u8>> {
    let chunks = records
        .par_iter()
        .enumerate()
        .map(|(c, rec)| {
            let value = iterlog_decode(rec).map_err(|e| e.at(index, c))?;
            Ok(Chunk::from_value(&value, rec.digit_len))
        })
        .collect::<Result<Vec<_>>>()?;
    let plan = ChunkPlan {
        chunks,
        chunk_digits: k,
    };
    let block_err = |e: Error| Error::Chunk {
        block: index,
        chunk: records.len() - 1,
        source: Box::new(e),
    };
    let digits = reassemble(&plan).map_err(block_err)?;
    if digits.as_str().starts_with('0') {
        return Err(block_err(Error::CorruptValue("block digits start with 0".into())));
    }
    let value: BigNumber = digits_to_bignumber(&digits);
    bignumber_to_bytes(&value, block_len).map_err(block_err)
}

pub fn decompress_stream(container: &[u8]) -> Result<Vec<u8>> {
    decompress_stream_with_jobs(container, 1)
}

pub fn decompress_stream_with_jobs(container: &[u8], jobs: usize) -> Result<Vec<u8>> {
    let parsed = Container::parse(container)?;
    decode(&parsed, jobs)
}

/// Inverts a parsed container and checks the result against the stored
/// length and SHA-256.
pub fn decode(container: &Container, jobs: usize) -> Result<Vec<u8>> {
    let header = &container.header;
    let k = header.chunk_digits as usize;
    let pieces = pool(jobs)?.install(|| {
        container
            .blocks
            .par_iter()
            .enumerate()
            .map(|(b, records)| decode_block(b, records, header.block_len(b) as usize, k))
            .collect::<Result<Vec<_>>>()
    })?;
    let output = pieces.concat();
    if output.len() as u64 != header.original_len {
        return Err(Error::CorruptValue(format!(
            "decoded {} bytes, header says {}",
            output.len(),
            header.original_len
        )));
    }
    let actual = sha256(&output);
    if actual != header.original_sha256 {
        return Err(Error::IntegrityFailure {
            expected: to_hex(&header.original_sha256),
            actual: to_hex(&actual),
        });
    }
    Ok(output)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrityReport {
    pub matched: bool,
    pub original_hash: [u8; 32],
    pub stored_hash: [u8; 32],
}

/// Compares the hash of `original` with the one stored in the container
/// header, without decoding any chunk.
pub fn verify_integrity(original: &[u8], container: &[u8]) -> Result<IntegrityReport> {
    let header = ContainerHeader::parse(container)?;
    let original_hash = sha256(original);
    Ok(IntegrityReport {
        matched: original_hash == header.original_sha256,
        original_hash,
        stored_hash: header.original_sha256,
    })
}
