//! C ABI for the lppie codec.
//!
//! Every entry point returns an [`LppieStatus`]. On failure a description is
//! available from [`lppie_last_error`] on the same thread. Output buffers are
//! owned by the library and must be released with [`lppie_buffer_free`].
//! Panics never cross the boundary; they surface as `LPPIE_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lppie::{CodecConfig, Error};

/// Result of every call.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LppieStatus {
    Ok = 0,
    /// A required pointer was null.
    NullPointer = 1,
    /// A codec setting is out of range.
    InvalidConfig = 2,
    /// Not an LPPI container, or an unsupported version or flag.
    UnsupportedFormat = 3,
    /// Container structure is inconsistent or cut short.
    MalformedContainer = 4,
    /// A chunk record failed to decode.
    CorruptData = 5,
    /// Decoded bytes do not hash to the stored SHA-256.
    IntegrityFailure = 6,
    /// The encoder could not verify a chunk within its retry budget.
    PrecisionExhausted = 7,
    Io = 8,
    Panic = 9,
}

impl From<&Error> for LppieStatus {
    fn from(err: &Error) -> Self {
        match err.root() {
            Error::InvalidChunkSize | Error::InvalidConfig(_) => LppieStatus::InvalidConfig,
            Error::UnsupportedFormat(_) => LppieStatus::UnsupportedFormat,
            Error::MalformedContainer(_) | Error::Truncated { .. } => LppieStatus::MalformedContainer,
            Error::IntegrityFailure { .. } => LppieStatus::IntegrityFailure,
            Error::PrecisionExhausted { .. } => LppieStatus::PrecisionExhausted,
            Error::Io(_) => LppieStatus::Io,
            _ => LppieStatus::CorruptData,
        }
    }
}

/// Opaque codec settings.
pub struct LppieCodec {
    config: CodecConfig,
}

/// Bytes allocated by the library. `data` is null when `len` is zero.
#[repr(C)]
#[derive(Debug)]
pub struct LppieBuffer {
    pub data: *mut u8,
    pub len: usize,
}

impl LppieBuffer {
    const EMPTY: LppieBuffer = LppieBuffer {
        data: ptr::null_mut(),
        len: 0,
    };

    fn from_vec(bytes: Vec<u8>) -> Self {
        if bytes.is_empty() {
            return Self::EMPTY;
        }
        let len = bytes.len();
        let data = Box::into_raw(bytes.into_boxed_slice()) as *mut u8;
        LppieBuffer { data, len }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let message = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(message));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

/// Runs `body`, recording its error or panic as the thread's last error.
fn guard<F>(body: F) -> LppieStatus
where
    F: FnOnce() -> Result<(), (LppieStatus, String)>,
{
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => LppieStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_last_error(format!("internal panic: {message}"));
            LppieStatus::Panic
        }
    }
}

fn codec_error(err: Error) -> (LppieStatus, String) {
    (LppieStatus::from(&err), err.to_string())
}

fn null(what: &str) -> (LppieStatus, String) {
    (LppieStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `data` must point to `len` readable bytes, or `len` must be zero.
unsafe fn input<'a>(data: *const u8, len: usize, what: &str) -> Result<&'a [u8], (LppieStatus, String)> {
    if len == 0 {
        Ok(&[])
    } else if data.is_null() {
        Err(null(what))
    } else {
        Ok(std::slice::from_raw_parts(data, len))
    }
}

/// # Safety
/// `codec` must be null or a live handle from [`lppie_codec_new`].
unsafe fn config_of(codec: *const LppieCodec) -> CodecConfig {
    codec.as_ref().map_or_else(CodecConfig::default, |c| c.config)
}

/// Allocates a codec with default settings: 4096-byte blocks, 64-digit
/// chunks, one worker thread.
#[no_mangle]
pub extern "C" fn lppie_codec_new() -> *mut LppieCodec {
    Box::into_raw(Box::new(LppieCodec {
        config: CodecConfig::default(),
    }))
}

/// Releases a codec. Null is ignored.
///
/// # Safety
/// `codec` must be null or a handle from [`lppie_codec_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lppie_codec_free(codec: *mut LppieCodec) {
    if !codec.is_null() {
        drop(Box::from_raw(codec));
    }
}

/// Applies `change` to a copy of the settings and keeps it only if valid.
///
/// # Safety
/// `codec` must be null or a live handle.
unsafe fn update(codec: *mut LppieCodec, change: impl FnOnce(&mut CodecConfig)) -> LppieStatus {
    guard(|| {
        let codec = codec.as_mut().ok_or_else(|| null("codec"))?;
        let mut next = codec.config;
        change(&mut next);
        next.validate().map_err(codec_error)?;
        codec.config = next;
        Ok(())
    })
}

/// # Safety
/// `codec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lppie_codec_set_block_size(codec: *mut LppieCodec, bytes: u32) -> LppieStatus {
    update(codec, |c| c.block_size = bytes)
}

/// # Safety
/// `codec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lppie_codec_set_chunk_digits(codec: *mut LppieCodec, digits: u32) -> LppieStatus {
    update(codec, |c| c.chunk_digits = digits)
}

/// Treat the whole input as a single block.
///
/// # Safety
/// `codec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lppie_codec_set_single_block(codec: *mut LppieCodec, enabled: bool) -> LppieStatus {
    update(codec, |c| c.single_block = enabled)
}

/// Worker threads for chunk transforms; output does not depend on it.
///
/// # Safety
/// `codec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lppie_codec_set_jobs(codec: *mut LppieCodec, jobs: usize) -> LppieStatus {
    update(codec, |c| c.jobs = jobs)
}

/// Initial guard digits of the encoder's working precision.
///
/// # Safety
/// `codec` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn lppie_codec_set_guard_digits(codec: *mut LppieCodec, digits: u32) -> LppieStatus {
    update(codec, |c| c.policy.initial_guard = digits)
}

/// Compresses `input` into a new container written to `out`.
/// A null `codec` means default settings.
///
/// # Safety
/// `input` must point to `input_len` bytes (or `input_len` is 0), `out` must
/// be writable, and `codec` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn lppie_compress(
    codec: *const LppieCodec,
    input: *const u8,
    input_len: usize,
    out: *mut LppieBuffer,
) -> LppieStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = LppieBuffer::EMPTY;
        let data = self::input(input, input_len, "input")?;
        let config = config_of(codec);
        config.validate().map_err(codec_error)?;
        let packed = lppie::compress_stream(data, &config).map_err(codec_error)?;
        *out = LppieBuffer::from_vec(packed);
        Ok(())
    })
}

/// Decodes a container and checks its SHA-256. Only the codec's job count
/// is used; a null `codec` means one thread.
///
/// # Safety
/// As for [`lppie_compress`].
#[no_mangle]
pub unsafe extern "C" fn lppie_decompress(
    codec: *const LppieCodec,
    container: *const u8,
    container_len: usize,
    out: *mut LppieBuffer,
) -> LppieStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = LppieBuffer::EMPTY;
        let data = input(container, container_len, "container")?;
        let jobs = config_of(codec).jobs;
        let restored = lppie::decompress_stream_with_jobs(data, jobs).map_err(codec_error)?;
        *out = LppieBuffer::from_vec(restored);
        Ok(())
    })
}

/// Compares the SHA-256 of `original` with the one stored in `container`.
/// Reads only the container header. The verdict goes to `matched`; a
/// mismatch is not an error status.
///
/// # Safety
/// Both inputs must point to their stated lengths; `matched` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lppie_verify(
    original: *const u8,
    original_len: usize,
    container: *const u8,
    container_len: usize,
    matched: *mut bool,
) -> LppieStatus {
    guard(|| {
        let matched = matched.as_mut().ok_or_else(|| null("matched"))?;
        let original = input(original, original_len, "original")?;
        let container = input(container, container_len, "container")?;
        *matched = lppie::verify_integrity(original, container)
            .map_err(codec_error)?
            .matched;
        Ok(())
    })
}

/// Releases a buffer returned by the library. Empty buffers are ignored.
///
/// # Safety
/// `buffer` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn lppie_buffer_free(buffer: LppieBuffer) {
    if !buffer.data.is_null() && buffer.len > 0 {
        drop(Box::from_raw(ptr::slice_from_raw_parts_mut(buffer.data, buffer.len)));
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn lppie_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lppie_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
