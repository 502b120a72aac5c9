#ifndef LPPIE_H
#define LPPIE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result of every call.
enum LppieStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  LPPIE_STATUS_OK = 0,
  // A required pointer was null.
  LPPIE_STATUS_NULL_POINTER = 1,
  // A codec setting is out of range.
  LPPIE_STATUS_INVALID_CONFIG = 2,
  // Not an LPPI container, or an unsupported version or flag.
  LPPIE_STATUS_UNSUPPORTED_FORMAT = 3,
  // Container structure is inconsistent or cut short.
  LPPIE_STATUS_MALFORMED_CONTAINER = 4,
  // A chunk record failed to decode.
  LPPIE_STATUS_CORRUPT_DATA = 5,
  // Decoded bytes do not hash to the stored SHA-256.
  LPPIE_STATUS_INTEGRITY_FAILURE = 6,
  // The encoder could not verify a chunk within its retry budget.
  LPPIE_STATUS_PRECISION_EXHAUSTED = 7,
  LPPIE_STATUS_IO = 8,
  LPPIE_STATUS_PANIC = 9,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum LppieStatus LppieStatus;
#else
typedef int32_t LppieStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

// Opaque codec settings.
typedef struct LppieCodec LppieCodec;

// Bytes allocated by the library. `data` is null when `len` is zero.
typedef struct LppieBuffer {
  uint8_t *data;
  size_t len;
} LppieBuffer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Allocates a codec with default settings: 4096-byte blocks, 64-digit
// chunks, one worker thread.
struct LppieCodec *lppie_codec_new(void);

// Releases a codec. Null is ignored.
//
// # Safety
// `codec` must be null or a handle from [`lppie_codec_new`] not yet freed.
void lppie_codec_free(struct LppieCodec *codec);

// # Safety
// `codec` must be a live handle.
LppieStatus lppie_codec_set_block_size(struct LppieCodec *codec, uint32_t bytes);

// # Safety
// `codec` must be a live handle.
LppieStatus lppie_codec_set_chunk_digits(struct LppieCodec *codec, uint32_t digits);

// Treat the whole input as a single block.
//
// # Safety
// `codec` must be a live handle.
LppieStatus lppie_codec_set_single_block(struct LppieCodec *codec, bool enabled);

// Worker threads for chunk transforms; output does not depend on it.
//
// # Safety
// `codec` must be a live handle.
LppieStatus lppie_codec_set_jobs(struct LppieCodec *codec, size_t jobs);

// Initial guard digits of the encoder's working precision.
//
// # Safety
// `codec` must be a live handle.
LppieStatus lppie_codec_set_guard_digits(struct LppieCodec *codec, uint32_t digits);

// Compresses `input` into a new container written to `out`.
// A null `codec` means default settings.
//
// # Safety
// `input` must point to `input_len` bytes (or `input_len` is 0), `out` must
// be writable, and `codec` must be null or a live handle.
LppieStatus lppie_compress(const struct LppieCodec *codec,
                           const uint8_t *input,
                           size_t input_len,
                           struct LppieBuffer *out);

// Decodes a container and checks its SHA-256. Only the codec's job count
// is used; a null `codec` means one thread.
//
// # Safety
// As for [`lppie_compress`].
LppieStatus lppie_decompress(const struct LppieCodec *codec,
                             const uint8_t *container,
                             size_t container_len,
                             struct LppieBuffer *out);

// Compares the SHA-256 of `original` with the one stored in `container`.
// Reads only the container header. The verdict goes to `matched`; a
// mismatch is not an error status.
//
// # Safety
// Both inputs must point to their stated lengths; `matched` must be writable.
LppieStatus lppie_verify(const uint8_t *original,
                         size_t original_len,
                         const uint8_t *container,
                         size_t container_len,
                         bool *matched);

// Releases a buffer returned by the library. Empty buffers are ignored.
//
// # Safety
// `buffer` must come from this library and not have been freed already.
void lppie_buffer_free(struct LppieBuffer buffer);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next library call on the same thread.
const char *lppie_last_error(void);

// Library version as a static NUL-terminated string.
const char *lppie_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPPIE_H */
