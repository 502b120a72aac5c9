//! Iterated base-10 logarithm of a chunk value, and its exact inverse.
//!
//! A chunk value `x0 >= 10` is replaced by `log10(x0)` until the result
//! drops below 10. The record keeps the loop count `r`, the final value `d`
//! as a decimal mantissa (implied point after the first digit) and the
//! chunk's digit length. Decoding raises 10 to the mantissa `r` times and
//! rounds to the nearest integer.
//!
//! The encoder only emits a mantissa after [`iterlog_invert`] has turned it
//! back into `x0`. Inversion is pure integer arithmetic whose precision is a
//! function of the record alone, so the decoder repeats the check exactly.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::precise::{bits_for_digits, exp10, log10, pow10};
use crate::radix::{decimal_digit_count, BigNumber, DigitString};

/// Extra decimal digits carried by the decoder beyond the mantissa length.
pub const DECODE_GUARD_DIGITS: usize = 8;

/// Inversion refuses to produce a value with this many more digits than the
/// decoder's working precision.
const MAX_MAGNITUDE_EXCESS: usize = 8;

/// Fractional bits kept on the final power before rounding.
const ROUNDING_BITS: u32 = 8;

/// Controls the encoder's working precision and its retry schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrecisionPolicy {
    /// Digits of precision added on top of the chunk's digit length.
    pub initial_guard: u32,
    /// Digits added on every retry.
    pub growth: u32,
    pub max_retries: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_guard: 8,
            growth: 16,
            max_retries: 8,
        }
    }
}

impl PrecisionPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.initial_guard == 0 || self.growth == 0 || self.max_retries == 0 {
            return Err(Error::InvalidConfig(
                "precision guard, growth and retries must all be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One compressed chunk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IterLogRecord {
    pub r: u8,
    /// Digits of `d`; the decimal point sits after the first one.
    pub mantissa: DigitString,
    pub digit_len: usize,
}

impl IterLogRecord {
    pub fn mantissa_len(&self) -> usize {
        self.mantissa.len()
    }

    fn check_shape(&self) -> Result<()> {
        if self.digit_len == 0 {
            return Err(Error::CorruptValue("digit length is zero".into()));
        }
        let first = self.mantissa.as_str().as_bytes()[0];
        if self.r == 0 {
            if self.mantissa_len() != 1 {
                return Err(Error::CorruptValue(format!(
                    "r = 0 record carries {} mantissa digits",
                    self.mantissa_len()
                )));
            }
        } else if first == b'0' {
            return Err(Error::CorruptValue(
                "mantissa of an iterated record starts with 0".into(),
            ));
        }
        Ok(())
    }
}

/// Closed form of the stopping rule: how many logarithms bring `x0` below 10.
pub fn classify_r(x0: &BigNumber) -> u8 {
    let n = x0.as_biguint();
    if *n < BigUint::from(10u32) {
        return 0;
    }
    if *n < BigUint::from(10_000_000_000u64) {
        return 1;
    }
    // x0 < 10^(10^10) holds for anything that fits in memory: the digit
    // count would need to exceed 10^10.
    if decimal_digit_count(n) <= 10_000_000_000 {
        2
    } else {
        3
    }
}

/// Forward transform with self-verification and mantissa trimming.
pub fn iterlog_forward(x0: &BigNumber, digit_len: usize, policy: &PrecisionPolicy) -> Result<IterLogRecord> {
    policy.validate()?;
    let value_digits = x0.digit_count();
    if digit_len == 0 || value_digits > digit_len {
        return Err(Error::ChunkOverflow { digit_len });
    }
    let r = classify_r(x0);
    if r == 0 {
        return Ok(IterLogRecord {
            r,
            mantissa: DigitString::from_trusted(x0.to_string()),
            digit_len,
        });
    }

    for attempt in 0..=policy.max_retries {
        let working = digit_len + policy.initial_guard as usize + attempt as usize * policy.growth as usize;
        let full = full_mantissa(x0.as_biguint(), r, working);
        let candidate = |len: usize| -> Option<IterLogRecord> {
            let digits = round_to_len(&full, working, len)?;
            let rec = IterLogRecord {
                r,
                mantissa: DigitString::from_trusted(digits.to_str_radix(10)),
                digit_len,
            };
            matches!(iterlog_invert(&rec), Ok(ref v) if v == x0).then_some(rec)
        };
        let Some(verified) = candidate(working) else {
            continue;
        };
        let estimate = value_digits + 1 + if r >= 2 { value_digits.to_string().len() } else { 0 };
        let shortest = shortest_verified(working, estimate, verified, candidate);
        if let Some(rec) = canonical_record(x0, r, digit_len, &shortest, working) {
            return Ok(rec);
        }
    }
    Err(Error::PrecisionExhausted {
        attempts: policy.max_retries + 1,
    })
}

/// The `len`-digit mantissa the decoder will demand for `x0`: `d` carried to
/// `len + DECODE_GUARD_DIGITS` digits, then rounded half-up to `len`.
fn canonical_digits(x0: &BigUint, r: u8, len: usize) -> Option<String> {
    let working = len + DECODE_GUARD_DIGITS;
    let full = full_mantissa(x0, r, working);
    round_to_len(&full, working, len).map(|d| d.to_str_radix(10))
}

/// Replaces the searched mantissa by the canonical one of the same length,
/// moving to longer lengths if the canonical string fails to verify.
fn canonical_record(
    x0: &BigNumber,
    r: u8,
    digit_len: usize,
    searched: &IterLogRecord,
    working: usize,
) -> Option<IterLogRecord> {
    let start = searched.mantissa_len();
    let stop = working.min(start + DECODE_GUARD_DIGITS);
    (start..=stop).find_map(|len| {
        let digits = canonical_digits(x0.as_biguint(), r, len)?;
        if len == start && digits == searched.mantissa.as_str() {
            return Some(searched.clone());
        }
        let rec = IterLogRecord {
            r,
            mantissa: DigitString::from_trusted(digits),
            digit_len,
        };
        matches!(iterlog_invert(&rec), Ok(ref v) if v == x0).then_some(rec)
    })
}

/// Digits of `d` rounded to `working` significant digits, as an integer in
/// `[10^(working-1), 10^working)`.
fn full_mantissa(x0: &BigUint, r: u8, working: usize) -> BigUint {
    let bits = bits_for_digits(working + DECODE_GUARD_DIGITS) + 16;
    let one = BigUint::one() << bits;
    let ten = BigUint::from(10u32) << bits;

    let mut value = log10(x0, 0, bits);
    for step in 1..=r {
        if step < r {
            // The exact chain stays >= 10 here; keep rounding from crossing.
            if value < ten {
                value = ten.clone();
            }
            value = log10(&value, bits, bits);
        } else {
            // Final value is in [1, 10) exactly.
            if value < one {
                value = one.clone();
            }
            if value >= ten {
                value = &ten - 1u32;
            }
        }
    }

    let scale = pow10(working - 1);
    let half = BigUint::one() << (bits - 1);
    let digits = (value * scale + half) >> bits;
    let limit = pow10(working);
    if digits >= limit {
        limit - 1u32
    } else {
        digits
    }
}

/// `full` (with `working` digits) rounded half-up to `len` digits, or `None`
/// when the carry would spill into a second integer digit.
fn round_to_len(full: &BigUint, working: usize, len: usize) -> Option<BigUint> {
    if len >= working {
        return Some(full.clone());
    }
    let divisor = pow10(working - len);
    let rounded = (full + (&divisor >> 1u32)) / divisor;
    (rounded < pow10(len)).then_some(rounded)
}

/// Smallest verified length found by a search seeded at `estimate`.
///
/// `best` must already be verified at length `hi`. Verification is not
/// guaranteed to be monotone in the length, so this returns the shortest
/// length that was actually tested and passed.
fn shortest_verified<F>(hi: usize, estimate: usize, mut best: IterLogRecord, mut check: F) -> IterLogRecord
where
    F: FnMut(usize) -> Option<IterLogRecord>,
{
    let mut lo = 1;
    let mut hi = hi;
    let mut first_passed = None;
    while lo < hi {
        let mid = match first_passed {
            None => estimate.clamp(lo, hi - 1),
            Some(false) => (estimate + 2).clamp(lo, hi - 1),
            Some(true) => estimate.saturating_sub(2).clamp(lo, hi - 1),
        };
        let passed = match check(mid) {
            Some(rec) => {
                hi = mid;
                best = rec;
                true
            }
            None => {
                lo = mid + 1;
                false
            }
        };
        if first_passed.is_none() {
            first_passed = Some(passed);
        } else {
            // plain bisection from here on
            return bisect(lo, hi, best, check);
        }
    }
    best
}

fn bisect<F>(mut lo: usize, mut hi: usize, mut best: IterLogRecord, mut check: F) -> IterLogRecord
where
    F: FnMut(usize) -> Option<IterLogRecord>,
{
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match check(mid) {
            Some(rec) => {
                hi = mid;
                best = rec;
            }
            None => lo = mid + 1,
        }
    }
    best
}

/// Inverts a record and rejects it unless its mantissa is the canonical one
/// the encoder writes for the recovered value.
///
/// [`iterlog_invert`] accepts any mantissa that lands within a quarter of an
/// integer, so a damaged low-order digit can still reproduce the value. This
/// check turns such damage into an error.
pub fn iterlog_decode(rec: &IterLogRecord) -> Result<BigNumber> {
    let x0 = iterlog_invert(rec)?;
    if rec.r == 0 {
        return Ok(x0);
    }
    match canonical_digits(x0.as_biguint(), rec.r, rec.mantissa_len()) {
        Some(ref c) if c == rec.mantissa.as_str() => Ok(x0),
        _ => Err(Error::CorruptValue("mantissa is not in canonical form".into())),
    }
}

/// Rebuilds the chunk value from a record.
pub fn iterlog_invert(rec: &IterLogRecord) -> Result<BigNumber> {
    rec.check_shape()?;
    let digits = rec.mantissa.as_str();
    if rec.r == 0 {
        // single digit, always fits
        return Ok(BigNumber::from(u64::from(digits.as_bytes()[0] - b'0')));
    }

    let m = rec.mantissa_len();
    let working = m + DECODE_GUARD_DIGITS;
    let bits = bits_for_digits(working) + 16;
    let mantissa = BigUint::parse_bytes(digits.as_bytes(), 10).expect("validated digits");
    let mut value = (mantissa << bits) / pow10(m - 1);

    for step in 0..rec.r {
        let whole = (&value >> bits).to_usize().unwrap_or(usize::MAX);
        if whole >= rec.digit_len {
            return Err(Error::ChunkOverflow {
                digit_len: rec.digit_len,
            });
        }
        if whole + 1 > working + MAX_MAGNITUDE_EXCESS {
            return Err(Error::AmbiguousInverse(format!(
                "a {m}-digit mantissa cannot determine a {}-digit value",
                whole + 1
            )));
        }
        if step + 1 < rec.r {
            value = exp10(&value, bits, bits);
        } else {
            value = exp10(&value, bits, ROUNDING_BITS);
        }
    }

    let half = BigUint::one() << (ROUNDING_BITS - 1);
    let nearest = (&value + &half) >> ROUNDING_BITS;
    let snapped = &nearest << ROUNDING_BITS;
    let distance = if snapped > value {
        snapped - &value
    } else {
        &value - snapped
    };
    let quarter = BigUint::one() << (ROUNDING_BITS - 2);
    if distance > quarter {
        return Err(Error::AmbiguousInverse(
            "final power is more than 0.25 from an integer".into(),
        ));
    }
    if nearest.is_zero() || decimal_digit_count(&nearest) > rec.digit_len {
        return Err(Error::ChunkOverflow {
            digit_len: rec.digit_len,
        });
    }
    Ok(BigNumber::new(nearest))
}
