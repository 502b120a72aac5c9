//! Byte blocks to integers to decimal digit strings, and back.
//!
//! Every block is read as a base-256 big-endian number after a `0x01`
//! sentinel byte has been prepended, so leading zero bytes survive the trip
//! through an integer and the integer is never zero.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Byte prepended to every block before integer conversion.
pub const SENTINEL: u8 = 0x01;

/// Arbitrary-precision unsigned integer holding a block or chunk value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigNumber(BigUint);

impl BigNumber {
    pub fn new(value: BigUint) -> Self {
        BigNumber(value)
    }

    pub fn zero() -> Self {
        BigNumber(BigUint::zero())
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Number of decimal digits in the canonical expansion ("0" has one).
    pub fn digit_count(&self) -> usize {
        decimal_digit_count(&self.0)
    }
}

impl From<BigUint> for BigNumber {
    fn from(value: BigUint) -> Self {
        BigNumber(value)
    }
}

impl From<u64> for BigNumber {
    fn from(value: u64) -> Self {
        BigNumber(BigUint::from(value))
    }
}

impl fmt::Display for BigNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Non-empty sequence of ASCII decimal digits. Leading zeros are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitString(String);

impl DigitString {
    pub fn new(digits: impl Into<String>) -> Result<Self> {
        let digits = digits.into();
        if digits.is_empty() {
            return Err(Error::MalformedDigits("empty digit string".into()));
        }
        if let Some(bad) = digits.bytes().find(|b| !b.is_ascii_digit()) {
            return Err(Error::MalformedDigits(format!(
                "unexpected character {:?}",
                bad as char
            )));
        }
        Ok(DigitString(digits))
    }

    /// Caller guarantees the text is non-empty and all ASCII digits.
    pub(crate) fn from_trusted(digits: String) -> Self {
        debug_assert!(!digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit()));
        DigitString(digits)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn bytes_to_bignumber(block: &[u8]) -> Result<BigNumber> {
    if block.is_empty() {
        return Err(Error::EmptyBlock);
    }
    let mut framed = Vec::with_capacity(block.len() + 1);
    framed.push(SENTINEL);
    framed.extend_from_slice(block);
    Ok(BigNumber(BigUint::from_bytes_be(&framed)))
}

/// Inverse of [`bytes_to_bignumber`]; rejects values whose base-256 form is
/// not exactly the sentinel followed by `block_len` bytes.
pub fn bignumber_to_bytes(n: &BigNumber, block_len: usize) -> Result<Vec<u8>> {
    if n.is_zero() {
        return Err(Error::CorruptValue("block value is zero".into()));
    }
    let mut raw = n.0.to_bytes_be();
    if raw.len() != block_len + 1 {
        return Err(Error::CorruptValue(format!(
            "expected {} bytes after the sentinel, found {}",
            block_len,
            raw.len() - 1
        )));
    }
    if raw[0] != SENTINEL {
        return Err(Error::CorruptValue(format!(
            "leading byte {:#04x} is not the sentinel",
            raw[0]
        )));
    }
    raw.remove(0);
    Ok(raw)
}

pub fn bignumber_to_digits(n: &BigNumber) -> DigitString {
    DigitString(n.0.to_str_radix(10))
}

pub fn digits_to_bignumber(s: &DigitString) -> BigNumber {
    // Validated at construction, so parsing cannot fail.
    BigNumber(BigUint::parse_bytes(s.0.as_bytes(), 10).expect("digit string is validated"))
}

/// Parses raw text, rejecting anything but decimal digits.
pub fn parse_digits(s: &str) -> Result<BigNumber> {
    DigitString::new(s).map(|d| digits_to_bignumber(&d))
}

pub(crate) fn decimal_digit_count(n: &BigUint) -> usize {
    if n.is_zero() {
        return 1;
    }
    // bits * log10(2) lands within one of the true count; settle it exactly.
    let bits = n.bits();
    let estimate = ((bits - 1) as f64 * std::f64::consts::LOG10_2).floor() as u32 + 1;
    let mut digits = estimate.max(1);
    while digits > 1 && *n < num_traits::pow(BigUint::from(10u32), digits as usize - 1) {
        digits -= 1;
    }
    while *n >= num_traits::pow(BigUint::from(10u32), digits as usize) {
        digits += 1;
    }
    digits as usize
}

/// Inclusive window on the digit count of a sentinel-framed block of
/// `block_len` bytes. The framed value lies in `[2^(8n), 2^(8n+1))`; the
/// window is widened by one digit each way to absorb float error.
pub fn digit_count_window(block_len: usize) -> (usize, usize) {
    let bits = 8.0 * block_len as f64;
    let lo = (bits * std::f64::consts::LOG10_2).floor() as usize;
    let hi = ((bits + 1.0) * std::f64::consts::LOG10_2).floor() as usize + 2;
    (lo.max(1), hi)
}
