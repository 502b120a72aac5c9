//! Deterministic high-precision logarithms and powers of ten.
//!
//! Values are non-negative binary fixed-point numbers: an integer `raw`
//! together with a count of fractional bits, meaning `raw / 2^bits`. Every
//! routine is pure integer arithmetic with precisions that depend only on
//! the arguments, so a given input produces the same bits on every platform
//! and every call. Decoding relies on this: the encoder checks each record
//! with the very function the decoder will later run.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, ToPrimitive, Zero};

/// Fractional bits needed to carry `digits` decimal digits (rounded up,
/// 3.322 > log2(10)).
pub fn bits_for_digits(digits: usize) -> u32 {
    let bits = (digits as u64 * 3322).div_ceil(1000);
    u32::try_from(bits).expect("precision fits in u32")
}

pub fn pow10(n: usize) -> BigUint {
    num_traits::pow(BigUint::from(10u32), n)
}

/// `raw / 2^from` re-expressed with `to` fractional bits (truncating).
pub fn rescale(raw: &BigUint, from: u32, to: u32) -> BigUint {
    if to >= from {
        raw << (to - from)
    } else {
        raw >> (from - to)
    }
}

#[derive(Clone)]
struct Constants {
    ln2: BigUint,
    ln10: BigUint,
}

thread_local! {
    static CONSTANTS: RefCell<HashMap<u32, Constants>> = RefCell::new(HashMap::new());
}

/// Σ 1 / ((2i+1) · n^(2i+1)), i.e. atanh(1/n), with `bits` fractional bits.
fn atanh_recip(n: u32, bits: u32) -> BigUint {
    let n_sq = BigUint::from(n * n);
    let mut power = (BigUint::one() << bits) / n;
    let mut sum = BigUint::zero();
    let mut odd = 1u32;
    while !power.is_zero() {
        sum += &power / odd;
        power /= &n_sq;
        odd += 2;
    }
    sum
}

fn constants(bits: u32) -> Constants {
    // Computed at a bucketed precision and truncated, so the bits returned
    // for a given request never depend on what else was requested earlier.
    let bucket = (bits + 64).div_ceil(256) * 256;
    let full = CONSTANTS.with(|cache| {
        cache
            .borrow_mut()
            .entry(bucket)
            .or_insert_with(|| {
                let ln2 = atanh_recip(3, bucket) << 1u32;
                let ln_five_quarters = atanh_recip(9, bucket) << 1u32;
                let ln10 = &ln2 * 3u32 + ln_five_quarters;
                Constants { ln2, ln10 }
            })
            .clone()
    });
    Constants {
        ln2: full.ln2 >> (bucket - bits),
        ln10: full.ln10 >> (bucket - bits),
    }
}

pub fn ln10(bits: u32) -> BigUint {
    constants(bits).ln10
}

pub fn ln2(bits: u32) -> BigUint {
    constants(bits).ln2
}

/// Natural logarithm of `raw / 2^in_bits`, which must be at least 1.
pub fn ln(raw: &BigUint, in_bits: u32, out_bits: u32) -> BigUint {
    assert!(raw.bits() > in_bits as u64, "ln argument must be >= 1");
    let exponent = raw.bits() - 1 - in_bits as u64;
    let halvings = out_bits.sqrt() / 2;
    let guard = 32 + 2 * halvings + (64 - exponent.leading_zeros());
    let q = out_bits + guard;

    // v = 2^exponent * m with m in [1, 2)
    let shift = q as i64 - in_bits as i64 - exponent as i64;
    let mut m = if shift >= 0 {
        raw << shift as u64
    } else {
        raw >> (-shift) as u64
    };
    for _ in 0..halvings {
        m = (m << q).sqrt();
    }

    // ln m = 2 atanh((m - 1) / (m + 1))
    let one = BigUint::one() << q;
    let t = ((&m - &one) << q) / (&m + &one);
    let t_sq = (&t * &t) >> q;
    let mut power = t;
    let mut series = BigUint::zero();
    let mut odd = 1u32;
    while !power.is_zero() {
        series += &power / odd;
        power = (power * &t_sq) >> q;
        odd += 2;
    }
    let ln_m = series << (halvings + 1);
    let total = ln2(q) * exponent + ln_m;
    total >> guard
}

/// Base-10 logarithm of `raw / 2^in_bits` (at least 1).
pub fn log10(raw: &BigUint, in_bits: u32, out_bits: u32) -> BigUint {
    let q = out_bits + 16;
    let ln_v = ln(raw, in_bits, q);
    ((ln_v << q) / ln10(q)) >> 16u32
}

/// e^y for `y = raw / 2^bits`, returned with `bits` fractional bits.
pub fn exp(raw: &BigUint, bits: u32) -> BigUint {
    let integer_bits = raw.bits().saturating_sub(bits as u64) as u32;
    let squarings = bits.sqrt() / 2 + 2 + integer_bits;
    let guard = 16 + 2 * squarings;
    let q = bits + guard;
    // y / 2^squarings, exact because guard > squarings
    let y = raw << (guard - squarings);

    let one = BigUint::one() << q;
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u32;
    loop {
        term = ((term * &y) >> q) / k;
        if term.is_zero() {
            break;
        }
        sum += &term;
        k += 1;
    }
    for _ in 0..squarings {
        sum = (&sum * &sum) >> q;
    }
    sum >> guard
}

/// 10^x for `x = raw / 2^in_bits`, with `out_bits` fractional bits.
///
/// The integer part of `x` scales the cost linearly; callers bound it.
pub fn exp10(raw: &BigUint, in_bits: u32, out_bits: u32) -> BigUint {
    let whole = (raw >> in_bits)
        .to_usize()
        .expect("integer part of exponent is bounded by the caller");
    let frac = raw - (BigUint::from(whole) << in_bits);
    let q = out_bits + bits_for_digits(whole) + 32;
    let frac_q = rescale(&frac, in_bits, q);
    let y = (frac_q * ln10(q + 8)) >> (q + 8);
    let mantissa = exp(&y, q);
    (mantissa * pow10(whole)) >> (q - out_bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_f64(raw: &BigUint, bits: u32) -> f64 {
        // Enough for sanity checks against the platform libm.
        let shift = raw.bits().saturating_sub(60) as u32;
        let top = (raw >> shift).to_f64().unwrap();
        top * 2f64.powi(shift as i32 - bits as i32)
    }

    fn fixed(value: f64, bits: u32) -> BigUint {
        BigUint::from((value * 2f64.powi(40)) as u64) << (bits - 40)
    }

    // Digits of ln 2 and ln 10 from published tables.
    const LN2_DIGITS: &str = "0.69314718055994530941723212145817656807550013436025525412068000949339362196969471560586332699641868754200148102057068573368552023575813055703267075163507596193072757082837143519030703862389167347112335";
    const LN10_DIGITS: &str = "2.30258509299404568401799145468436420760110148862877297603332790096757260967735248023599720508959829834196778404228624863340952546508280675666628736909878168948290720832555468084379989482623319852839350";

    fn decimal_prefix(raw: &BigUint, bits: u32, places: usize) -> String {
        let scaled = (raw * pow10(places)) >> bits;
        let s = scaled.to_str_radix(10);
        let (int, frac) = s.split_at(s.len() - places);
        format!("{}.{}", if int.is_empty() { "0" } else { int }, frac)
    }

    #[test]
    fn constants_match_published_digits() {
        let bits = 700;
        let got = decimal_prefix(&ln2(bits), bits, 200);
        assert_eq!(&got[..200], &LN2_DIGITS[..200]);
        let got = decimal_prefix(&ln10(bits), bits, 200);
        assert_eq!(&got[..200], &LN10_DIGITS[..200]);
    }

    #[test]
    fn constants_are_independent_of_call_order() {
        let a = ln10(333);
        let _ = ln10(2000);
        let _ = ln10(100);
        assert_eq!(a, ln10(333));
    }

    #[test]
    fn ln_of_ten_matches_constant() {
        let bits = 400;
        let ten = BigUint::from(10u32);
        let got = ln(&ten, 0, bits);
        let diff = if got > ln10(bits) {
            &got - ln10(bits)
        } else {
            ln10(bits) - &got
        };
        assert!(diff < BigUint::from(4u32), "diff {diff}");
    }

    #[test]
    fn log10_of_powers_is_near_exact() {
        let bits = 300;
        for m in 1..=40usize {
            let got = log10(&pow10(m), 0, bits);
            let want = BigUint::from(m) << bits;
            let diff = if got > want { &got - &want } else { &want - &got };
            assert!(diff < BigUint::from(16u32), "m={m} diff={diff}");
        }
    }

    #[test]
    fn exp10_of_integers_is_exact() {
        for n in 0..30usize {
            let x = BigUint::from(n) << 200u32;
            assert_eq!(exp10(&x, 200, 10), pow10(n) << 10u32);
        }
    }

    #[test]
    fn agrees_with_libm() {
        let bits = 120;
        for &v in &[1.0, 1.5, 2.0, 7.25, 9.999, 12.5, 1234.5678, 987654.25] {
            let got = to_f64(&ln(&fixed(v, bits), bits, bits), bits);
            assert!((got - f64::ln(v)).abs() < 1e-12, "ln {v}: {got}");
            let got = to_f64(&log10(&fixed(v, bits), bits, bits), bits);
            assert!((got - v.log10()).abs() < 1e-12, "log10 {v}: {got}");
        }
        for &v in &[0.0, 0.001, 0.5, 1.0, 2.25, 3.5] {
            let got = to_f64(&exp(&fixed(v, bits), bits), bits);
            assert!((got - v.exp()).abs() < 1e-12 * v.exp(), "exp {v}: {got}");
        }
        for &v in &[0.0, 0.3, 1.0, 2.5, 8.0915149, 9.99] {
            let got = to_f64(&exp10(&fixed(v, bits), bits, bits), bits);
            let want = 10f64.powf(v);
            assert!((got - want).abs() < 1e-11 * want, "exp10 {v}: {got} vs {want}");
        }
    }

    #[test]
    fn log_then_exp_round_trips_at_high_precision() {
        let bits = 1200;
        let x = BigUint::parse_bytes(b"31415926535897932384626433832795028841971693993751", 10).unwrap();
        let lg = log10(&x, 0, bits);
        let back = exp10(&lg, bits, 8);
        let nearest = (&back + 128u32) >> 8u32;
        assert_eq!(nearest, x);
    }
}
