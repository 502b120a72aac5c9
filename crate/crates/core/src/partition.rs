//! Fixed-width splitting of a digit string into chunks.
//!
//! Every chunk keeps its digit length so a chunk such as `"007"` can be
//! restored from the integer 7.

use crate::error::{Error, Result};
use crate::radix::{BigNumber, DigitString};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chunk {
    /// Decimal text of the chunk. On the decode side this may be shorter
    /// than `digit_len`; [`reassemble`] pads it back.
    pub digits: String,
    pub digit_len: usize,
}

impl Chunk {
    /// A chunk rebuilt from a decoded value and its recorded width.
    pub fn from_value(value: &BigNumber, digit_len: usize) -> Self {
        Chunk {
            digits: value.to_string(),
            digit_len,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkPlan {
    pub chunks: Vec<Chunk>,
    pub chunk_digits: usize,
}

impl ChunkPlan {
    pub fn total_digits(&self) -> usize {
        self.chunks.iter().map(|c| c.digit_len).sum()
    }
}

/// Greedy left-to-right split into chunks of `k` digits; the last one may be
/// shorter.
pub fn partition(s: &DigitString, k: usize) -> Result<ChunkPlan> {
    if k == 0 {
        return Err(Error::InvalidChunkSize);
    }
    let chunks = s
        .as_str()
        .as_bytes()
        .chunks(k)
        .map(|piece| Chunk {
            // ASCII digits, so every split point is a char boundary.
            digits: String::from_utf8(piece.to_vec()).expect("ascii digits"),
            digit_len: piece.len(),
        })
        .collect();
    Ok(ChunkPlan {
        chunks,
        chunk_digits: k,
    })
}

pub fn reassemble(plan: &ChunkPlan) -> Result<DigitString> {
    let mut out = String::with_capacity(plan.total_digits());
    for chunk in &plan.chunks {
        let text = chunk.digits.as_str();
        if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::MalformedDigits(format!("chunk text {text:?}")));
        }
        if text.len() > chunk.digit_len {
            return Err(Error::ChunkOverflow {
                digit_len: chunk.digit_len,
            });
        }
        out.extend(std::iter::repeat_n('0', chunk.digit_len - text.len()));
        out.push_str(text);
    }
    if out.is_empty() {
        return Err(Error::MalformedDigits("plan has no digits".into()));
    }
    Ok(DigitString::from_trusted(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(s: &str) -> DigitString {
        DigitString::new(s).unwrap()
    }

    fn pairs(plan: &ChunkPlan) -> Vec<(&str, usize)> {
        plan.chunks.iter().map(|c| (c.digits.as_str(), c.digit_len)).collect()
    }

    #[test]
    fn greedy_split() {
        let plan = partition(&ds("65791"), 2).unwrap();
        assert_eq!(pairs(&plan), [("65", 2), ("79", 2), ("1", 1)]);
        let plan = partition(&ds("007123"), 3).unwrap();
        assert_eq!(pairs(&plan), [("007", 3), ("123", 3)]);
        let plan = partition(&ds("9"), 100).unwrap();
        assert_eq!(pairs(&plan), [("9", 1)]);
    }

    #[test]
    fn zero_chunk_size() {
        assert!(matches!(partition(&ds("1"), 0), Err(Error::InvalidChunkSize)));
    }

    #[test]
    fn reassemble_pads_values() {
        let plan = ChunkPlan {
            chunks: vec![
                Chunk::from_value(&BigNumber::from(7), 3),
                Chunk::from_value(&BigNumber::from(123), 3),
            ],
            chunk_digits: 3,
        };
        assert_eq!(reassemble(&plan).unwrap().as_str(), "007123");

        let plan = partition(&ds("007123"), 3).unwrap();
        assert_eq!(reassemble(&plan).unwrap().as_str(), "007123");
        let plan = partition(&ds("9"), 1).unwrap();
        assert_eq!(reassemble(&plan).unwrap().as_str(), "9");
    }

    #[test]
    fn oversize_chunk_overflows() {
        let plan = ChunkPlan {
            chunks: vec![Chunk::from_value(&BigNumber::from(1234), 3)],
            chunk_digits: 3,
        };
        assert!(matches!(reassemble(&plan), Err(Error::ChunkOverflow { digit_len: 3 })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn split_then_join_is_identity(s in "[0-9]{1,10000}", frac in 0.0f64..=1.0) {
            let k = 1 + ((s.len() as f64) * frac) as usize; // 1..=len+1
            let digits = ds(&s);
            let plan = partition(&digits, k).unwrap();
            prop_assert_eq!(plan.chunks.len(), s.len().div_ceil(k));
            prop_assert_eq!(plan.total_digits(), s.len());
            let (last, full) = plan.chunks.split_last().unwrap();
            prop_assert!(full.iter().all(|c| c.digit_len == k));
            prop_assert!(last.digit_len >= 1 && last.digit_len <= k);
            prop_assert_eq!(reassemble(&plan).unwrap(), digits);
        }
    }
}
