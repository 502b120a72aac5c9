//! Deterministic synthetic corpora for desk-scale runs and tests.

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    Random,
    Zeros,
    Text,
    /// Inputs aimed at edge cases of the codec rather than typical data.
    Adversarial(Pattern),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    AllOnes,
    Repeated,
    Alternating,
    SentinelRun,
    LeadingZeros,
    SingleByte,
}

impl Pattern {
    pub const ALL: [Pattern; 6] = [
        Pattern::AllOnes,
        Pattern::Repeated,
        Pattern::Alternating,
        Pattern::SentinelRun,
        Pattern::LeadingZeros,
        Pattern::SingleByte,
    ];
}

impl CorpusKind {
    pub fn name(self) -> &'static str {
        match self {
            CorpusKind::Random => "random",
            CorpusKind::Zeros => "zeros",
            CorpusKind::Text => "text",
            CorpusKind::Adversarial(Pattern::AllOnes) => "all-ff",
            CorpusKind::Adversarial(Pattern::Repeated) => "repeated",
            CorpusKind::Adversarial(Pattern::Alternating) => "alternating",
            CorpusKind::Adversarial(Pattern::SentinelRun) => "sentinel-run",
            CorpusKind::Adversarial(Pattern::LeadingZeros) => "leading-zeros",
            CorpusKind::Adversarial(Pattern::SingleByte) => "single-byte",
        }
    }
}

const WORDS: &[&str] = &[
    "the", "of", "and", "a", "to", "in", "is", "was", "that", "for", "it", "with", "as", "on", "be", "at", "by",
    "this", "had", "not", "are", "but", "from", "or", "have", "an", "they", "which", "one", "you", "were", "all", "we",
    "her", "she", "there", "would", "their", "will", "when", "who", "him", "been", "has", "more", "if", "no", "out",
    "so", "said", "what", "up", "its", "about", "than", "into", "them", "can", "only", "other", "time", "new", "some",
    "could", "these", "two", "may", "first", "then", "do", "any", "like", "my", "now", "over", "such", "our", "man",
    "me", "even", "most", "made", "after", "also", "did", "many", "off", "before", "must", "well", "back", "through",
    "years", "much", "where", "your", "way", "down", "should", "because", "long", "each", "just", "state", "people",
    "those", "too", "how", "little", "good", "world", "very", "year", "still", "own", "see", "men", "work", "house",
    "file", "storage", "number", "data", "river", "morning", "light", "water",
];

/// Word-level first-order Markov text: each word picks its successor from a
/// small window of the vocabulary keyed on the current word.
fn markov_text(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len + 16);
    let mut current = rng.gen_range(0..WORDS.len());
    let mut sentence_start = true;
    while out.len() < len {
        let word = WORDS[current];
        if sentence_start {
            let mut chars = word.chars();
            if let Some(first) = chars.next() {
                out.extend(first.to_uppercase().to_string().bytes());
                out.extend(chars.as_str().bytes());
            }
            sentence_start = false;
        } else {
            out.extend_from_slice(word.as_bytes());
        }
        match rng.gen_range(0..20) {
            0 => {
                out.extend_from_slice(b". ");
                sentence_start = true;
            }
            1 => out.extend_from_slice(b", "),
            2 => {
                out.extend_from_slice(b".\n");
                sentence_start = true;
            }
            _ => out.push(b' '),
        }
        let step = 1 + (current * 7 + rng.gen_range(0..12)) % 23;
        current = (current + step) % WORDS.len();
    }
    out.truncate(len);
    out
}

pub fn generate(kind: CorpusKind, size: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        CorpusKind::Random => {
            let mut out = vec![0u8; size];
            rng.fill(out.as_mut_slice());
            out
        }
        CorpusKind::Zeros => vec![0u8; size],
        CorpusKind::Text => markov_text(&mut rng, size),
        CorpusKind::Adversarial(pattern) => match pattern {
            Pattern::AllOnes => vec![0xFF; size],
            Pattern::Repeated => {
                let motif: Vec<u8> = (0..rng.gen_range(1..=7)).map(|_| rng.gen()).collect();
                motif.iter().copied().cycle().take(size).collect()
            }
            Pattern::Alternating => (0..size).map(|i| if i % 2 == 0 { 0x00 } else { 0xFF }).collect(),
            Pattern::SentinelRun => vec![0x01; size],
            Pattern::LeadingZeros => {
                // mostly zeros with sparse noise, so decimal chunks start with 0s
                (0..size)
                    .map(|_| if rng.gen_ratio(1, 64) { rng.gen() } else { 0 })
                    .collect()
            }
            Pattern::SingleByte => vec![rng.gen(); size.min(1)],
        },
    }
}

/// One file of a generated corpus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub kind: CorpusKind,
    pub size: usize,
    pub seed: u64,
}

/// Plans `count` files with sizes spread log-uniformly up to `max_size`.
/// The first files pin the extremes: empty, one byte and `max_size`.
pub fn plan(count: usize, max_size: usize, seed: u64) -> Vec<CorpusEntry> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kinds = vec![CorpusKind::Random, CorpusKind::Zeros, CorpusKind::Text];
    kinds.extend(Pattern::ALL.iter().map(|&p| CorpusKind::Adversarial(p)));

    (0..count)
        .map(|i| {
            let kind = kinds[i % kinds.len()];
            let size = match i {
                0 => 0,
                1 => 1.min(max_size),
                2 => max_size,
                _ if kind == CorpusKind::Adversarial(Pattern::SingleByte) => 1.min(max_size),
                _ => {
                    let top = (max_size.max(1) as f64).ln();
                    (rng.gen_range(0.0..=top).exp() as usize).min(max_size)
                }
            };
            CorpusEntry {
                name: format!("{i:04}-{}.bin", kind.name()),
                kind,
                size,
                seed: seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64),
            }
        })
        .collect()
}

/// Writes a planned corpus into `dir` and returns the paths.
pub fn write_corpus(dir: &Path, count: usize, max_size: usize, seed: u64) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    plan(count, max_size, seed)
        .into_iter()
        .map(|entry| {
            let path = dir.join(&entry.name);
            fs::write(&path, generate(entry.kind, entry.size, entry.seed))?;
            Ok(path)
        })
        .collect()
}
