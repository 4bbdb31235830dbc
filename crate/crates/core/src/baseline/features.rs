use std::collections::HashMap;
use std::hash::Hasher;

use fnv::FnvHasher;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Inclusive character n-gram lengths.
    pub char_ngram_range: (usize, usize),
    pub include_word_unigrams: bool,
    pub hash_dim: usize,
    pub hash_seed: u64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            char_ngram_range: (2, 5),
            include_word_unigrams: true,
            hash_dim: 1 << 18,
            hash_seed: 0x5eed,
        }
    }
}

impl FeatureConfig {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.char_ngram_range;
        if !(1 <= lo && lo <= hi && hi <= 8) {
            return Err(Error::Config(format!(
                "char_ngram_range ({lo}, {hi}) must satisfy 1 <= lo <= hi <= 8"
            )));
        }
        if !self.hash_dim.is_power_of_two() || self.hash_dim < 1 << 10 {
            return Err(Error::Config(format!(
                "hash_dim {} must be a power of two >= 1024",
                self.hash_dim
            )));
        }
        Ok(())
    }
}

/// Sparse vector sorted by index, without explicit zeros.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector(pub Vec<(u32, f64)>);

impl SparseVector {
    pub fn from_map(map: HashMap<u32, f64>) -> Self {
        let mut entries: Vec<_> = map.into_iter().filter(|&(_, v)| v != 0.0).collect();
        entries.sort_unstable_by_key(|&(i, _)| i);
        Self(entries)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.0.iter().map(|&(i, v)| (i as usize, v))
    }
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer: FNV's low bits are weak on short keys
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn hash_feature(seed: u64, tag: u8, bytes: &[u8]) -> u64 {
    let mut h = FnvHasher::with_key(0xcbf2_9ce4_8422_2325 ^ seed);
    h.write_u8(tag);
    h.write(bytes);
    mix(h.finish())
}

/// Keeps at most `max_chars` characters.
pub fn truncate_chars(text: &str, max_chars: usize) -> &str {
    match text.char_indices().nth(max_chars) {
        Some((at, _)) => &text[..at],
        None => text,
    }
}

/// Hashed counts of character n-grams and (optionally) whitespace tokens.
/// Each feature lands in `[0, hash_dim)` with a sign taken from the top hash
/// bit, so collisions cancel in expectation.
pub fn featurize(text: &str, cfg: &FeatureConfig) -> SparseVector {
    let mask = (cfg.hash_dim - 1) as u64;
    let mut acc: HashMap<u32, f64> = HashMap::new();
    let mut add = |h: u64| {
        let sign = if h >> 63 == 1 { -1.0 } else { 1.0 };
        *acc.entry((h & mask) as u32).or_insert(0.0) += sign;
    };

    let bounds: Vec<usize> = text
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(text.len()))
        .collect();
    let n_chars = bounds.len() - 1;
    let (lo, hi) = cfg.char_ngram_range;
    for n in lo..=hi {
        if n > n_chars {
            break;
        }
        for start in 0..=n_chars - n {
            let gram = &text[bounds[start]..bounds[start + n]];
            add(hash_feature(cfg.hash_seed, n as u8, gram.as_bytes()));
        }
    }
    if cfg.include_word_unigrams {
        for word in text.split_whitespace() {
            add(hash_feature(cfg.hash_seed, b'w', word.as_bytes()));
        }
    }
    SparseVector::from_map(acc)
}
