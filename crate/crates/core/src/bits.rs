//! Packed bit vectors indexed by qubit.
//!
//! Bit `q` lives in word `q / 64` at position `q % 64`. Ordering and the
//! integer view treat qubit `q` as the coefficient of `2^q`, so comparisons
//! run from the most significant word down.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Words = SmallVec<[u64; 1]>;

const WORD: usize = 64;

pub(crate) fn word_count(n_qubits: usize) -> usize {
    n_qubits.div_ceil(WORD)
}

/// A length-`n` bit vector over qubits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    len: usize,
    words: Words,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: SmallVec::from_elem(0, word_count(len)),
        }
    }

    /// Builds from packed words; bits beyond `len` must be clear.
    pub fn from_words(len: usize, words: &[u64]) -> Result<Self> {
        if words.len() != word_count(len) {
            return Err(Error::DimensionMismatch {
                expected: word_count(len),
                found: words.len(),
            });
        }
        let out = Self {
            len,
            words: SmallVec::from_slice(words),
        };
        if out.words.last().is_some_and(|&w| w & !out.top_mask() != 0) {
            return Err(Error::Config(format!("bits set beyond length {len}")));
        }
        Ok(out)
    }

    /// Builds from the low `len` bits of `value` (qubit `q` = bit `q`).
    pub fn from_u64(len: usize, value: u64) -> Self {
        let mut out = Self::zeros(len);
        if let Some(first) = out.words.first_mut() {
            *first = value;
        }
        if len < WORD {
            if let Some(first) = out.words.first_mut() {
                *first &= (1u64 << len) - 1;
            }
        }
        out
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut out = Self::zeros(len);
        for q in indices {
            out.set(q, true);
        }
        out
    }

    fn top_mask(&self) -> u64 {
        match self.len % WORD {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, q: usize) -> bool {
        debug_assert!(q < self.len);
        (self.words[q / WORD] >> (q % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, q: usize, value: bool) {
        assert!(q < self.len, "bit {q} out of range for length {}", self.len);
        let mask = 1u64 << (q % WORD);
        if value {
            self.words[q / WORD] |= mask;
        } else {
            self.words[q / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Popcount of `self AND other`.
    #[inline]
    pub fn and_count(&self, other: &Self) -> u32 {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Parity of the overlap `self · other mod 2`.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        let acc = self
            .words
            .iter()
            .zip(other.words.iter())
            .fold(0u64, |acc, (a, b)| acc ^ (a & b));
        acc.count_ones() & 1 == 1
    }

    #[inline]
    pub fn xor(&self, other: &Self) -> Self {
        Self {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&q| self.get(q))
    }

    /// Integer value when the vector fits in 64 bits.
    pub fn to_u64(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    /// Parses a `'0'`/`'1'` string; character `q` is qubit `q`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Self::zeros(text.chars().count());
        for (q, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => out.set(q, true),
                _ => return Err(Error::ParseReference(text.to_string())),
            }
        }
        Ok(out)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len.cmp(&other.len).then_with(|| {
            for (a, b) in self.words.iter().rev().zip(other.words.iter().rev()) {
                match a.cmp(b) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.len {
            f.write_str(if self.get(q) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}
