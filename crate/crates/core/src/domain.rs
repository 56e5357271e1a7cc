//! Finite binary words and prefix-free sets.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite binary word. Ordered by length first, then lexicographically,
/// which is the canonical enumeration order used throughout the crate.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    /// The empty string λ.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// The `len` low bits of `value`, most significant first.
    pub fn from_index(value: u64, len: u32) -> Self {
        let bits = (0..len).rev().map(|i| (value >> i) & 1 == 1).collect();
        Self { bits }
    }

    pub fn zeros(len: usize) -> Self {
        Self { bits: vec![false; len] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).copied()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.starts_with(&self.bits)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString {
            bits: self.bits[start..end].to_vec(),
        }
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("λ")
        } else {
            write!(f, "{self}")
        }
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidBitString(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(BitString::from_bits)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Finds a pair `(a, b)` where `a` is a prefix of `b` (or equal to it).
fn prefix_violation(strings: &[BitString]) -> Option<(BitString, BitString)> {
    // In plain lexicographic order a prefix sorts immediately before some
    // extension of it, so checking neighbours suffices.
    let mut sorted: Vec<&BitString> = strings.iter().collect();
    sorted.sort_by(|a, b| a.bits.cmp(&b.bits));
    sorted
        .windows(2)
        .find(|w| w[0].is_prefix_of(w[1]))
        .map(|w| (w[0].clone(), w[1].clone()))
}

/// True iff no element is a prefix of a distinct element. Duplicates count
/// as violations.
pub fn is_prefix_free(strings: &[BitString]) -> bool {
    prefix_violation(strings).is_none()
}

/// A finite, duplicate-free, prefix-free set of words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSet {
    members: Vec<BitString>,
}

impl PrefixSet {
    pub fn new(mut members: Vec<BitString>) -> Result<Self> {
        if let Some((a, b)) = prefix_violation(&members) {
            return Err(Error::NotPrefixFree(format!("{a:?}"), format!("{b:?}")));
        }
        members.sort();
        Ok(Self { members })
    }

    pub fn members(&self) -> &[BitString] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_empty(&self) -> bool {
        self.members.iter().any(BitString::is_empty)
    }
}

impl FromStr for PrefixSet {
    type Err = Error;

    /// Parses a comma- or whitespace-separated list of words.
    fn from_str(s: &str) -> Result<Self> {
        let members = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|w| !w.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        PrefixSet::new(members)
    }
}
