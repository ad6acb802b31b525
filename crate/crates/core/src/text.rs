//! Byte strings with the 1-based indexing used throughout this crate.
//!
//! Positions are 1-based and ranges are inclusive on both ends, so
//! `t.slice(i, j)` is the substring running from the `i`-th through the
//! `j`-th character. An empty range (`j < i`) yields the empty string.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// An immutable byte string over an arbitrary byte alphabet.
///
/// ```
/// use cdawg_lab::Text;
///
/// let t = Text::from("ababcababd");
/// assert_eq!(t.len(), 10);
/// assert_eq!(t.at(5), b'c');
/// assert_eq!(t.slice(1, 4), Text::from("abab"));
/// ```
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Text(Vec<u8>);

impl Text {
    pub fn new(bytes: Vec<u8>) -> Self {
        Text(bytes)
    }

    pub fn empty() -> Self {
        Text(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The `i`-th character, 1-based. Panics if `i` is out of range.
    pub fn at(&self, i: usize) -> u8 {
        assert!(i >= 1 && i <= self.0.len(), "position {i} out of range 1..={}", self.0.len());
        self.0[i - 1]
    }

    /// The substring `T[i..j]` (1-based, inclusive). `j < i` yields the
    /// empty string; bounds beyond the text length panic.
    pub fn slice(&self, i: usize, j: usize) -> Text {
        if j < i {
            return Text::empty();
        }
        assert!(i >= 1 && j <= self.0.len(), "range {i}..={j} out of range for length {}", self.0.len());
        Text(self.0[i - 1..j].to_vec())
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn is_prefix_of(&self, other: &Text) -> bool {
        other.0.starts_with(&self.0)
    }

    pub fn is_suffix_of(&self, other: &Text) -> bool {
        other.0.ends_with(&self.0)
    }

    pub fn is_substring_of(&self, other: &Text) -> bool {
        if self.is_empty() {
            return true;
        }
        other.0.windows(self.0.len()).any(|w| w == self.0)
    }

    /// Concatenation.
    pub fn concat(&self, other: &Text) -> Text {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Text(v)
    }

    /// The set of distinct characters occurring in the text.
    pub fn alphabet(&self) -> BTreeSet<u8> {
        self.0.iter().copied().collect()
    }
}

impl From<&str> for Text {
    fn from(s: &str) -> Self {
        Text(s.as_bytes().to_vec())
    }
}

impl From<&[u8]> for Text {
    fn from(s: &[u8]) -> Self {
        Text(s.to_vec())
    }
}

impl fmt::Display for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Debug for Text {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", String::from_utf8_lossy(&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_is_one_based_inclusive() {
        let t = Text::from("abcde");
        assert_eq!(t.slice(2, 4), Text::from("bcd"));
        assert_eq!(t.slice(1, 5), t);
        assert_eq!(t.slice(3, 2), Text::empty());
    }

    #[test]
    fn substring_checks() {
        let t = Text::from("abab");
        assert!(Text::from("ba").is_substring_of(&t));
        assert!(!Text::from("aa").is_substring_of(&t));
        assert!(Text::empty().is_substring_of(&t));
        assert!(Text::empty().is_prefix_of(&t));
        assert!(Text::empty().is_suffix_of(&t));
    }
}
