//! Brute-force ground truth for string combinatorics.
//!
//! Everything here is deliberately naive (quadratic to quartic scans) and is
//! the trusted reference at desk scale: the fast index in [`crate::cdawg`] is
//! validated against it, and the lemma verifier in [`crate::partition`] is
//! built entirely on top of it so that it never inherits index bugs.
//!
//! Terminology follows the usual conventions for suffix structures:
//! a substring `w` of `t` is *left-maximal* if it is a prefix of `t` or has
//! two distinct preceding characters among its occurrences, *right-maximal*
//! symmetrically with suffixes and following characters, and *maximal* if it
//! is both. The CDAWG size `e(t)` is the total number of right-extensions of
//! the maximal substrings.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::text::Text;

/// All 1-based start positions of `w` in `t`, ascending.
///
/// The empty string occurs at every boundary, i.e. at `1..=|t|+1`.
///
/// ```
/// use cdawg_lab::{oracle, Text};
///
/// let t = Text::from("abab");
/// assert_eq!(oracle::occurrences(&t, &Text::from("ab")), vec![1, 3]);
/// assert_eq!(oracle::occurrences(&t, &Text::empty()), vec![1, 2, 3, 4, 5]);
/// ```
pub fn occurrences(t: &Text, w: &Text) -> Vec<usize> {
    if w.is_empty() {
        return (1..=t.len() + 1).collect();
    }
    if w.len() > t.len() {
        return Vec::new();
    }
    (1..=t.len() - w.len() + 1)
        .filter(|&p| t.slice(p, p + w.len() - 1) == *w)
        .collect()
}

/// Whether `w` occurs in `t` at all.
pub fn occurs(t: &Text, w: &Text) -> bool {
    w.is_substring_of(t)
}

/// Distinct characters immediately following occurrences of `w` in `t`.
pub fn followers(t: &Text, w: &Text) -> BTreeSet<u8> {
    occurrences(t, w)
        .into_iter()
        .filter_map(|p| {
            let after = p + w.len();
            (after <= t.len()).then(|| t.at(after))
        })
        .collect()
}

/// Distinct characters immediately preceding occurrences of `w` in `t`.
pub fn preceders(t: &Text, w: &Text) -> BTreeSet<u8> {
    occurrences(t, w)
        .into_iter()
        .filter_map(|p| (p >= 2).then(|| t.at(p - 1)))
        .collect()
}

/// Left-maximality test; errors when `w` does not occur in `t`.
pub fn is_left_maximal(t: &Text, w: &Text) -> Result<bool> {
    if !occurs(t, w) {
        return Err(Error::NotASubstring(w.clone()));
    }
    Ok(w.is_prefix_of(t) || preceders(t, w).len() >= 2)
}

/// Right-maximality test; errors when `w` does not occur in `t`.
pub fn is_right_maximal(t: &Text, w: &Text) -> Result<bool> {
    if !occurs(t, w) {
        return Err(Error::NotASubstring(w.clone()));
    }
    Ok(w.is_suffix_of(t) || followers(t, w).len() >= 2)
}

/// Membership in `LeftM(t)`: occurs in `t` and is left-maximal there.
pub fn in_left_m(t: &Text, w: &Text) -> bool {
    occurs(t, w) && is_left_maximal(t, w).unwrap()
}

/// Membership in `RightM(t)`.
pub fn in_right_m(t: &Text, w: &Text) -> bool {
    occurs(t, w) && is_right_maximal(t, w).unwrap()
}

/// Membership in `M(t) = LeftM(t) ∩ RightM(t)`.
pub fn in_m(t: &Text, w: &Text) -> bool {
    in_left_m(t, w) && in_right_m(t, w)
}

/// The set of distinct substrings of `t`, including the empty string.
pub fn distinct_substrings(t: &Text) -> BTreeSet<Text> {
    let mut set = BTreeSet::new();
    set.insert(Text::empty());
    for i in 1..=t.len() {
        for j in i..=t.len() {
            set.insert(t.slice(i, j));
        }
    }
    set
}

/// The maximal substrings of a text: `M(t) = LeftM(t) ∩ RightM(t)`.
///
/// Both the empty string and the whole text are always members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaximalSet {
    entries: BTreeSet<Text>,
    whole: Text,
}

impl MaximalSet {
    pub fn contains(&self, w: &Text) -> bool {
        self.entries.contains(w)
    }

    pub fn is_whole_string(&self, w: &Text) -> bool {
        *w == self.whole
    }

    pub fn iter(&self) -> impl Iterator<Item = &Text> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeSet<Text> {
        &self.entries
    }
}

/// Enumerate `M(t)` by filtering every distinct substring.
///
/// ```
/// use cdawg_lab::{oracle, Text};
///
/// let m = oracle::maximal_substrings(&Text::from("ababcababd"));
/// assert_eq!(m.len(), 4); // ε, ab, abab, ababcababd
/// assert!(m.contains(&Text::from("abab")));
/// ```
pub fn maximal_substrings(t: &Text) -> MaximalSet {
    let entries = distinct_substrings(t)
        .into_iter()
        .filter(|w| is_left_maximal(t, w).unwrap() && is_right_maximal(t, w).unwrap())
        .collect();
    MaximalSet { entries, whole: t.clone() }
}

/// Out-degree `D_t(x)` of the CDAWG node for `x`: the number of distinct
/// characters `a` with `xa` a substring of `t`. Errors when `x ∉ M(t)`.
pub fn out_degree(t: &Text, x: &Text) -> Result<usize> {
    if !in_m(t, x) {
        return Err(Error::NotMaximal(x.clone()));
    }
    Ok(followers(t, x).len())
}

/// CDAWG size `e(t) = Σ_{x ∈ M(t)} D_t(x)`, computed purely by brute force.
pub fn cdawg_size(t: &Text) -> usize {
    maximal_substrings(t)
        .iter()
        .map(|x| followers(t, x).len())
        .sum()
}

/// `lrep_t(w) = αw` with `α` the shortest left extension making `αw`
/// left-maximal in `t`. Errors when `w` does not occur in `t`.
pub fn lrep(t: &Text, w: &Text) -> Result<Text> {
    if !occurs(t, w) {
        return Err(Error::NotASubstring(w.clone()));
    }
    let mut cur = w.clone();
    loop {
        if is_left_maximal(t, &cur)? {
            return Ok(cur);
        }
        // Not left-maximal and not a prefix: a unique preceding character.
        let preds = preceders(t, &cur);
        debug_assert_eq!(preds.len(), 1);
        let c = *preds.iter().next().unwrap();
        cur = Text::new([c].to_vec()).concat(&cur);
    }
}

/// `rrep_t(w) = wβ`, the shortest right extension to a right-maximal string.
pub fn rrep(t: &Text, w: &Text) -> Result<Text> {
    if !occurs(t, w) {
        return Err(Error::NotASubstring(w.clone()));
    }
    let mut cur = w.clone();
    loop {
        if is_right_maximal(t, &cur)? {
            return Ok(cur);
        }
        let folls = followers(t, &cur);
        debug_assert_eq!(folls.len(), 1);
        let c = *folls.iter().next().unwrap();
        cur = cur.concat(&Text::new([c].to_vec()));
    }
}
