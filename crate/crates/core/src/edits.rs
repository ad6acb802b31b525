//! Single-character edits and the distance-1 neighborhood of a text.
//!
//! An [`EditOp`] applied to `T` yields an [`EditedContext`] carrying both
//! strings and the edited position `i` in `T'`. For insertions and
//! substitutions `i` is the position of the edited character; for deletions
//! `i` marks the gap, i.e. `T'[1..i-1] = T[1..i-1]` and `T'[i..] = T[i+1..]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EditKind {
    Insertion,
    Deletion,
    Substitution,
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditKind::Insertion => write!(f, "ins"),
            EditKind::Deletion => write!(f, "del"),
            EditKind::Substitution => write!(f, "sub"),
        }
    }
}

/// A single-character edit. `ch` is `None` exactly for deletions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EditOp {
    pub kind: EditKind,
    pub position: usize,
    pub ch: Option<u8>,
}

impl EditOp {
    pub fn insertion(position: usize, ch: u8) -> Self {
        EditOp { kind: EditKind::Insertion, position, ch: Some(ch) }
    }

    pub fn deletion(position: usize) -> Self {
        EditOp { kind: EditKind::Deletion, position, ch: None }
    }

    pub fn substitution(position: usize, ch: u8) -> Self {
        EditOp { kind: EditKind::Substitution, position, ch: Some(ch) }
    }
}

/// Renders as `ins@3=c`, `del@13`, `sub@5=b`; the notation used in reports.
impl fmt::Display for EditOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            EditKind::Deletion => write!(f, "del@{}", self.position),
            _ => write!(f, "{}@{}={}", self.kind, self.position, self.ch.unwrap_or(b'?') as char),
        }
    }
}

/// A text together with its distance-1 edit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EditedContext {
    pub original: Text,
    pub edited: Text,
    /// Edited position in the edited string (a gap boundary for deletions).
    pub i: usize,
    pub op: EditOp,
}

impl EditedContext {
    pub fn kind(&self) -> EditKind {
        self.op.kind
    }
}

/// Apply `op` to `t`.
///
/// Out-of-range positions are rejected, as are identity substitutions when
/// `strict` is set (they have edit distance 0, not 1).
///
/// ```
/// use cdawg_lab::{edits, Text};
/// use cdawg_lab::edits::EditOp;
///
/// let ctx = edits::apply_edit(&Text::from("abab"), EditOp::insertion(3, b'c'), true).unwrap();
/// assert_eq!(ctx.edited, Text::from("abcab"));
/// assert_eq!(ctx.i, 3);
/// ```
pub fn apply_edit(t: &Text, op: EditOp, strict: bool) -> Result<EditedContext> {
    let n = t.len();
    let max_pos = match op.kind {
        EditKind::Insertion => n + 1,
        _ => n,
    };
    if op.position < 1 || op.position > max_pos {
        return Err(Error::PositionOutOfRange { pos: op.position, len: n });
    }
    let i = op.position;
    let edited = match op.kind {
        EditKind::Insertion => {
            let c = Text::new(vec![op.ch.expect("insertion carries a character")]);
            t.slice(1, i - 1).concat(&c).concat(&t.slice(i, n))
        }
        EditKind::Substitution => {
            let c = op.ch.expect("substitution carries a character");
            if strict && t.at(i) == c {
                return Err(Error::IdentitySubstitution);
            }
            t.slice(1, i - 1).concat(&Text::new(vec![c])).concat(&t.slice(i + 1, n))
        }
        EditKind::Deletion => t.slice(1, i - 1).concat(&t.slice(i + 1, n)),
    };
    Ok(EditedContext { original: t.clone(), edited, i, op })
}

/// Every valid edit of the requested kinds over `alphabet`, exactly once, in
/// deterministic (kind, position, character) order. Strict mode skips
/// identity substitutions.
pub fn enumerate_edits(t: &Text, alphabet: &[u8], kinds: &[EditKind], strict: bool) -> Vec<EditOp> {
    let mut sorted_alpha: Vec<u8> = alphabet.to_vec();
    sorted_alpha.sort_unstable();
    sorted_alpha.dedup();
    let mut kinds_sorted: Vec<EditKind> = kinds.to_vec();
    kinds_sorted.sort_unstable();
    kinds_sorted.dedup();

    let mut ops = Vec::new();
    for kind in kinds_sorted {
        match kind {
            EditKind::Insertion => {
                for pos in 1..=t.len() + 1 {
                    for &c in &sorted_alpha {
                        ops.push(EditOp::insertion(pos, c));
                    }
                }
            }
            EditKind::Deletion => {
                for pos in 1..=t.len() {
                    ops.push(EditOp::deletion(pos));
                }
            }
            EditKind::Substitution => {
                for pos in 1..=t.len() {
                    for &c in &sorted_alpha {
                        if strict && t.at(pos) == c {
                            continue;
                        }
                        ops.push(EditOp::substitution(pos, c));
                    }
                }
            }
        }
    }
    ops
}
