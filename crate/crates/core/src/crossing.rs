//! Occurrences of a substring that touch or contain the edited position,
//! their prefix/suffix decompositions, and the five-way divergence type.
//!
//! For an edited string `T'` with edited position `i`, an occurrence
//! `T'[j..k]` of `x` is *crossing* when it touches or contains `i`:
//!
//! * insertion/substitution: `k = i-1` (touch left), `j ≤ i ≤ k` (contains),
//!   or `j = i+1` (touch right);
//! * deletion (where `i` is a gap boundary): `k = i-1`, `j ≤ i-1 ∧ i ≤ k`,
//!   or `j = i`.
//!
//! The leftmost and rightmost crossing occurrences are written `x_L` and
//! `x_R`. Each crossing occurrence splits into a prefix part `P` (up to the
//! edit boundary) and a suffix part `S` (from the edit boundary). For
//! occurrences that merely touch the boundary we take `P = x, S = ε` (touch
//! left) and `P = ε, S = x` (touch right), so that `P` is always a prefix of
//! `x` and `S` a suffix of `x`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::edits::{EditKind, EditedContext};
use crate::error::{Error, Result};
use crate::oracle;
use crate::text::Text;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Contact {
    TouchLeft,
    Contains,
    TouchRight,
}

/// One crossing occurrence `T'[start..end]` (1-based, inclusive; an empty
/// occurrence at boundary `j` has `end = start - 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingOcc {
    pub start: usize,
    pub end: usize,
    pub contact: Contact,
}

/// Prefix part and suffix part of a crossing occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsDecomposition {
    pub p: Text,
    pub s: Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeClass {
    I,
    II,
    III,
    IV,
    V,
}

impl fmt::Display for TypeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeClass::I => "i",
            TypeClass::II => "ii",
            TypeClass::III => "iii",
            TypeClass::IV => "iv",
            TypeClass::V => "v",
        };
        write!(f, "{s}")
    }
}

/// Divergence classification of the crossing occurrences of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeTag {
    pub tag: TypeClass,
    pub left_div: bool,
    pub right_div: bool,
}

fn contact_of(ctx: &EditedContext, j: usize, k: usize) -> Option<Contact> {
    let i = ctx.i;
    match ctx.kind() {
        EditKind::Insertion | EditKind::Substitution => {
            if k + 1 == i {
                Some(Contact::TouchLeft)
            } else if j <= i && i <= k {
                Some(Contact::Contains)
            } else if j == i + 1 {
                Some(Contact::TouchRight)
            } else {
                None
            }
        }
        EditKind::Deletion => {
            if k + 1 == i {
                // For the empty occurrence at the gap, j = i and k = i-1
                // satisfy both touching clauses; TouchLeft is canonical.
                Some(Contact::TouchLeft)
            } else if j + 1 <= i && i <= k {
                Some(Contact::Contains)
            } else if j == i {
                Some(Contact::TouchRight)
            } else {
                None
            }
        }
    }
}

/// Crossing occurrences of a possibly-empty `x`, sorted by start position.
/// The empty string occurs at every boundary `1..=|T'|+1`.
pub(crate) fn crossing_occurrences_impl(ctx: &EditedContext, x: &Text) -> Vec<CrossingOcc> {
    let spots: Vec<usize> = oracle::occurrences(&ctx.edited, x);
    spots
        .into_iter()
        .filter_map(|j| {
            let k = j + x.len() - 1; // k = j-1 for empty x
            contact_of(ctx, j, k).map(|contact| CrossingOcc { start: j, end: k, contact })
        })
        .collect()
}

/// All crossing occurrences of a non-empty substring `x` of `T'`, sorted by
/// start position. `x_L` is the first entry and `x_R` the last.
///
/// ```
/// use cdawg_lab::{crossing, edits, Text};
/// use cdawg_lab::edits::EditOp;
///
/// let ctx = edits::apply_edit(&Text::from("abab"), EditOp::insertion(3, b'c'), true).unwrap();
/// let occs = crossing::crossing_occurrences(&ctx, &Text::from("ab")).unwrap();
/// assert_eq!(occs.iter().map(|o| o.start).collect::<Vec<_>>(), vec![1, 4]);
/// ```
pub fn crossing_occurrences(ctx: &EditedContext, x: &Text) -> Result<Vec<CrossingOcc>> {
    if x.is_empty() {
        return Err(Error::EmptyQuery);
    }
    if !x.is_substring_of(&ctx.edited) {
        return Err(Error::NotASubstring(x.clone()));
    }
    Ok(crossing_occurrences_impl(ctx, x))
}

/// The `P`/`S` split of one crossing occurrence.
pub fn decompose(ctx: &EditedContext, occ: &CrossingOcc) -> PsDecomposition {
    let t = &ctx.edited;
    let i = ctx.i;
    let (j, k) = (occ.start, occ.end);
    match occ.contact {
        Contact::TouchLeft => PsDecomposition { p: t.slice(j, k), s: Text::empty() },
        Contact::TouchRight => PsDecomposition { p: Text::empty(), s: t.slice(j, k) },
        Contact::Contains => match ctx.kind() {
            EditKind::Insertion | EditKind::Substitution => {
                PsDecomposition { p: t.slice(j, i), s: t.slice(i, k) }
            }
            EditKind::Deletion => PsDecomposition { p: t.slice(j, i - 1), s: t.slice(i, k) },
        },
    }
}

fn char_before(t: &Text, j: usize) -> Option<u8> {
    (j >= 2).then(|| t.at(j - 1))
}

fn char_after(t: &Text, k: usize) -> Option<u8> {
    (k + 1 <= t.len()).then(|| t.at(k + 1))
}

pub(crate) fn classify_from_occs(ctx: &EditedContext, occs: &[CrossingOcc]) -> TypeTag {
    let t = &ctx.edited;
    let xl = occs.first().expect("at least one crossing occurrence");
    let xr = occs.last().expect("at least one crossing occurrence");
    let left_div = xl.start == 1 || char_before(t, xl.start) != char_before(t, xr.start);
    let right_div = xr.end == t.len() || char_after(t, xl.end) != char_after(t, xr.end);
    let tag = if occs.len() == 1 {
        TypeClass::I
    } else {
        match (left_div, right_div) {
            (false, false) => TypeClass::II,
            (false, true) => TypeClass::III,
            (true, false) => TypeClass::IV,
            (true, true) => TypeClass::V,
        }
    };
    TypeTag { tag, left_div, right_div }
}

/// Classify `x` by the divergence of its extremal crossing occurrences.
///
/// By the periodicity of repeated crossing occurrences, only `x_L` and `x_R`
/// need to be inspected: all other crossing occurrences share their inner
/// neighbor characters.
pub fn classify_type(ctx: &EditedContext, x: &Text) -> Result<TypeTag> {
    let occs = crossing_occurrences(ctx, x)?;
    if occs.is_empty() {
        return Err(Error::NoCrossingOccurrence(x.clone()));
    }
    Ok(classify_from_occs(ctx, &occs))
}

/// The middle part `J_x` of `x`, with the prefix `P_{x_R}` and the suffix
/// `S_{x_L}` removed: `x = P_{x_R} · J_x · S_{x_L}`. Defined whenever `x` has
/// at least two crossing occurrences; possibly empty.
pub fn compute_j(ctx: &EditedContext, x: &Text) -> Result<Text> {
    let occs = crossing_occurrences(ctx, x)?;
    if occs.len() < 2 {
        return Err(Error::SingleCrossingOccurrence(x.clone()));
    }
    let s_l = decompose(ctx, occs.first().unwrap()).s;
    let p_r = decompose(ctx, occs.last().unwrap()).p;
    assert!(
        p_r.len() + s_l.len() <= x.len(),
        "P_xR and S_xL overlap inside {x:?} for {} on {:?}",
        ctx.op,
        ctx.original
    );
    Ok(x.slice(p_r.len() + 1, x.len() - s_l.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edits::{apply_edit, EditOp};

    fn t(s: &str) -> Text {
        Text::from(s)
    }

    fn example1() -> EditedContext {
        apply_edit(&t("cabcabcdabcadbcabcdabcabdcabcabcabdabcab"), EditOp::deletion(13), true)
            .unwrap()
    }

    #[test]
    fn example1_crossing_starts() {
        let ctx = example1();
        let occs = crossing_occurrences(&ctx, &t("abcabc")).unwrap();
        assert_eq!(occs.iter().map(|o| o.start).collect::<Vec<_>>(), vec![9, 12]);
        assert!(occs.iter().all(|o| o.contact == Contact::Contains));
    }

    #[test]
    fn insertion_touching_occurrences() {
        let ctx = apply_edit(&t("abab"), EditOp::insertion(3, b'c'), true).unwrap();
        let occs = crossing_occurrences(&ctx, &t("ab")).unwrap();
        assert_eq!(occs.len(), 2);
        assert_eq!((occs[0].start, occs[0].contact), (1, Contact::TouchLeft));
        assert_eq!((occs[1].start, occs[1].contact), (4, Contact::TouchRight));

        // Only the occurrence of "b" at position 2 crosses; T'[5] does not.
        let occs = crossing_occurrences(&ctx, &t("b")).unwrap();
        assert_eq!(occs.iter().map(|o| o.start).collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn decompose_examples() {
        let ctx = example1();
        let occ = CrossingOcc { start: 9, end: 14, contact: Contact::Contains };
        let ps = decompose(&ctx, &occ);
        assert_eq!(ps.p, t("abca"));
        assert_eq!(ps.s, t("bc"));

        let occ = CrossingOcc { start: 11, end: 23, contact: Contact::Contains };
        let ps = decompose(&ctx, &occ);
        assert_eq!(ps.p, t("ca"));
        assert_eq!(ps.s, t("bcabcdabcab"));

        let ctx = apply_edit(&t("abab"), EditOp::insertion(3, b'c'), true).unwrap();
        let occ = CrossingOcc { start: 1, end: 2, contact: Contact::TouchLeft };
        let ps = decompose(&ctx, &occ);
        assert_eq!(ps.p, t("ab"));
        assert!(ps.s.is_empty());
    }

    #[test]
    fn classify_examples() {
        let ctx = example1();
        let tag = classify_type(&ctx, &t("abcabc")).unwrap();
        assert_eq!(tag.tag, TypeClass::V);

        let ctx2 = apply_edit(&t("abab"), EditOp::insertion(3, b'c'), true).unwrap();
        let tag = classify_type(&ctx2, &t("ab")).unwrap();
        assert_eq!(tag.tag, TypeClass::V);
        assert!(tag.left_div && tag.right_div);

        // Single crossing occurrence: always Type (i).
        let tag = classify_type(&ctx2, &t("abc")).unwrap();
        assert_eq!(tag.tag, TypeClass::I);
    }

    #[test]
    fn compute_j_examples() {
        let ctx = example1();
        assert_eq!(compute_j(&ctx, &t("cabcabcdabcab")).unwrap(), t("bcabcdabca"));

        let ctx2 = apply_edit(&t("abab"), EditOp::insertion(3, b'c'), true).unwrap();
        assert_eq!(compute_j(&ctx2, &t("ab")).unwrap(), t("ab"));
        assert!(compute_j(&ctx2, &t("abc")).is_err());
    }

    #[test]
    fn p_and_s_reconstruct_x() {
        let ctx = example1();
        for x in [t("abcabc"), t("cabcabcdabcab"), t("bcabc"), t("a")] {
            for occ in crossing_occurrences(&ctx, &x).unwrap() {
                let ps = decompose(&ctx, &occ);
                // Deletion: P and S partition the occurrence disjointly.
                assert_eq!(ps.p.concat(&ps.s), x);
                assert!(ps.p.is_prefix_of(&x));
                assert!(ps.s.is_suffix_of(&x));
            }
        }

        let ctx = apply_edit(&t("abcabc"), EditOp::substitution(4, b'c'), true).unwrap();
        for x in [t("c"), t("bc"), t("cc")] {
            for occ in crossing_occurrences(&ctx, &x).unwrap() {
                let ps = decompose(&ctx, &occ);
                assert!(ps.p.is_prefix_of(&x));
                assert!(ps.s.is_suffix_of(&x));
                if occ.contact == Contact::Contains {
                    // Insertion/substitution: P and S share the edited character.
                    let merged = ps.p.concat(&ps.s.slice(2, ps.s.len()));
                    assert_eq!(merged, x);
                } else {
                    assert_eq!(ps.p.concat(&ps.s), x);
                }
            }
        }
    }

    #[test]
    fn periodicity_of_inner_crossing_occurrences() {
        // All crossing occurrences except x_L share a preceding character,
        // and all except x_R share a following character.
        for (orig, op) in [
            (t("aaaaaaaa"), EditOp::insertion(4, b'a')),
            (t("abababab"), EditOp::substitution(4, b'a')),
            (t("abababab"), EditOp::deletion(4)),
        ] {
            let ctx = apply_edit(&orig, op, false).unwrap();
            for x in crate::oracle::distinct_substrings(&ctx.edited) {
                if x.is_empty() {
                    continue;
                }
                let occs = crossing_occurrences(&ctx, &x).unwrap();
                if occs.len() < 3 {
                    continue;
                }
                let before: Vec<_> = occs[1..]
                    .iter()
                    .map(|o| char_before(&ctx.edited, o.start))
                    .collect();
                assert!(before.windows(2).all(|w| w[0] == w[1]), "preceders differ for {x:?}");
                let after: Vec<_> = occs[..occs.len() - 1]
                    .iter()
                    .map(|o| char_after(&ctx.edited, o.end))
                    .collect();
                assert!(after.windows(2).all(|w| w[0] == w[1]), "followers differ for {x:?}");
            }
        }
    }

    #[test]
    fn rejects_empty_and_missing() {
        let ctx = example1();
        assert!(crossing_occurrences(&ctx, &Text::empty()).is_err());
        assert!(crossing_occurrences(&ctx, &t("zzz")).is_err());
    }
}
