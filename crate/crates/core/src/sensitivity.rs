//! Multiplicative sensitivity of `e(T)` to single-character edits.
//!
//! The sensitivity of a string `T` under an edit kind is the maximum of
//! `e(T') / e(T)` over all edits of that kind. [`ms_for_string`] computes
//! this for one string; [`exhaustive_scan`] sweeps every string over a small
//! alphabet up to a length cap, records the worst observed ratio, checks the
//! `e(T') ≤ 8·e(T) + 4` bound on every pair, and can additionally run the
//! full lemma verifier per edit.
//!
//! The module also generates the classic families whose CDAWG sizes bracket
//! the measure: Fibonacci and Thue-Morse words (`e = Θ(log n)`) and
//! `aⁿ⁻¹b` (`e = Θ(n)`).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde_json::json;

use crate::cdawg;
use crate::edits::{apply_edit, enumerate_edits, EditKind, EditOp};
use crate::error::{Error, Result};
use crate::partition::verify_lemma_suite;
use crate::text::Text;

pub const ALL_KINDS: [EditKind; 3] =
    [EditKind::Insertion, EditKind::Deletion, EditKind::Substitution];

// ---------------------------------------------------------------------------
// String families.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyName {
    Fibonacci,
    ThueMorse,
    UnaryB,
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyName::Fibonacci => "fibonacci",
            FamilyName::ThueMorse => "thue_morse",
            FamilyName::UnaryB => "unary_b",
        };
        write!(f, "{s}")
    }
}

impl FromStr for FamilyName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fibonacci" | "fib" => Ok(FamilyName::Fibonacci),
            "thue_morse" | "thue-morse" | "tm" => Ok(FamilyName::ThueMorse),
            "unary_b" | "unary-b" => Ok(FamilyName::UnaryB),
            other => Err(Error::InvalidParameter(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FamilySpec {
    pub name: FamilyName,
    /// Recurrence index for Fibonacci, morphism iterations for Thue-Morse,
    /// total length for `unary_b`.
    pub k: usize,
}

/// Generate a family member.
///
/// Fibonacci: `F₁ = b`, `F₂ = a`, `F_k = F_{k−1}·F_{k−2}`. Thue-Morse: `k`
/// applications of `a → ab, b → ba` to `a`. `unary_b(n) = aⁿ⁻¹b`.
///
/// ```
/// use cdawg_lab::sensitivity::{family, FamilyName, FamilySpec};
/// use cdawg_lab::Text;
///
/// let f5 = family(FamilySpec { name: FamilyName::Fibonacci, k: 5 }).unwrap();
/// assert_eq!(f5, Text::from("abaab"));
/// ```
pub fn family(spec: FamilySpec) -> Result<Text> {
    if spec.k == 0 {
        return Err(Error::InvalidParameter("family parameter must be >= 1".into()));
    }
    let word = match spec.name {
        FamilyName::Fibonacci => {
            let (mut prev, mut cur) = (b"b".to_vec(), b"a".to_vec());
            match spec.k {
                1 => prev,
                _ => {
                    for _ in 2..spec.k {
                        let next = [cur.as_slice(), prev.as_slice()].concat();
                        prev = std::mem::replace(&mut cur, next);
                    }
                    cur
                }
            }
        }
        FamilyName::ThueMorse => {
            let mut w = vec![b'a'];
            for _ in 0..spec.k {
                w = w
                    .iter()
                    .flat_map(|&c| if c == b'a' { [b'a', b'b'] } else { [b'b', b'a'] })
                    .collect();
            }
            w
        }
        FamilyName::UnaryB => {
            let mut w = vec![b'a'; spec.k - 1];
            w.push(b'b');
            w
        }
    };
    Ok(Text::new(word))
}

// ---------------------------------------------------------------------------
// Sensitivity reports.

/// One measured `(T, op)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct EditRecord {
    pub text: Text,
    pub op: EditOp,
    pub e_before: usize,
    pub e_after: usize,
}

impl EditRecord {
    pub fn ratio(&self) -> f64 {
        self.e_after as f64 / self.e_before as f64
    }

    /// Slack of Theorem 1 in ratio terms: `8 + 4/e(T) − e(T')/e(T)`.
    pub fn bound_margin(&self) -> f64 {
        8.0 + 4.0 / self.e_before as f64 - self.ratio()
    }

    pub fn violates_bound(&self) -> bool {
        self.e_after > 8 * self.e_before + 4
    }
}

/// Per-string sensitivity: the worst edit of each requested kind.
#[derive(Debug, Clone)]
pub struct StringSummary {
    pub text: Text,
    pub e: usize,
    pub worst_per_kind: BTreeMap<EditKind, EditRecord>,
}

impl StringSummary {
    /// The multiplicative sensitivity over all measured kinds.
    pub fn ms(&self) -> Option<f64> {
        self.worst_per_kind.values().map(EditRecord::ratio).fold(None, |acc, r| {
            Some(acc.map_or(r, |a: f64| a.max(r)))
        })
    }
}

/// Outcome of a sensitivity sweep.
#[derive(Debug, Clone)]
pub struct SensitivityReport {
    /// Every `(T, op)` pair in enumeration order.
    pub records: Vec<EditRecord>,
    pub per_string: Vec<StringSummary>,
    /// Argmax of the ratio; earliest in enumeration order on ties.
    pub worst: Option<EditRecord>,
    pub bound_violations: Vec<EditRecord>,
    pub lemma_violations: Vec<String>,
    pub scanned_strings: usize,
    pub scanned_edits: usize,
    /// `false` when the time budget expired before the sweep finished.
    pub complete: bool,
}

impl SensitivityReport {
    pub fn has_violations(&self) -> bool {
        !self.bound_violations.is_empty() || !self.lemma_violations.is_empty()
    }

    /// One row per `(T, op)`: `text,op,e_T,e_T',ratio`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("text,op,e_T,e_T',ratio\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{:.6}\n",
                r.text, r.op, r.e_before, r.e_after, r.ratio()
            ));
        }
        out
    }

    pub fn summary_document(&self) -> serde_json::Value {
        json!({
            "scanned_strings": self.scanned_strings,
            "scanned_edits": self.scanned_edits,
            "complete": self.complete,
            "worst": self.worst.as_ref().map(|r| json!({
                "text": r.text.to_string(),
                "op": r.op.to_string(),
                "e_T": r.e_before,
                "e_T'": r.e_after,
                "ratio": r.ratio(),
                "bound_margin": r.bound_margin(),
            })),
            "bound_violations": self.bound_violations.len(),
            "lemma_violations": self.lemma_violations,
        })
    }
}

/// Sensitivity of a single string: the worst edit of each kind, with the
/// argmax operation recorded and ties broken by enumeration order.
///
/// ```
/// use cdawg_lab::sensitivity::ms_for_string;
/// use cdawg_lab::edits::EditKind;
/// use cdawg_lab::Text;
///
/// let summary = ms_for_string(&Text::from("abab"), &[EditKind::Insertion], b"abc");
/// let worst = &summary.worst_per_kind[&EditKind::Insertion];
/// assert_eq!(worst.e_before, 3);
/// assert!(worst.ratio() >= 4.0 / 3.0); // e.g. ins c@3 gives abcab with e = 4
/// ```
pub fn ms_for_string(t: &Text, kinds: &[EditKind], alphabet: &[u8]) -> StringSummary {
    scan_string(t, kinds, alphabet, false).0
}

fn scan_string(
    t: &Text,
    kinds: &[EditKind],
    alphabet: &[u8],
    verify_lemmas: bool,
) -> (StringSummary, Vec<EditRecord>, Vec<String>) {
    let e = cdawg::build(t).expect("non-empty text").edge_count();
    let mut records = Vec::new();
    let mut worst_per_kind: BTreeMap<EditKind, EditRecord> = BTreeMap::new();
    let mut lemma_violations = Vec::new();
    for op in enumerate_edits(t, alphabet, kinds, true) {
        let ctx = apply_edit(t, op, true).expect("enumerated edits are valid");
        // Deleting the only character leaves the empty string: no index,
        // e(T') = 0, nothing to verify.
        let e_after = match cdawg::build(&ctx.edited) {
            Ok(g) => g.edge_count(),
            Err(_) => 0,
        };
        let record = EditRecord { text: t.clone(), op, e_before: e, e_after };
        let slot = worst_per_kind.entry(op.kind);
        match slot {
            std::collections::btree_map::Entry::Occupied(mut o) => {
                if record.ratio() > o.get().ratio() {
                    o.insert(record.clone());
                }
            }
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(record.clone());
            }
        }
        if verify_lemmas && !ctx.edited.is_empty() {
            let lemmas = verify_lemma_suite(&ctx);
            lemma_violations.extend(lemmas.violations());
        }
        records.push(record);
    }
    (StringSummary { text: t.clone(), e, worst_per_kind }, records, lemma_violations)
}

/// Configuration for [`exhaustive_scan`].
#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub max_n: usize,
    /// Alphabet the scanned texts range over.
    pub text_alphabet: Vec<u8>,
    /// Alphabet inserted/substituted characters range over; typically the
    /// text alphabet plus one fresh character.
    pub edit_alphabet: Vec<u8>,
    pub kinds: Vec<EditKind>,
    /// Additionally run the full lemma verifier on every edited context.
    pub verify_lemmas: bool,
    /// Wall-clock budget; on expiry remaining strings are skipped and the
    /// report is flagged incomplete.
    pub budget: Option<Duration>,
}

impl ScanConfig {
    pub fn new(max_n: usize, text_alphabet: &[u8]) -> Self {
        let mut edit_alphabet = text_alphabet.to_vec();
        edit_alphabet.push(text_alphabet.iter().copied().max().unwrap_or(b'a') + 1);
        ScanConfig {
            max_n,
            text_alphabet: text_alphabet.to_vec(),
            edit_alphabet,
            kinds: ALL_KINDS.to_vec(),
            verify_lemmas: false,
            budget: None,
        }
    }
}

fn all_strings(alphabet: &[u8], max_n: usize) -> Vec<Text> {
    let mut alpha = alphabet.to_vec();
    alpha.sort_unstable();
    alpha.dedup();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 1..=max_n {
        let mut next = Vec::with_capacity(layer.len() * alpha.len());
        for w in &layer {
            for &c in &alpha {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned().map(Text::new));
        layer = next;
    }
    out
}

/// Sweep every string over the text alphabet up to length `max_n` and every
/// edit of the requested kinds. Work parallelizes over strings; the merged
/// report is in enumeration order regardless of worker count.
pub fn exhaustive_scan(cfg: &ScanConfig) -> SensitivityReport {
    let strings = all_strings(&cfg.text_alphabet, cfg.max_n);
    let started = Instant::now();
    let scanned: Vec<Option<(StringSummary, Vec<EditRecord>, Vec<String>)>> = strings
        .par_iter()
        .map(|t| {
            if let Some(budget) = cfg.budget {
                if started.elapsed() > budget {
                    return None;
                }
            }
            Some(scan_string(t, &cfg.kinds, &cfg.edit_alphabet, cfg.verify_lemmas))
        })
        .collect();

    let mut report = SensitivityReport {
        records: Vec::new(),
        per_string: Vec::new(),
        worst: None,
        bound_violations: Vec::new(),
        lemma_violations: Vec::new(),
        scanned_strings: 0,
        scanned_edits: 0,
        complete: true,
    };
    for item in scanned {
        let Some((summary, records, lemma_violations)) = item else {
            report.complete = false;
            continue;
        };
        report.scanned_strings += 1;
        report.scanned_edits += records.len();
        for r in &records {
            if r.violates_bound() {
                report.bound_violations.push(r.clone());
            }
            let better = report.worst.as_ref().map_or(true, |w| r.ratio() > w.ratio());
            if better {
                report.worst = Some(r.clone());
            }
        }
        report.records.extend(records);
        report.lemma_violations.extend(lemma_violations);
        report.per_string.push(summary);
    }
    report
}
