//! A CDAWG substring index and an edit-sensitivity laboratory for its size.
//!
//! The compact directed acyclic word graph (CDAWG) of a text `T` is the
//! minimal DFA recognizing all substrings of `T`, with string-labeled edges.
//! Its size `e(T)` — the number of edges — is a repetitiveness measure, and
//! this crate studies how `e` reacts to a single-character edit: for every
//! insertion, deletion, or substitution producing `T'`, the bound
//! `e(T') ≤ 8·e(T) + 4` holds, and the crate verifies the combinatorial
//! machinery behind that bound empirically on exhaustive small-scale corpora.
//!
//! The crate splits into:
//!
//! * [`oracle`] — naive brute-force ground truth for maximality, `lrep`/
//!   `rrep`, out-degrees and `e(T)`;
//! * [`cdawg`] — the fast index: construction, pattern count/locate,
//!   serialization, DOT export;
//! * [`edits`] — the single-character edit model and the distance-1
//!   neighborhood;
//! * [`crossing`] — occurrences crossing the edited position, their `P`/`S`
//!   decompositions and divergence types;
//! * [`partition`] — the partition of the maximal repeats of `T'` into
//!   `N₁, N₂, N∨, N¬∨, Q>, Q≤`, the correspondence maps `U`/`H`/`I`/`K`
//!   into `M(T)`, and the lemma verifier;
//! * [`sensitivity`] — per-string and exhaustive sensitivity scans plus the
//!   classic string families (Fibonacci, Thue-Morse, `aⁿ⁻¹b`).
//!
//! A companion guide with worked examples lives in the `book/` directory of
//! the repository.
//!
//! ```
//! use cdawg_lab::{cdawg, edits, Text};
//! use cdawg_lab::edits::EditOp;
//!
//! let t = Text::from("abab");
//! let e_before = cdawg::build(&t).unwrap().edge_count();
//! let ctx = edits::apply_edit(&t, EditOp::insertion(3, b'c'), true).unwrap();
//! let e_after = cdawg::build(&ctx.edited).unwrap().edge_count();
//! assert_eq!((e_before, e_after), (3, 4));
//! assert!(e_after <= 8 * e_before + 4);
//! ```

pub mod cdawg;
pub mod crossing;
pub mod edits;
pub mod error;
pub mod oracle;
pub mod partition;
pub mod sensitivity;
pub mod text;

pub use error::{Error, Result};
pub use text::Text;

// Every code snippet in the guide is compiled and run as a doc-test, so the
// book cannot drift out of sync with the crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/index.md")]
    mod index {}
    #[doc = include_str!("../../../book/src/edits.md")]
    mod edits {}
    #[doc = include_str!("../../../book/src/partition.md")]
    mod partition {}
    #[doc = include_str!("../../../book/src/sensitivity.md")]
    mod sensitivity {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
