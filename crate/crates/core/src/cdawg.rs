//! CDAWG construction and queries.
//!
//! The CDAWG of `T` is the minimal DFA recognizing all substrings of `T`,
//! with string-labeled edges. Its internal nodes correspond one-to-one to
//! the maximal repeats of `T`, the source represents the empty string, the
//! sink represents `T` itself, and its size `e(T)` is the number of edges.
//!
//! Construction goes through the suffix tree: we insert every suffix of `T`
//! into a compacted trie (quadratic, desk-scale-honest), ensuring each
//! suffix ends at an explicit node so that the tree nodes are exactly the
//! right-maximal substrings (no sentinel is appended). Two tree nodes are
//! then merged into one CDAWG node when they lie on a suffix-link chain with
//! equal occurrence counts, which is equivalent to having equal end-position
//! sets. The longest string of each merged class is left-maximal, so the
//! resulting node set is exactly `M(T)`.
//!
//! ```
//! use cdawg_lab::{cdawg, Text};
//!
//! let g = cdawg::build(&Text::from("ababcababd")).unwrap();
//! assert_eq!(g.node_count(), 4);
//! assert_eq!(g.edge_count(), 9);
//! assert_eq!(g.count_pattern(&Text::from("ab")), 4);
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Text;

pub const FORMAT_VERSION: u32 = 1;

/// Basic size accounting for a built index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeStats {
    pub n: usize,
    pub edge_count: usize,
    pub node_count: usize,
    pub alphabet_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// Label is the span `text[label_start..=label_end]`, 1-based inclusive.
    pub label_start: usize,
    pub label_end: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    /// Length of the longest string of the node's class.
    pub canonical_len: usize,
    /// End position of one occurrence of that string in the text.
    pub canonical_end: usize,
    /// Number of ending positions of the class (= occurrence count).
    pub occurrence_count: usize,
    /// Whether the canonical string is a suffix of the text.
    pub is_suffix: bool,
    /// Out-edges, sorted by first label character.
    pub edges: Vec<Edge>,
}

/// An immutable CDAWG over a retained copy of the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cdawg {
    text: Text,
    nodes: Vec<Node>,
    source: usize,
    sink: usize,
}

// ---------------------------------------------------------------------------
// Suffix tree scaffolding (internal).

struct StNode {
    start: usize, // incoming edge label span, 1-based inclusive; root: (1, 0)
    end: usize,
    depth: usize, // string depth
    children: BTreeMap<u8, usize>,
    is_suffix: bool,
    count: usize,
    slink: usize,
}

struct SuffixTree {
    nodes: Vec<StNode>,
}

impl SuffixTree {
    fn build(t: &Text) -> SuffixTree {
        let n = t.len();
        let mut nodes = vec![StNode {
            start: 1,
            end: 0,
            depth: 0,
            children: BTreeMap::new(),
            is_suffix: true, // ε is a suffix of every string
            count: 0,
            slink: usize::MAX,
        }];
        for p in 1..=n {
            insert_suffix(&mut nodes, t, p);
        }
        let mut tree = SuffixTree { nodes };
        tree.fill_counts();
        tree.fill_slinks(t);
        tree
    }

    fn fill_counts(&mut self) {
        // Iterative post-order.
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![0usize];
        while let Some(u) = stack.pop() {
            order.push(u);
            stack.extend(self.nodes[u].children.values().copied());
        }
        for &u in order.iter().rev() {
            let child_sum: usize = self.nodes[u]
                .children
                .values()
                .map(|&v| self.nodes[v].count)
                .sum();
            self.nodes[u].count = child_sum + self.nodes[u].is_suffix as usize;
        }
    }

    fn fill_slinks(&mut self, t: &Text) {
        for u in 1..self.nodes.len() {
            let depth = self.nodes[u].depth;
            let end = self.nodes[u].end;
            // Node string is t[end-depth+1 ..= end]; walk its tail from root.
            let tail_start = end - depth + 2;
            let mut cur = 0usize;
            let mut consumed = 0usize;
            while consumed < depth - 1 {
                let c = t.at(tail_start + consumed);
                let child = *self.nodes[cur].children.get(&c).expect("suffix link walk");
                consumed += self.nodes[child].end - self.nodes[child].start + 1;
                cur = child;
            }
            debug_assert_eq!(consumed, depth - 1, "suffix link must land on a node");
            self.nodes[u].slink = cur;
        }
    }
}

fn insert_suffix(nodes: &mut Vec<StNode>, t: &Text, p: usize) {
    let n = t.len();
    let mut cur = 0usize;
    let mut i = p;
    loop {
        if i > n {
            nodes[cur].is_suffix = true;
            return;
        }
        let c = t.at(i);
        let Some(&child) = nodes[cur].children.get(&c) else {
            let leaf = nodes.len();
            let depth = nodes[cur].depth + (n - i + 1);
            nodes.push(StNode {
                start: i,
                end: n,
                depth,
                children: BTreeMap::new(),
                is_suffix: true,
                count: 0,
                slink: usize::MAX,
            });
            nodes[cur].children.insert(c, leaf);
            return;
        };
        let (s, e) = (nodes[child].start, nodes[child].end);
        let edge_len = e - s + 1;
        let remaining = n - i + 1;
        let mut q = 0usize;
        while q < edge_len && q < remaining && t.at(s + q) == t.at(i + q) {
            q += 1;
        }
        if q == edge_len {
            cur = child;
            i += edge_len;
            continue;
        }
        // Split the edge after q matched characters (q >= 1: first char matched).
        let mid = nodes.len();
        let mid_depth = nodes[cur].depth + q;
        nodes.push(StNode {
            start: s,
            end: s + q - 1,
            depth: mid_depth,
            children: BTreeMap::new(),
            is_suffix: false,
            count: 0,
            slink: usize::MAX,
        });
        nodes[child].start = s + q;
        let branch_char = t.at(s + q);
        nodes[mid].children.insert(branch_char, child);
        nodes[cur].children.insert(c, mid);
        if q == remaining {
            // The suffix ends exactly at the new node.
            nodes[mid].is_suffix = true;
        } else {
            let leaf = nodes.len();
            nodes.push(StNode {
                start: i + q,
                end: n,
                depth: mid_depth + (remaining - q),
                children: BTreeMap::new(),
                is_suffix: true,
                count: 0,
                slink: usize::MAX,
            });
            nodes[mid].children.insert(t.at(i + q), leaf);
        }
        return;
    }
}

// ---------------------------------------------------------------------------
// Construction.

/// Build the CDAWG of `t`. Rejects the empty text.
pub fn build(t: &Text) -> Result<Cdawg> {
    if t.is_empty() {
        return Err(Error::EmptyText);
    }
    let tree = SuffixTree::build(t);
    let st = &tree.nodes;

    // A tree node merges downward into a longer one when some node's suffix
    // link points at it with an equal occurrence count (equal end-pos sets).
    let mut absorbed_by: Vec<Option<usize>> = vec![None; st.len()];
    for v in 1..st.len() {
        let u = st[v].slink;
        if st[v].count == st[u].count {
            debug_assert!(absorbed_by[u].is_none(), "at most one equal-count suffix-link child");
            absorbed_by[u] = Some(v);
        }
    }
    let mut head: Vec<usize> = (0..st.len()).collect();
    // Longest first so head[v] is already resolved when we need it.
    let mut by_depth: Vec<usize> = (0..st.len()).collect();
    by_depth.sort_unstable_by(|&a, &b| st[b].depth.cmp(&st[a].depth));
    for &u in &by_depth {
        if let Some(v) = absorbed_by[u] {
            head[u] = head[v];
        }
    }

    // Deterministic node ids: sort class heads by (length, canonical string).
    let mut heads: Vec<usize> = (0..st.len()).filter(|&u| head[u] == u).collect();
    let canonical = |u: usize| -> Text {
        let d = st[u].depth;
        if d == 0 { Text::empty() } else { t.slice(st[u].end - d + 1, st[u].end) }
    };
    heads.sort_by(|&a, &b| (st[a].depth, canonical(a)).cmp(&(st[b].depth, canonical(b))));
    let mut id_of: Vec<usize> = vec![usize::MAX; st.len()];
    for (id, &u) in heads.iter().enumerate() {
        id_of[u] = id;
    }

    let mut nodes: Vec<Node> = heads
        .iter()
        .map(|&u| {
            let edges = st[u]
                .children
                .values()
                .map(|&v| Edge {
                    label_start: st[v].start,
                    label_end: st[v].end,
                    target: id_of[head[v]],
                })
                .collect();
            Node {
                canonical_len: st[u].depth,
                canonical_end: st[u].end,
                occurrence_count: 0,
                is_suffix: st[u].is_suffix,
                edges,
            }
        })
        .collect();

    // Occurrence counts propagate from the sink: each occurrence of a node's
    // class extends to a unique suffix, reached either here (suffix flag) or
    // through exactly one out-edge.
    for id in (0..nodes.len()).rev() {
        let sum: usize = nodes[id].edges.iter().map(|e| nodes[e.target].occurrence_count).sum();
        nodes[id].occurrence_count = sum + nodes[id].is_suffix as usize;
        debug_assert!(nodes[id].edges.iter().all(|e| e.target > id));
    }
    debug_assert!(heads
        .iter()
        .enumerate()
        .all(|(id, &u)| nodes[id].occurrence_count == st[u].count));

    let source = 0;
    let sink = nodes.len() - 1;
    debug_assert_eq!(nodes[source].canonical_len, 0);
    debug_assert_eq!(nodes[sink].canonical_len, t.len());
    Ok(Cdawg { text: t.clone(), nodes, source, sink })
}

// ---------------------------------------------------------------------------
// Queries.

impl Cdawg {
    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.edges.len()).sum()
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// The longest string of a node's class.
    pub fn canonical_string(&self, id: usize) -> Text {
        let n = &self.nodes[id];
        if n.canonical_len == 0 {
            Text::empty()
        } else {
            self.text.slice(n.canonical_end - n.canonical_len + 1, n.canonical_end)
        }
    }

    /// All canonical node strings; equals the maximal substrings of the text.
    pub fn canonical_strings(&self) -> Vec<Text> {
        (0..self.nodes.len()).map(|id| self.canonical_string(id)).collect()
    }

    pub fn stats(&self) -> SizeStats {
        SizeStats {
            n: self.text.len(),
            edge_count: self.edge_count(),
            node_count: self.node_count(),
            alphabet_size: self.text.alphabet().len(),
        }
    }

    fn label_at(&self, e: &Edge, offset: usize) -> u8 {
        self.text.at(e.label_start + offset)
    }

    /// Walk `p` from the source. Returns the node reached once the current
    /// edge is completed, plus how many label characters remain beyond `p`.
    fn locus(&self, p: &Text) -> Option<(usize, usize)> {
        let mut node = self.source;
        let mut q = 1usize;
        while q <= p.len() {
            let c = p.at(q);
            let edge = self.nodes[node]
                .edges
                .iter()
                .find(|e| self.label_at(e, 0) == c)?;
            let label_len = edge.label_end - edge.label_start + 1;
            let want = (p.len() - q + 1).min(label_len);
            for d in 0..want {
                if self.label_at(edge, d) != p.at(q + d) {
                    return None;
                }
            }
            if want < label_len {
                return Some((edge.target, label_len - want));
            }
            node = edge.target;
            q += label_len;
        }
        Some((node, 0))
    }

    /// Number of occurrences of `p` in the text (0 when absent).
    pub fn count_pattern(&self, p: &Text) -> usize {
        match self.locus(p) {
            Some((node, _)) => self.nodes[node].occurrence_count,
            None => 0,
        }
    }

    /// All 1-based start positions of `p`, ascending.
    ///
    /// Enumerates the continuations from the locus to the sink: each
    /// occurrence of `p` extends to a unique suffix of the text.
    pub fn locate_pattern(&self, p: &Text) -> Vec<usize> {
        let Some((node, extra)) = self.locus(p) else {
            return Vec::new();
        };
        let mut memo: Vec<Option<Vec<usize>>> = vec![None; self.nodes.len()];
        let lengths = self.suffix_path_lengths(node, &mut memo);
        let n = self.text.len();
        let mut starts: Vec<usize> = lengths
            .iter()
            .map(|len| n - (len + extra) - p.len() + 1)
            .collect();
        starts.sort_unstable();
        debug_assert!(starts.windows(2).all(|w| w[0] < w[1]));
        starts
    }

    /// Lengths of all label paths from `node` to the sink, plus 0 when the
    /// node's class itself ends a suffix. Nodes are in topological order, so
    /// plain recursion with memoization terminates.
    fn suffix_path_lengths(&self, node: usize, memo: &mut Vec<Option<Vec<usize>>>) -> Vec<usize> {
        if let Some(v) = &memo[node] {
            return v.clone();
        }
        let mut out = Vec::new();
        if self.nodes[node].is_suffix {
            out.push(0);
        }
        for e in &self.nodes[node].edges {
            let label_len = e.label_end - e.label_start + 1;
            for sub in self.suffix_path_lengths(e.target, memo) {
                out.push(sub + label_len);
            }
        }
        out.sort_unstable();
        memo[node] = Some(out.clone());
        out
    }

    // -----------------------------------------------------------------------
    // Export / serialization.

    /// DOT rendering with canonical node strings and edge label strings.
    pub fn export_dot(&self) -> String {
        fn escape(s: &str) -> String {
            s.replace('\\', "\\\\").replace('"', "\\\"")
        }
        let mut out = String::from("digraph cdawg {\n  rankdir=LR;\n");
        for id in 0..self.nodes.len() {
            let label = if id == self.source {
                "ε".to_string()
            } else {
                self.canonical_string(id).to_string()
            };
            let _ = writeln!(out, "  n{id} [label=\"{}\"];", escape(&label));
        }
        for (id, node) in self.nodes.iter().enumerate() {
            for e in &node.edges {
                let label = self.text.slice(e.label_start, e.label_end).to_string();
                let _ = writeln!(out, "  n{id} -> n{} [label=\"{}\"];", e.target, escape(&label));
            }
        }
        out.push_str("}\n");
        out
    }

    /// Self-describing serialized form; stable across identical inputs.
    pub fn serialize(&self) -> Vec<u8> {
        let doc = IndexDoc {
            format_version: FORMAT_VERSION,
            text: self.text.as_bytes().to_vec(),
            source: self.source,
            sink: self.sink,
            nodes: self.nodes.clone(),
        };
        serde_json::to_vec(&doc).expect("index serialization cannot fail")
    }

    /// Parse and validate a document produced by [`Cdawg::serialize`].
    pub fn deserialize(bytes: &[u8]) -> Result<Cdawg> {
        let doc: IndexDoc =
            serde_json::from_slice(bytes).map_err(|e| Error::Deserialize(e.to_string()))?;
        if doc.format_version != FORMAT_VERSION {
            return Err(Error::Deserialize(format!(
                "unsupported format_version {} (expected {FORMAT_VERSION})",
                doc.format_version
            )));
        }
        let text = Text::new(doc.text);
        let n = text.len();
        if doc.nodes.is_empty() || doc.source >= doc.nodes.len() || doc.sink >= doc.nodes.len() {
            return Err(Error::Deserialize("missing or out-of-range source/sink".into()));
        }
        for (id, node) in doc.nodes.iter().enumerate() {
            if node.canonical_len > 0 && (node.canonical_end > n || node.canonical_end < node.canonical_len) {
                return Err(Error::Deserialize(format!("node {id} span out of range")));
            }
            let mut first_chars = Vec::new();
            for e in &node.edges {
                if e.label_start < 1 || e.label_end > n || e.label_end < e.label_start {
                    return Err(Error::Deserialize(format!("edge span out of range at node {id}")));
                }
                if e.target >= doc.nodes.len() || e.target <= id {
                    return Err(Error::Deserialize(format!("edge target out of order at node {id}")));
                }
                first_chars.push(text.at(e.label_start));
            }
            first_chars.sort_unstable();
            let len = first_chars.len();
            first_chars.dedup();
            if first_chars.len() != len {
                return Err(Error::Deserialize(format!(
                    "node {id} is nondeterministic: duplicate first label character"
                )));
            }
        }
        Ok(Cdawg { text, nodes: doc.nodes, source: doc.source, sink: doc.sink })
    }
}

#[derive(Serialize, Deserialize)]
struct IndexDoc {
    format_version: u32,
    text: Vec<u8>,
    source: usize,
    sink: usize,
    nodes: Vec<Node>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    fn t(s: &str) -> Text {
        Text::from(s)
    }

    #[test]
    fn build_examples() {
        let g = build(&t("a")).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (2, 1));

        let g = build(&t("ababcababd")).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (4, 9));

        let g = build(&t("aaaa")).unwrap();
        assert_eq!((g.node_count(), g.edge_count()), (5, 4));

        assert!(build(&Text::empty()).is_err());
    }

    #[test]
    fn stats_examples() {
        let s = build(&t("ababcababd")).unwrap().stats();
        assert_eq!(s, SizeStats { n: 10, edge_count: 9, node_count: 4, alphabet_size: 4 });

        let s = build(&t("a")).unwrap().stats();
        assert_eq!(s, SizeStats { n: 1, edge_count: 1, node_count: 2, alphabet_size: 1 });

        // Square-free string: M = {ε, T}, so e = |alphabet|.
        let s = build(&t("abcdefgh")).unwrap().stats();
        assert_eq!(s.edge_count, 8);
        assert_eq!(s.node_count, 2);
    }

    #[test]
    fn node_set_matches_oracle() {
        for s in ["ababcababd", "aaaa", "banana", "abcabcabc", "mississippi"] {
            let text = t(s);
            let g = build(&text).unwrap();
            let got: Vec<Text> = g.canonical_strings();
            let want: Vec<Text> = {
                let mut v: Vec<Text> =
                    oracle::maximal_substrings(&text).iter().cloned().collect();
                v.sort_by_key(|w| (w.len(), w.clone()));
                v
            };
            assert_eq!(got, want, "node set mismatch for {s}");
            assert_eq!(g.edge_count(), oracle::cdawg_size(&text), "edge count mismatch for {s}");
        }
    }

    #[test]
    fn count_and_locate_examples() {
        let g = build(&t("ababcababd")).unwrap();
        assert_eq!(g.count_pattern(&t("ab")), 4);
        assert_eq!(g.locate_pattern(&t("ab")), vec![1, 3, 6, 8]);
        assert_eq!(g.count_pattern(&Text::empty()), 11);
        assert_eq!(g.count_pattern(&t("abc")), 1);
        assert_eq!(g.locate_pattern(&t("abc")), vec![3]);
        assert_eq!(g.count_pattern(&t("abcd")), 0);
        assert!(g.locate_pattern(&t("abcd")).is_empty());
        assert_eq!(g.locate_pattern(&t("ababcababd")), vec![1]);
    }

    #[test]
    fn queries_match_naive_scan() {
        for s in ["banana", "aabaabaaab", "abcabcabc", "aaaaa"] {
            let text = t(s);
            let g = build(&text).unwrap();
            for p in oracle::distinct_substrings(&text) {
                assert_eq!(g.locate_pattern(&p), oracle::occurrences(&text, &p), "{s} / {p:?}");
                assert_eq!(g.count_pattern(&p), oracle::occurrences(&text, &p).len());
            }
            assert_eq!(g.count_pattern(&t("zzz")), 0);
        }
    }

    #[test]
    fn round_trip_and_rejects_garbage() {
        let g = build(&t("ababcababd")).unwrap();
        let bytes = g.serialize();
        let g2 = Cdawg::deserialize(&bytes).unwrap();
        assert_eq!(g, g2);

        assert!(Cdawg::deserialize(b"not json").is_err());
        let mut doc: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
        doc["format_version"] = serde_json::json!(99);
        assert!(Cdawg::deserialize(&serde_json::to_vec(&doc).unwrap()).is_err());
    }

    #[test]
    fn dot_export_lists_every_node_and_edge() {
        let g = build(&t("a")).unwrap();
        let dot = g.export_dot();
        assert_eq!(dot.matches(" -> ").count(), 1);
        assert!(dot.contains("label=\"ε\""));

        let g = build(&t("ababcababd")).unwrap();
        let dot = g.export_dot();
        assert_eq!(dot.matches(" -> ").count(), g.edge_count());
        assert!(dot.contains("label=\"abab\""));
    }
}
