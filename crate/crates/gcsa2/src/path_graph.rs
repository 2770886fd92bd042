//! Semantic path graphs: nodes with explicit string keys, value sets, and
//! predecessor labels.
//!
//! This module is the correctness oracle for the succinct index. Everything
//! here favors clarity over speed and is size-capped; the scalable pipeline
//! lives in [`crate::construction`].

use std::collections::{BTreeSet, HashSet};

use crate::alphabet::{Symbol, SymbolSet, ENDMARKER};
use crate::graph::LabeledGraph;
use crate::{Error, Result};

/// Hard cap on oracle-side path graph sizes.
pub const ORACLE_NODE_CAP: usize = 10_000;

/// One path graph node: a key of length at most the order, the set of start
/// values of the paths it represents, and the labels preceding those paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathGraphNode {
    pub key: Vec<Symbol>,
    pub values: BTreeSet<u64>,
    pub preds: SymbolSet,
}

/// A path graph with key-sorted nodes. `edges` holds real edges between node
/// indices; the technical edge from the sink node (all-`$` key) to the source
/// node (`#...` key with the smallest padding value) is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathGraph {
    pub order: u64,
    pub nodes: Vec<PathGraphNode>,
    pub edges: Vec<(u32, u32)>,
}

/// True iff one sequence is a prefix of the other.
pub fn prefix_matches(a: &[Symbol], b: &[Symbol]) -> bool {
    let m = a.len().min(b.len());
    a[..m] == b[..m]
}

impl PathGraph {
    /// Builds the order-`k` de Bruijn graph of an augmented graph: one node
    /// per distinct `k`-mer of the padded maximal path labels, values per
    /// start nodes, edges per `(k+1)`-mer occurrences.
    pub fn build_debruijn(g: &LabeledGraph, k: u64, cap: u64) -> Result<PathGraph> {
        let records = g.enumerate_k_paths(k, k, cap)?;
        let mut nodes: Vec<PathGraphNode> = Vec::new();
        for rec in records {
            match nodes.last_mut() {
                Some(last) if last.key == rec.label => {
                    last.values.insert(rec.value);
                    last.preds = last.preds.union(rec.preds);
                }
                _ => nodes.push(PathGraphNode {
                    key: rec.label,
                    values: BTreeSet::from([rec.value]),
                    preds: rec.preds,
                }),
            }
        }
        if nodes.len() > ORACLE_NODE_CAP {
            return Err(Error::OracleCapExceeded { nodes: nodes.len(), cap: ORACLE_NODE_CAP });
        }
        let mut pg = PathGraph { order: k, nodes, edges: Vec::new() };
        pg.recompute_edges();
        Ok(pg)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Index of the sink node (key starting with `$`).
    pub fn sink_node(&self) -> u32 {
        debug_assert!(!self.nodes.is_empty() && self.nodes[0].key[0] == ENDMARKER);
        0
    }

    /// Index of the source node: the one holding the outermost padding value.
    pub fn source_node(&self) -> u32 {
        self.nodes
            .iter()
            .position(|n| n.values.contains(&0))
            .expect("path graph has no source node") as u32
    }

    /// Recomputes the edge set from keys and predecessor labels: `(u, v)` is
    /// an edge iff `label(u)` is among `v`'s predecessor labels and
    /// `label(u) . key(v)` prefix-matches `key(u)`. The technical edge into
    /// the source is excluded.
    pub fn recompute_edges(&mut self) {
        let source = self.source_node();
        let mut by_label: Vec<Vec<u32>> = vec![Vec::new(); crate::SIGMA];
        for (i, n) in self.nodes.iter().enumerate() {
            by_label[n.key[0].ordinal()].push(i as u32);
        }
        let mut edges = Vec::new();
        let mut probe = Vec::new();
        for (vi, v) in self.nodes.iter().enumerate() {
            for c in v.preds.iter() {
                if c == ENDMARKER && vi as u32 == source {
                    continue;
                }
                probe.clear();
                probe.push(c);
                probe.extend_from_slice(&v.key);
                for &ui in &by_label[c.ordinal()] {
                    if prefix_matches(&probe, &self.nodes[ui as usize].key) {
                        edges.push((ui, vi as u32));
                    }
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        self.edges = edges;
    }

    /// Applies one pruning step: all nodes having `prefix` as a proper prefix
    /// of their key are replaced by a single node with key `prefix`. Refuses
    /// unless the affected nodes all carry the same value set.
    pub fn prune(&self, prefix: &[Symbol]) -> Result<PathGraph> {
        let mut nodes = self.nodes.clone();
        Self::prune_nodes(&mut nodes, prefix)?;
        Self::refresh_sink_preds(&mut nodes, self.order);
        let mut pg = PathGraph { order: self.order, nodes, edges: Vec::new() };
        pg.recompute_edges();
        Ok(pg)
    }

    /// An all-`$` key shorter than the order is also preceded by `$` in the
    /// padded collection; per-window predecessor unions cannot see those
    /// occurrences, so they are restored after pruning.
    fn refresh_sink_preds(nodes: &mut [PathGraphNode], order: u64) {
        if let Some(sink) = nodes.first_mut() {
            if sink.key[0] == ENDMARKER && (sink.key.len() as u64) < order {
                sink.preds.insert(ENDMARKER);
            }
        }
    }

    fn prune_nodes(nodes: &mut Vec<PathGraphNode>, prefix: &[Symbol]) -> Result<()> {
        if prefix.is_empty() {
            return Err(Error::PruneRefused {
                prefix: String::new(),
                reason: "prefix must be nonempty".into(),
            });
        }
        let lo = nodes.partition_point(|n| n.key.as_slice() < prefix);
        let mut hi = lo;
        while hi < nodes.len() && nodes[hi].key.starts_with(prefix) {
            hi += 1;
        }
        let pretty = crate::alphabet::seq_to_string(prefix);
        if lo == hi {
            return Err(Error::PruneRefused {
                prefix: pretty,
                reason: "no key has it as a proper prefix".into(),
            });
        }
        debug_assert!(nodes[lo..hi].iter().all(|n| n.key.len() > prefix.len()));
        if nodes[lo + 1..hi].iter().any(|n| n.values != nodes[lo].values) {
            return Err(Error::PruneRefused {
                prefix: pretty,
                reason: "affected nodes have different value sets".into(),
            });
        }
        let mut merged = PathGraphNode {
            key: prefix.to_vec(),
            values: nodes[lo].values.clone(),
            preds: SymbolSet::EMPTY,
        };
        for n in &nodes[lo..hi] {
            merged.preds = merged.preds.union(n.preds);
        }
        nodes.splice(lo..hi, [merged]);
        Ok(())
    }

    /// Repeated pruning until no prefix satisfies the precondition. Candidate
    /// prefixes are processed in decreasing length order (lexicographic
    /// within a length), which reaches the fixed point in one pass.
    pub fn maximally_prune(&self) -> PathGraph {
        let mut candidates: HashSet<Vec<Symbol>> = HashSet::new();
        for n in &self.nodes {
            for len in 1..n.key.len() {
                candidates.insert(n.key[..len].to_vec());
            }
        }
        let mut candidates: Vec<Vec<Symbol>> = candidates.into_iter().collect();
        candidates.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut nodes = self.nodes.clone();
        for prefix in &candidates {
            let _ = Self::prune_nodes(&mut nodes, prefix);
        }
        Self::refresh_sink_preds(&mut nodes, self.order);
        let mut pg = PathGraph { order: self.order, nodes, edges: Vec::new() };
        pg.recompute_edges();
        pg
    }

    /// All nodes from which a path labeled `pattern` starts, by explicit path
    /// search over the real edges.
    pub fn oracle_find(&self, pattern: &[Symbol]) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        if pattern.is_empty() {
            out.extend(0..self.nodes.len() as u32);
            return out;
        }
        let succ = self.successor_lists();
        for start in 0..self.nodes.len() as u32 {
            if self.nodes[start as usize].key[0] != pattern[0] {
                continue;
            }
            let mut stack = vec![(start, 1usize)];
            'walk: while let Some((v, matched)) = stack.pop() {
                if matched == pattern.len() {
                    out.insert(start);
                    break 'walk;
                }
                for &s in &succ[v as usize] {
                    if self.nodes[s as usize].key[0] == pattern[matched] {
                        stack.push((s, matched + 1));
                    }
                }
            }
        }
        out
    }

    /// Union of the value sets over [`Self::oracle_find`].
    pub fn locate_via_find(&self, pattern: &[Symbol]) -> BTreeSet<u64> {
        self.oracle_find(pattern)
            .into_iter()
            .flat_map(|v| self.nodes[v as usize].values.iter().copied())
            .collect()
    }

    fn successor_lists(&self) -> Vec<Vec<u32>> {
        let mut succ = vec![Vec::new(); self.nodes.len()];
        for &(u, v) in &self.edges {
            succ[u as usize].push(v);
        }
        succ
    }

    /// No two distinct keys prefix-match.
    pub fn is_prefix_free(&self) -> bool {
        self.nodes
            .windows(2)
            .all(|w| !prefix_matches(&w[0].key, &w[1].key))
    }

    /// The maximal-pruning key-length bound: `|key(u)| <= |key(v)| + 1` on
    /// every edge, including the technical one.
    pub fn short_keys_bound_holds(&self) -> bool {
        let technical = (self.sink_node(), self.source_node());
        self.edges
            .iter()
            .chain(std::iter::once(&technical))
            .all(|&(u, v)| {
                self.nodes[u as usize].key.len() <= self.nodes[v as usize].key.len() + 1
            })
    }

    /// True iff no prefix satisfies the pruning precondition.
    pub fn no_prunable_prefix(&self) -> bool {
        let mut candidates: HashSet<Vec<Symbol>> = HashSet::new();
        for n in &self.nodes {
            for len in 1..n.key.len() {
                candidates.insert(n.key[..len].to_vec());
            }
        }
        let mut nodes = self.nodes.clone();
        for prefix in candidates {
            if Self::prune_nodes(&mut nodes, &prefix).is_ok() {
                return false;
            }
        }
        true
    }

    /// Debug dump: one `key<TAB>{values}<TAB>{pred_labels}` line per node in
    /// key-sorted order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let values: Vec<String> = n.values.iter().map(|v| v.to_string()).collect();
            let preds: Vec<String> = n.preds.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!(
                "{}\t{{{}}}\t{{{}}}\n",
                crate::alphabet::seq_to_string(&n.key),
                values.join(","),
                preds.join(",")
            ));
        }
        out
    }
}

/// Ground truth for locate: the exact start-node set of paths labeled
/// `pattern` in the input graph, as values of the given order.
pub fn oracle_locate(g: &LabeledGraph, pattern: &[Symbol], order: u64) -> BTreeSet<u64> {
    let vmap = g.value_map(order);
    let mut out = BTreeSet::new();
    if pattern.is_empty() {
        // Every position trivially matches; restrict to real nodes, mirroring
        // what value queries can reach.
        out.extend((0..g.real_count()).map(|v| vmap.real(v)));
        return out;
    }
    for v in 0..g.real_count() {
        if g.verify_match(v, pattern) {
            out.insert(vmap.real(v));
        }
    }
    out
}
