//! Input graphs: one character label per node, parsed from TSV or a GFA
//! subset, augmented with a source and a sink, and enumerated as fixed-length
//! paths for index construction.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read};

use crate::alphabet::{Symbol, SymbolSet, ENDMARKER, SOURCE_MARKER};
use crate::{Error, Result};

/// Input formats accepted by [`LabeledGraph::parse`].
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    /// `N <id> <char>` and `E <from> <to>` lines, tab-separated, `#!` comments.
    Tsv,
    /// GFA subset: `S <name> <sequence>` and `L <from> + <to> + 0M` only.
    Gfa,
    /// Decide from the first record line.
    Auto,
}

/// Maps graph nodes to the integer values stored in the index.
///
/// For an index of order `P`, source paddings `s:j` occupy ids `(P-1)-j`,
/// real nodes occupy `P..P+real_count` in chain order, and the sink comes
/// last. Along unary chains consecutive nodes then have consecutive values,
/// which is what makes sample-based locate work.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct ValueMap {
    pub order: u64,
    pub real_count: u64,
}

impl ValueMap {
    pub fn real(&self, graph_id: u32) -> u64 {
        debug_assert!((graph_id as u64) < self.real_count);
        self.order + graph_id as u64
    }

    /// Value of the padding node `s:j` (`s:0` is the source itself).
    pub fn source_pad(&self, j: u64) -> u64 {
        debug_assert!(j < self.order);
        self.order - 1 - j
    }

    pub fn sink(&self) -> u64 {
        self.order + self.real_count
    }

    pub fn total_values(&self) -> u64 {
        self.order + self.real_count + 1
    }

    /// Inverse mapping for real nodes.
    pub fn to_real(&self, value: u64) -> Option<u32> {
        (value >= self.order && value < self.order + self.real_count)
            .then(|| (value - self.order) as u32)
    }
}

/// A path of fixed length extracted from the graph: its label, the value of
/// its start node, the labels of the start node's predecessors, and the value
/// of one node the path can be extended with (`None` when it cannot).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathStub {
    pub label: Vec<Symbol>,
    pub value: u64,
    pub ext: Option<u64>,
    pub preds: SymbolSet,
}

/// A directed graph with one alphabet character per node.
///
/// Real nodes have contiguous ids assigned in chain order, so that along any
/// unary chain (sole out-edge of `u`, sole in-edge of `v`) `v = u + 1`
/// whenever the chain structure permits it. [`LabeledGraph::augment`] appends
/// a source (label `#`) and sink (label `$`); the technical edge from the
/// sink back to the source is implicit and never traversed by enumeration.
#[derive(Clone, Debug)]
pub struct LabeledGraph {
    labels: Vec<Symbol>,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
    source: Option<u32>,
    sink: Option<u32>,
}

/// Position in the padded walk space: `#` paddings before the source, real
/// nodes, `$` paddings after the sink.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum WalkNode {
    SrcPad(u64),
    Graph(u32),
    SinkPad(u64),
}

impl LabeledGraph {
    pub fn new(labels: Vec<Symbol>, edges: &[(u32, u32)]) -> Result<LabeledGraph> {
        let n = labels.len();
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("edge ({u}, {v}) references a missing node"),
                });
            }
            out[u as usize].push(v);
            inn[v as usize].push(u);
        }
        for adj in out.iter_mut().chain(inn.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }
        Ok(LabeledGraph { labels, out, inn, source: None, sink: None })
    }

    pub fn parse(input: impl Read, format: GraphFormat) -> Result<LabeledGraph> {
        let mut lines = Vec::new();
        for (no, line) in BufReader::new(input).lines().enumerate() {
            lines.push((no + 1, line?));
        }
        let format = match format {
            GraphFormat::Auto => {
                let first = lines
                    .iter()
                    .map(|(_, l)| l.trim())
                    .find(|l| !l.is_empty() && !l.starts_with("#!"));
                match first.and_then(|l| l.chars().next()) {
                    Some('S') | Some('L') | Some('H') => GraphFormat::Gfa,
                    _ => GraphFormat::Tsv,
                }
            }
            f => f,
        };
        match format {
            GraphFormat::Tsv => Self::parse_tsv(&lines),
            GraphFormat::Gfa => Self::parse_gfa(&lines),
            GraphFormat::Auto => unreachable!(),
        }
    }

    fn node_symbol(line: usize, c: char) -> Result<Symbol> {
        let sym = Symbol::from_char(c).map_err(|_| Error::Parse {
            line,
            msg: format!("unknown symbol {c:?}"),
        })?;
        if sym.is_technical() {
            return Err(Error::Parse {
                line,
                msg: format!("label {c:?} is reserved for the source/sink"),
            });
        }
        Ok(sym)
    }

    fn parse_tsv(lines: &[(usize, String)]) -> Result<LabeledGraph> {
        let mut ids: HashMap<String, u32> = HashMap::new();
        let mut labels = Vec::new();
        let mut raw_edges: Vec<(usize, String, String)> = Vec::new();
        for (no, line) in lines {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with("#!") {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.as_slice() {
                ["N", id, label] => {
                    let mut chars = label.chars();
                    let (Some(c), None) = (chars.next(), chars.next()) else {
                        return Err(Error::Parse {
                            line: *no,
                            msg: format!("node label must be a single character, got {label:?}"),
                        });
                    };
                    let sym = Self::node_symbol(*no, c)?;
                    if ids.insert(id.to_string(), labels.len() as u32).is_some() {
                        return Err(Error::Parse { line: *no, msg: format!("duplicate node id {id:?}") });
                    }
                    labels.push(sym);
                }
                ["E", from, to] => raw_edges.push((*no, from.to_string(), to.to_string())),
                _ => {
                    return Err(Error::Parse {
                        line: *no,
                        msg: format!("expected 'N <id> <char>' or 'E <from> <to>', got {line:?}"),
                    })
                }
            }
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (no, from, to) in raw_edges {
            let lookup = |name: &str| {
                ids.get(name).copied().ok_or_else(|| Error::Parse {
                    line: no,
                    msg: format!("edge references unknown node {name:?}"),
                })
            };
            edges.push((lookup(&from)?, lookup(&to)?));
        }
        Self::chain_ordered(labels, &edges)
    }

    fn parse_gfa(lines: &[(usize, String)]) -> Result<LabeledGraph> {
        // Segment name -> (first node id, last node id) of its expanded chain.
        let mut segments: HashMap<String, (u32, u32)> = HashMap::new();
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        let mut links: Vec<(usize, Vec<String>)> = Vec::new();
        for (no, line) in lines {
            let line = line.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match fields.first().copied() {
                Some("H") => continue,
                Some("S") => {
                    if fields.len() < 3 {
                        return Err(Error::Parse { line: *no, msg: "malformed S line".into() });
                    }
                    let name = fields[1];
                    let seq = fields[2];
                    if seq.is_empty() {
                        return Err(Error::Parse {
                            line: *no,
                            msg: format!("segment {name:?} has an empty sequence"),
                        });
                    }
                    let first = labels.len() as u32;
                    for c in seq.chars() {
                        labels.push(Self::node_symbol(*no, c)?);
                    }
                    let last = labels.len() as u32 - 1;
                    // Consecutive ids within the segment.
                    for id in first..last {
                        edges.push((id, id + 1));
                    }
                    if segments.insert(name.to_string(), (first, last)).is_some() {
                        return Err(Error::Parse {
                            line: *no,
                            msg: format!("duplicate segment id {name:?}"),
                        });
                    }
                }
                Some("L") => {
                    links.push((*no, fields.iter().map(|s| s.to_string()).collect()));
                }
                Some(other) => {
                    return Err(Error::Parse {
                        line: *no,
                        msg: format!("unsupported GFA record type {other:?} (only S and L)"),
                    })
                }
                None => continue,
            }
        }
        for (no, fields) in links {
            if fields.len() < 6 || fields[2] != "+" || fields[4] != "+" || fields[5] != "0M" {
                return Err(Error::Parse {
                    line: no,
                    msg: "only 'L <from> + <to> + 0M' links are supported".into(),
                });
            }
            let lookup = |name: &str| {
                segments.get(name).copied().ok_or_else(|| Error::Parse {
                    line: no,
                    msg: format!("link references unknown segment {name:?}"),
                })
            };
            let (_, from_last) = lookup(&fields[1])?;
            let (to_first, _) = lookup(&fields[3])?;
            edges.push((from_last, to_first));
        }
        Self::chain_ordered(labels, &edges)
    }

    /// Reassigns node ids so that unary chains get consecutive ids.
    fn chain_ordered(labels: Vec<Symbol>, edges: &[(u32, u32)]) -> Result<LabeledGraph> {
        let g = Self::new(labels, edges)?;
        let n = g.labels.len();
        let chain_next = |u: usize| -> Option<u32> {
            if g.out[u].len() != 1 {
                return None;
            }
            let v = g.out[u][0];
            (g.inn[v as usize].len() == 1).then_some(v)
        };
        let mut order: Vec<u32> = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        // Chain heads first, then entries into leftover pure cycles.
        for pass in 0..2 {
            for start in 0..n {
                if visited[start] {
                    continue;
                }
                let is_head = g.inn[start].len() != 1
                    || g.out[g.inn[start][0] as usize].len() != 1;
                if pass == 0 && !is_head {
                    continue;
                }
                let mut cur = start;
                loop {
                    visited[cur] = true;
                    order.push(cur as u32);
                    match chain_next(cur) {
                        Some(v) if !visited[v as usize] => cur = v as usize,
                        _ => break,
                    }
                }
            }
        }
        let mut remap = vec![0u32; n];
        for (new_id, &old) in order.iter().enumerate() {
            remap[old as usize] = new_id as u32;
        }
        let labels = order.iter().map(|&old| g.labels[old as usize]).collect();
        let edges: Vec<(u32, u32)> = edges
            .iter()
            .map(|&(u, v)| (remap[u as usize], remap[v as usize]))
            .collect();
        Self::new(labels, &edges)
    }

    pub fn is_augmented(&self) -> bool {
        self.source.is_some()
    }

    /// Number of nodes excluding the source and sink.
    pub fn real_count(&self) -> u32 {
        if self.is_augmented() {
            self.labels.len() as u32 - 2
        } else {
            self.labels.len() as u32
        }
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn source(&self) -> u32 {
        self.source.expect("graph is not augmented")
    }

    pub fn sink(&self) -> u32 {
        self.sink.expect("graph is not augmented")
    }

    pub fn label(&self, v: u32) -> Symbol {
        self.labels[v as usize]
    }

    pub fn out_edges(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn in_edges(&self, v: u32) -> &[u32] {
        &self.inn[v as usize]
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|adj| adj.len()).sum()
    }

    /// Adds the source and sink. The source gets edges to every node without
    /// incoming edges and the sink from every node without outgoing edges;
    /// both exist even when no node needs attachment. The technical edge
    /// `(sink, source)` is implicit.
    pub fn augment(&mut self) {
        assert!(!self.is_augmented(), "graph is already augmented");
        let real = self.labels.len() as u32;
        let source = real;
        let sink = real + 1;
        self.labels.push(SOURCE_MARKER);
        self.labels.push(ENDMARKER);
        self.out.push(Vec::new());
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        self.inn.push(Vec::new());
        for v in 0..real {
            if self.inn[v as usize].is_empty() {
                self.out[source as usize].push(v);
                self.inn[v as usize].push(source);
            }
            if self.out[v as usize].is_empty() {
                self.out[v as usize].push(sink);
                self.inn[sink as usize].push(v);
            }
        }
        self.source = Some(source);
        self.sink = Some(sink);
    }

    /// Predecessors of `v` with label `c`, over real edges only.
    pub fn pred(&self, v: u32, c: Symbol) -> Vec<u32> {
        self.inn[v as usize]
            .iter()
            .copied()
            .filter(|&u| self.labels[u as usize] == c)
            .collect()
    }

    pub fn value_map(&self, order: u64) -> ValueMap {
        ValueMap { order, real_count: self.real_count() as u64 }
    }

    fn walk_label(&self, w: WalkNode) -> Symbol {
        match w {
            WalkNode::SrcPad(_) => SOURCE_MARKER,
            WalkNode::SinkPad(_) => ENDMARKER,
            WalkNode::Graph(v) => self.labels[v as usize],
        }
    }

    fn walk_value(&self, w: WalkNode, vmap: &ValueMap) -> u64 {
        match w {
            WalkNode::SrcPad(j) => vmap.source_pad(j),
            WalkNode::SinkPad(_) => vmap.sink(),
            WalkNode::Graph(v) => {
                if v == self.source() {
                    vmap.source_pad(0)
                } else if v == self.sink() {
                    vmap.sink()
                } else {
                    vmap.real(v)
                }
            }
        }
    }

    fn walk_successors(&self, w: WalkNode, pad: u64, buf: &mut Vec<WalkNode>) {
        buf.clear();
        match w {
            WalkNode::SrcPad(1) => buf.push(WalkNode::Graph(self.source())),
            WalkNode::SrcPad(j) => buf.push(WalkNode::SrcPad(j - 1)),
            WalkNode::Graph(v) if v == self.sink() => {
                if pad >= 2 {
                    buf.push(WalkNode::SinkPad(1));
                }
            }
            WalkNode::Graph(v) => {
                buf.extend(self.out[v as usize].iter().map(|&s| WalkNode::Graph(s)));
            }
            WalkNode::SinkPad(j) => {
                if j < pad - 1 {
                    buf.push(WalkNode::SinkPad(j + 1));
                }
            }
        }
    }

    /// Predecessor labels of a walk start. The padding node farthest from the
    /// source has the sink as its technical predecessor, so its set is `{$}`.
    fn walk_preds(&self, w: WalkNode, pad: u64) -> SymbolSet {
        let mut set = SymbolSet::EMPTY;
        match w {
            WalkNode::SrcPad(j) if j == pad - 1 => set.insert(ENDMARKER),
            WalkNode::SrcPad(_) => set.insert(SOURCE_MARKER),
            WalkNode::SinkPad(_) => set.insert(ENDMARKER),
            WalkNode::Graph(v) => {
                if v == self.source() {
                    if pad == 1 {
                        set.insert(ENDMARKER);
                    } else {
                        set.insert(SOURCE_MARKER);
                    }
                } else {
                    for &u in &self.inn[v as usize] {
                        set.insert(self.labels[u as usize]);
                    }
                }
            }
        }
        set
    }

    /// Walk starts for window enumeration. Paths only begin at the source or
    /// end at the sink when a real path does, so a dead-ended source or sink
    /// contributes no windows of its own.
    fn walk_starts(&self, pad: u64) -> Vec<WalkNode> {
        let src_live = !self.out[self.source() as usize].is_empty();
        let sink_live = !self.inn[self.sink() as usize].is_empty();
        let mut starts: Vec<WalkNode> = Vec::new();
        if src_live {
            for j in (1..pad).rev() {
                starts.push(WalkNode::SrcPad(j));
            }
        }
        for v in 0..self.labels.len() as u32 {
            if (v == self.source() && !src_live) || (v == self.sink() && !sink_live) {
                continue;
            }
            starts.push(WalkNode::Graph(v));
        }
        if sink_live {
            starts.extend((1..pad).map(WalkNode::SinkPad));
        }
        starts
    }

    /// When the source has no outgoing edge or the sink no incoming one, the
    /// collection still carries the technical sequence `#^pad $^pad`, keeping
    /// the source and sink represented with all degrees at least one. Returns
    /// its windows, or none when both sides are attached.
    fn marker_windows(&self, k: u64, pad: u64) -> Vec<PathStub> {
        let src_live = !self.out[self.source() as usize].is_empty();
        let sink_live = !self.inn[self.sink() as usize].is_empty();
        if src_live && sink_live {
            return Vec::new();
        }
        let vmap = self.value_map(pad);
        let len = 2 * pad;
        let label_at = |p: u64| if p < pad { SOURCE_MARKER } else { ENDMARKER };
        let value_at = |p: u64| if p < pad { vmap.source_pad(pad - 1 - p) } else { vmap.sink() };
        let mut out = Vec::new();
        for p in 0..=len - k {
            let mut preds = SymbolSet::EMPTY;
            if p == 0 {
                preds.insert(ENDMARKER);
            } else {
                preds.insert(label_at(p - 1));
            }
            out.push(PathStub {
                label: (p..p + k).map(label_at).collect(),
                value: value_at(p),
                ext: (p + k < len).then(|| value_at(p + k)),
                preds,
            });
        }
        out
    }

    /// Enumerates every path of length `k` in the graph padded per the
    /// `pad`-collection: `pad - 1` repeated `#` before the source and as many
    /// `$` after the sink. One record is produced per (path, extension node)
    /// pair; paths in cyclic graphs may revisit nodes. Results are sorted and
    /// deduplicated. Fails once more than `cap` records have been produced.
    pub fn enumerate_k_paths(&self, k: u64, pad: u64, cap: u64) -> Result<Vec<PathStub>> {
        assert!(self.is_augmented(), "augment the graph before enumeration");
        assert!(k >= 1 && pad >= k, "need pad order >= k >= 1");
        let vmap = self.value_map(pad);
        let starts = self.walk_starts(pad);

        let mut produced = 0u64;
        let mut records = self.marker_windows(k, pad);
        let mut succ_buf = Vec::new();
        // DFS stack of (node, depth); labels[0..depth] holds the walk so far.
        let mut stack: Vec<(WalkNode, usize)> = Vec::new();
        let mut walk: Vec<WalkNode> = vec![WalkNode::SrcPad(1); k as usize];
        for &start in &starts {
            stack.push((start, 0));
            while let Some((w, depth)) = stack.pop() {
                walk[depth] = w;
                if depth + 1 == k as usize {
                    let label: Vec<Symbol> =
                        walk.iter().map(|&x| self.walk_label(x)).collect();
                    let value = self.walk_value(start, &vmap);
                    let preds = self.walk_preds(start, pad);
                    self.walk_successors(w, pad, &mut succ_buf);
                    let exts: Vec<Option<u64>> = if succ_buf.is_empty() {
                        vec![None]
                    } else {
                        succ_buf.iter().map(|&s| Some(self.walk_value(s, &vmap))).collect()
                    };
                    for ext in exts {
                        produced += 1;
                        if produced > cap {
                            return Err(Error::PathCapExceeded { cap });
                        }
                        records.push(PathStub { label: label.clone(), value, ext, preds });
                    }
                } else {
                    self.walk_successors(w, pad, &mut succ_buf);
                    for &s in &succ_buf {
                        stack.push((s, depth + 1));
                    }
                }
            }
        }
        records.sort_unstable();
        records.dedup();
        Ok(records)
    }

    /// Enumerates the distinct labels of length-`k` paths (padded as in
    /// [`Self::enumerate_k_paths`]). Used for k-mer counting.
    pub fn count_distinct_k_labels(&self, k: u64, pad: u64, cap: u64) -> Result<u64> {
        use std::collections::HashSet;
        assert!(self.is_augmented());
        let mut labels: HashSet<Vec<Symbol>> = HashSet::new();
        for stub in self.marker_windows(k, pad) {
            labels.insert(stub.label);
        }
        let starts = self.walk_starts(pad);
        let mut steps = 0u64;
        let mut succ_buf = Vec::new();
        let mut stack: Vec<(WalkNode, usize)> = Vec::new();
        let mut walk: Vec<WalkNode> = vec![WalkNode::SrcPad(1); k as usize];
        for &start in &starts {
            stack.push((start, 0));
            while let Some((w, depth)) = stack.pop() {
                steps += 1;
                if steps > cap.saturating_mul(k) {
                    return Err(Error::PathCapExceeded { cap });
                }
                walk[depth] = w;
                if depth + 1 == k as usize {
                    labels.insert(walk.iter().map(|&x| self.walk_label(x)).collect());
                } else {
                    self.walk_successors(w, pad, &mut succ_buf);
                    for &s in &succ_buf {
                        stack.push((s, depth + 1));
                    }
                }
            }
        }
        Ok(labels.len() as u64)
    }

    /// True iff a path labeled `pattern` starts at the real node `start`,
    /// found by depth-first search over real edges.
    pub fn verify_match(&self, start: u32, pattern: &[Symbol]) -> bool {
        if pattern.is_empty() {
            return true;
        }
        if self.labels[start as usize] != pattern[0] {
            return false;
        }
        let mut stack = vec![(start, 1usize)];
        while let Some((v, matched)) = stack.pop() {
            if matched == pattern.len() {
                return true;
            }
            for &s in &self.out[v as usize] {
                if self.labels[s as usize] == pattern[matched] {
                    stack.push((s, matched + 1));
                }
            }
        }
        false
    }

    /// Weakly connected components over real nodes and real edges, ignoring
    /// the source and sink. Returns `(component_count, component_of_node)`.
    pub fn components(&self) -> (u32, Vec<u32>) {
        let real = self.real_count() as usize;
        let mut comp = vec![u32::MAX; real];
        let mut count = 0;
        for start in 0..real {
            if comp[start] != u32::MAX {
                continue;
            }
            let mut stack = vec![start as u32];
            comp[start] = count;
            while let Some(v) = stack.pop() {
                let neighbors = self.out[v as usize]
                    .iter()
                    .chain(self.inn[v as usize].iter());
                for &w in neighbors {
                    if (w as usize) < real && comp[w as usize] == u32::MAX {
                        comp[w as usize] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count.max(1), comp)
    }
}

pub use crate::alphabet::reverse_complement;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::{pattern_from_str, seq_to_string};
    use crate::test_util::g2;

    fn labels_of(records: &[PathStub]) -> Vec<String> {
        let mut v: Vec<String> = records.iter().map(|r| seq_to_string(&r.label)).collect();
        v.sort();
        v.dedup();
        v
    }

    #[test]
    fn tsv_parse_and_augment_counts() {
        let g = g2();
        assert_eq!(g.real_count(), 4);
        assert_eq!(g.label(0).to_char(), 'A');
        // 4 real edges + s->A + T->t
        assert_eq!(g.edge_count(), 6);
        assert_eq!(g.out_edges(g.source()), &[0]);
    }

    #[test]
    fn augment_two_node_chain() {
        let tsv = "N\t1\tA\nN\t2\tC\nE\t1\t2\n";
        let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
        g.augment();
        // s->A, A->C, C->t plus the implicit (t, s).
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn augment_pure_cycle_and_empty() {
        let tsv = "N\t1\tA\nN\t2\tC\nE\t1\t2\nE\t2\t1\n";
        let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
        g.augment();
        assert!(g.out_edges(g.source()).is_empty());
        assert!(g.in_edges(g.sink()).is_empty());

        let mut empty = LabeledGraph::parse(&b""[..], GraphFormat::Tsv).unwrap();
        empty.augment();
        assert_eq!(empty.node_count(), 2);
        assert_eq!(empty.edge_count(), 0);
    }

    #[test]
    fn gfa_segments_expand_to_chains() {
        let gfa = "H\tVN:Z:1.0\nS\t1\tACT\nS\t2\tG\nL\t1\t+\t2\t+\t0M\n";
        let g = LabeledGraph::parse(gfa.as_bytes(), GraphFormat::Auto).unwrap();
        assert_eq!(g.real_count(), 4);
        assert_eq!(seq_to_string(&(0..4).map(|i| g.label(i)).collect::<Vec<_>>()), "ACTG");
        // Chain ids consecutive within the segment.
        assert_eq!(g.out_edges(0), &[1]);
        assert_eq!(g.out_edges(1), &[2]);
        assert_eq!(g.out_edges(2), &[3]);
    }

    #[test]
    fn gfa_rejects_reverse_strand_and_overlap() {
        for bad in [
            "S\t1\tA\nS\t2\tC\nL\t1\t-\t2\t+\t0M\n",
            "S\t1\tA\nS\t2\tC\nL\t1\t+\t2\t+\t3M\n",
            "S\t1\tA\nP\tx\t1+\t*\n",
        ] {
            assert!(LabeledGraph::parse(bad.as_bytes(), GraphFormat::Gfa).is_err(), "{bad}");
        }
    }

    #[test]
    fn parse_errors_are_reported() {
        assert!(LabeledGraph::parse(&b"N\t1\tZ\n"[..], GraphFormat::Tsv).is_err());
        assert!(LabeledGraph::parse(&b"N\t1\tA\nE\t1\t9\n"[..], GraphFormat::Tsv).is_err());
        assert!(LabeledGraph::parse(&b"N\t1\tA\nN\t1\tC\n"[..], GraphFormat::Tsv).is_err());
        assert!(LabeledGraph::parse(&b"N\t1\t$\n"[..], GraphFormat::Tsv).is_err());
    }

    #[test]
    fn pred_excludes_technical_edge() {
        let g = g2();
        let c = crate::alphabet::C;
        let a = crate::alphabet::A;
        assert_eq!(g.pred(3, c), vec![1]);
        assert_eq!(g.pred(3, a), Vec::<u32>::new());
        assert_eq!(g.pred(g.source(), ENDMARKER), Vec::<u32>::new());
    }

    #[test]
    fn enumerate_g2_order3_labels() {
        let g = g2();
        let records = g.enumerate_k_paths(3, 3, 1 << 20).unwrap();
        assert_eq!(
            labels_of(&records),
            ["###", "##A", "#AC", "#AG", "$$$", "ACT", "AGT", "CT$", "GT$", "T$$"]
        );
        // Branching after ##A duplicates it per extension: 11 records total.
        assert_eq!(records.len(), 11);
        let vmap = g.value_map(3);
        let find = |label: &str| -> Vec<&PathStub> {
            records.iter().filter(|r| seq_to_string(&r.label) == label).collect()
        };
        assert_eq!(find("###")[0].value, vmap.source_pad(2));
        assert_eq!(find("##A")[0].value, vmap.source_pad(1));
        assert_eq!(find("#AC")[0].value, vmap.source_pad(0));
        assert_eq!(find("ACT")[0].value, vmap.real(0));
        assert_eq!(find("$$$")[0].value, vmap.sink());
        assert_eq!(find("##A").len(), 2);
    }

    #[test]
    fn enumerate_single_node_order1() {
        let tsv = "N\t1\tA\n";
        let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
        g.augment();
        let records = g.enumerate_k_paths(1, 1, 1 << 20).unwrap();
        assert_eq!(labels_of(&records), ["#", "$", "A"]);
        assert_eq!(records.len(), 3);
    }

    #[test]
    fn enumerate_cycle_revisits_nodes() {
        let tsv = "N\t1\tA\nN\t2\tC\nE\t1\t2\nE\t2\t1\n";
        let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
        g.augment();
        let records = g.enumerate_k_paths(3, 3, 1 << 20).unwrap();
        // Cycle windows revisit nodes; the detached source/sink contribute
        // only the technical marker sequence.
        assert_eq!(labels_of(&records), ["###", "##$", "#$$", "$$$", "ACA", "CAC"]);
    }

    #[test]
    fn enumerate_empty_graph_yields_markers_only() {
        let mut g = LabeledGraph::parse(&b""[..], GraphFormat::Tsv).unwrap();
        g.augment();
        let records = g.enumerate_k_paths(2, 2, 1 << 20).unwrap();
        assert_eq!(labels_of(&records), ["##", "#$", "$$"]);
    }

    #[test]
    fn enumeration_respects_cap() {
        let g = g2();
        assert!(matches!(
            g.enumerate_k_paths(3, 3, 4),
            Err(Error::PathCapExceeded { cap: 4 })
        ));
    }

    #[test]
    fn unary_chain_ids_after_parse() {
        // Nodes given out of chain order on purpose.
        let tsv = "N\tx\tT\nN\ty\tA\nN\tz\tC\nE\ty\tz\nE\tz\tx\n";
        let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
        g.augment();
        for u in 0..g.real_count() {
            for &v in g.out_edges(u) {
                if v < g.real_count()
                    && g.out_edges(u).len() == 1
                    && g.in_edges(v).len() == 1
                {
                    assert_eq!(v, u + 1, "unary chain ids must be consecutive");
                }
            }
        }
    }

    #[test]
    fn verify_match_follows_paths() {
        let g = g2();
        assert!(g.verify_match(0, &pattern_from_str("ACT").unwrap()));
        assert!(!g.verify_match(0, &pattern_from_str("ATT").unwrap()));
        assert!(g.verify_match(0, &[]));
        assert!(g.verify_match(0, &pattern_from_str("AGT").unwrap()));
        assert!(!g.verify_match(1, &pattern_from_str("CG").unwrap()));
    }

    #[test]
    fn components_ignore_source_and_sink() {
        let tsv = "N\t1\tA\nN\t2\tC\nN\t3\tG\nE\t1\t2\n";
        let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
        g.augment();
        let (count, comp) = g.components();
        assert_eq!(count, 2);
        assert_eq!(comp[0], comp[1]);
        assert_ne!(comp[0], comp[2]);
    }
}

#[cfg(test)]
mod oracle_tests {
    use super::*;
    use crate::test_util::{chain, g2};
    use std::collections::{BTreeMap, BTreeSet};

    /// Independent enumeration oracle for acyclic graphs: list every maximal
    /// source-to-sink path explicitly, pad it into a collection sequence, and
    /// slide length-k windows. Aggregated per (label, value).
    fn sequence_window_oracle(
        g: &LabeledGraph,
        k: u64,
        pad: u64,
    ) -> BTreeMap<(Vec<Symbol>, u64), (SymbolSet, BTreeSet<Option<u64>>)> {
        let vmap = g.value_map(pad);
        // All maximal paths, as value/label arrays of the padded sequence.
        let mut sequences: Vec<(Vec<Symbol>, Vec<u64>)> = Vec::new();
        let mut stack: Vec<Vec<u32>> = vec![vec![g.source()]];
        while let Some(path) = stack.pop() {
            let last = *path.last().unwrap();
            if last == g.sink() {
                let mut labels = Vec::new();
                let mut values = Vec::new();
                for j in (1..pad).rev() {
                    labels.push(SOURCE_MARKER);
                    values.push(vmap.source_pad(j));
                }
                for &v in &path {
                    labels.push(g.label(v));
                    values.push(if v == g.source() {
                        vmap.source_pad(0)
                    } else if v == g.sink() {
                        vmap.sink()
                    } else {
                        vmap.real(v)
                    });
                }
                for _ in 1..pad {
                    labels.push(ENDMARKER);
                    values.push(vmap.sink());
                }
                sequences.push((labels, values));
                continue;
            }
            for &next in g.out_edges(last) {
                let mut extended = path.clone();
                extended.push(next);
                stack.push(extended);
            }
        }
        let mut out: BTreeMap<(Vec<Symbol>, u64), (SymbolSet, BTreeSet<Option<u64>>)> =
            BTreeMap::new();
        for (labels, values) in &sequences {
            for p in 0..=labels.len() - k as usize {
                let label = labels[p..p + k as usize].to_vec();
                let mut preds = SymbolSet::EMPTY;
                if p == 0 {
                    preds.insert(ENDMARKER);
                } else {
                    preds.insert(labels[p - 1]);
                }
                let ext = values.get(p + k as usize).copied();
                let entry = out.entry((label, values[p])).or_default();
                entry.0 = entry.0.union(preds);
                entry.1.insert(ext);
            }
        }
        out
    }

    fn aggregate(
        records: &[PathStub],
    ) -> BTreeMap<(Vec<Symbol>, u64), (SymbolSet, BTreeSet<Option<u64>>)> {
        let mut out: BTreeMap<(Vec<Symbol>, u64), (SymbolSet, BTreeSet<Option<u64>>)> =
            BTreeMap::new();
        for rec in records {
            let entry = out.entry((rec.label.clone(), rec.value)).or_default();
            entry.0 = entry.0.union(rec.preds);
            entry.1.insert(rec.ext);
        }
        out
    }

    fn random_dag(seed: u64, nodes: usize) -> LabeledGraph {
        let mut rng = crate::synth::SplitMix64::new(seed);
        let labels: Vec<Symbol> = (0..nodes).map(|_| rng.base()).collect();
        let mut edges = Vec::new();
        for i in 0..nodes - 1 {
            if rng.below(10) < 8 {
                edges.push((i as u32, i as u32 + 1));
            }
        }
        for _ in 0..nodes / 2 {
            let u = rng.below(nodes as u64 - 1);
            let v = u + 1 + rng.below((nodes as u64 - u - 1).min(4));
            edges.push((u as u32, v as u32));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut g = LabeledGraph::new(labels, &edges).unwrap();
        g.augment();
        g
    }

    #[test]
    fn enumeration_matches_sequence_window_oracle() {
        let mut graphs = vec![g2(), chain("GCATCATA"), chain("A")];
        for seed in 0..20 {
            graphs.push(random_dag(seed, 12));
        }
        for g in &graphs {
            for (k, pad) in [(1u64, 1u64), (2, 2), (3, 3), (3, 6), (2, 8)] {
                let records = g.enumerate_k_paths(k, pad, 1 << 22).unwrap();
                assert_eq!(
                    aggregate(&records),
                    sequence_window_oracle(g, k, pad),
                    "k={k} pad={pad}"
                );
            }
        }
    }
}
