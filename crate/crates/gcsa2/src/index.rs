//! The succinct index: a path graph in lexicographic key order, encoded with
//! degree bitvectors and predecessor-label structures, plus value samples for
//! locate queries.
//!
//! Two encodings share one query interface. The general encoding stores one
//! BWT entry per edge with an indegree bitvector; it works for any path
//! graph. The simplified encoding replaces both with per-symbol indicator
//! bitvectors and requires at most one predecessor per label on every node,
//! which maximally pruned graphs guarantee.

use crate::alphabet::{Symbol, ENDMARKER, SIGMA};
use crate::graph::{LabeledGraph, ValueMap};
use crate::path_graph::PathGraph;
use crate::succinct::{BitVec, CharSeq, RankBits, SparseBitVec, UnaryVec};
use crate::{Error, Result};

/// Symbols ordered by expected frequency; used when probing for the
/// predecessor label of a node in the simplified encoding.
pub(crate) const PROBE_ORDER: [Symbol; SIGMA] = [
    crate::alphabet::A,
    crate::alphabet::C,
    crate::alphabet::G,
    crate::alphabet::T,
    crate::alphabet::N,
    crate::alphabet::ENDMARKER,
    crate::alphabet::SOURCE_MARKER,
];

/// Rare characters stored as sparse bitvectors in the simplified encoding.
fn is_rare(c: Symbol) -> bool {
    c.is_technical() || c == crate::alphabet::N
}

/// An inclusive lexicographic range of node ranks. The canonical empty range
/// is `(sp, sp - 1)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LexRange {
    pub sp: i64,
    pub ep: i64,
}

impl LexRange {
    pub fn full(node_count: usize) -> LexRange {
        LexRange { sp: 0, ep: node_count as i64 - 1 }
    }

    pub fn empty_at(sp: i64) -> LexRange {
        LexRange { sp, ep: sp - 1 }
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ep < self.sp
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.ep - self.sp + 1) as u64
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        (self.sp..=self.ep).filter(|&i| i >= 0).map(|i| i as usize)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Encoding {
    General,
    Simplified,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Payload {
    General {
        /// Predecessor labels, one entry per incoming edge, in node order and
        /// (label, predecessor) order within a node.
        bwt: CharSeq,
        /// Indegrees in unary.
        indeg: UnaryVec,
    },
    Simplified {
        /// `preds[c][i] = 1` iff node `i` has a predecessor labeled `c`.
        preds: Vec<RankBits>,
    },
}

/// Sample structures for locate: sampled nodes are marked in a bitvector,
/// their value-set sizes are unary-encoded, and the values themselves are
/// stored flat.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Samples {
    pub marked: BitVec,
    pub counts: UnaryVec,
    pub values: Vec<u64>,
}

/// The encoded index. Immutable after construction; all queries are
/// re-entrant and touch no shared mutable state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedIndex {
    pub(crate) payload: Payload,
    pub(crate) outdeg: UnaryVec,
    pub(crate) c_array: [u64; SIGMA + 1],
    pub(crate) node_count: usize,
    pub(crate) vmap: ValueMap,
    pub(crate) samples: Samples,
    pub(crate) kmer_count: u64,
    pub(crate) doubling_steps: u32,
}

impl EncodedIndex {
    /// Encodes a path graph whose edge set has been determined. `sample_period`
    /// adds one sample per that many nodes along unary chains on top of the
    /// structurally required ones. `kmer_count` is carried for statistics
    /// (`u64::MAX` when unknown).
    pub fn encode(
        pg: &PathGraph,
        vmap: ValueMap,
        mode: Encoding,
        sample_period: u64,
        kmer_count: u64,
        doubling_steps: u32,
    ) -> Result<EncodedIndex> {
        // The value map defines the value space, which construction pins to
        // the final order even for the intermediate base-order graph.
        assert!(sample_period >= 1);
        let n = pg.node_count();
        assert!(n > 0, "cannot encode an empty path graph");
        let source = pg.source_node();
        let sink = pg.sink_node();

        // Incoming edges per node as (label, predecessor), including the
        // technical edge into the source; sorted by (label, predecessor).
        let mut in_edges: Vec<Vec<(Symbol, u32)>> = vec![Vec::new(); n];
        let mut out_degree = vec![0u64; n];
        for &(u, v) in &pg.edges {
            in_edges[v as usize].push((pg.nodes[u as usize].key[0], u));
            out_degree[u as usize] += 1;
        }
        in_edges[source as usize].push((ENDMARKER, sink));
        out_degree[sink as usize] += 1;
        for list in &mut in_edges {
            list.sort_unstable();
        }
        for (i, list) in in_edges.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::Construction(format!(
                    "node {i} has no incoming edges; not a valid path graph"
                )));
            }
            if out_degree[i] == 0 {
                return Err(Error::Construction(format!(
                    "node {i} has no outgoing edges; not a valid path graph"
                )));
            }
        }

        let mut c_array = [0u64; SIGMA + 1];
        for list in &in_edges {
            for &(c, _) in list {
                c_array[c.ordinal() + 1] += 1;
            }
        }
        for c in 0..SIGMA {
            c_array[c + 1] += c_array[c];
        }

        let payload = match mode {
            Encoding::General => {
                let mut labels = Vec::with_capacity(c_array[SIGMA] as usize);
                let mut indegrees = Vec::with_capacity(n);
                for list in &in_edges {
                    indegrees.push(list.len() as u64);
                    labels.extend(list.iter().map(|&(c, _)| c));
                }
                Payload::General {
                    bwt: CharSeq::from_symbols(&labels),
                    indeg: UnaryVec::from_counts(&indegrees),
                }
            }
            Encoding::Simplified => {
                let mut positions: Vec<Vec<u64>> = vec![Vec::new(); SIGMA];
                for (i, list) in in_edges.iter().enumerate() {
                    for w in list.windows(2) {
                        if w[0].0 == w[1].0 {
                            return Err(Error::SimplifiedUnsupported { node: i, count: 2 });
                        }
                    }
                    for &(c, _) in list {
                        positions[c.ordinal()].push(i as u64);
                    }
                }
                let preds = positions
                    .into_iter()
                    .enumerate()
                    .map(|(c, pos)| {
                        if is_rare(Symbol::from_ordinal(c as u8)) {
                            RankBits::Sparse(SparseBitVec::from_positions(n, pos))
                        } else {
                            RankBits::Plain(BitVec::from_positions(n, &pos))
                        }
                    })
                    .collect();
                Payload::Simplified { preds }
            }
        };
        let outdeg = UnaryVec::from_counts(&out_degree);

        let samples = Self::choose_samples(pg, &in_edges, source, sample_period);
        Ok(EncodedIndex {
            payload,
            outdeg,
            c_array,
            node_count: n,
            vmap,
            samples,
            kmer_count,
            doubling_steps,
        })
    }

    /// Sampling rules: a node's values are stored when (a) it has multiple
    /// incoming edges, (b) it is the source, or (c) its value set is not its
    /// sole predecessor's values shifted by one. Additional samples are placed
    /// every `sample_period` nodes along the remaining unary chains.
    fn choose_samples(
        pg: &PathGraph,
        in_edges: &[Vec<(Symbol, u32)>],
        source: u32,
        sample_period: u64,
    ) -> Samples {
        let n = pg.node_count();
        let mut sampled = vec![false; n];
        for (i, list) in in_edges.iter().enumerate() {
            if i as u32 == source || list.len() >= 2 {
                sampled[i] = true;
                continue;
            }
            let pred = list[0].1 as usize;
            let values = &pg.nodes[i].values;
            let pred_values = &pg.nodes[pred].values;
            let derivable = values.len() == pred_values.len()
                && values.iter().zip(pred_values.iter()).all(|(&v, &u)| v == u + 1);
            if !derivable {
                sampled[i] = true;
            }
        }
        // Distance-bounded extra samples: walk away from the sampled roots
        // along unary chains and sample every `sample_period`-th node.
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, list) in in_edges.iter().enumerate() {
            if i as u32 != source && list.len() == 1 {
                children[list[0].1 as usize].push(i as u32);
            }
        }
        let mut queue: std::collections::VecDeque<(u32, u64)> =
            (0..n as u32).filter(|&i| sampled[i as usize]).map(|i| (i, 0)).collect();
        let mut seen = sampled.clone();
        while let Some((v, dist)) = queue.pop_front() {
            for &w in &children[v as usize] {
                if seen[w as usize] {
                    continue;
                }
                seen[w as usize] = true;
                let mut d = dist + 1;
                if d >= sample_period {
                    sampled[w as usize] = true;
                    d = 0;
                }
                queue.push_back((w, d));
            }
        }

        let marked = BitVec::from_bools(&sampled);
        let mut counts = Vec::new();
        let mut values = Vec::new();
        for (i, &is_sampled) in sampled.iter().enumerate() {
            if is_sampled {
                counts.push(pg.nodes[i].values.len() as u64);
                values.extend(pg.nodes[i].values.iter().copied());
            }
        }
        Samples { marked, counts: UnaryVec::from_counts(&counts), values }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn order(&self) -> u64 {
        self.vmap.order
    }

    pub fn value_map(&self) -> ValueMap {
        self.vmap
    }

    pub fn encoding(&self) -> Encoding {
        match self.payload {
            Payload::General { .. } => Encoding::General,
            Payload::Simplified { .. } => Encoding::Simplified,
        }
    }

    pub fn kmer_count(&self) -> u64 {
        self.kmer_count
    }

    pub fn doubling_steps(&self) -> u32 {
        self.doubling_steps
    }

    /// Total number of edges, including the technical edge.
    pub fn edge_count(&self) -> u64 {
        self.outdeg.total_slots() as u64
    }

    /// Structural degree identities of the encoding: edge labels sum to the
    /// C array, and in the general encoding the BWT, indegree slots, and
    /// outdegree slots all count the same edges.
    pub fn check_degree_identities(&self) -> bool {
        let edges = self.edge_count();
        if self.c_array[crate::SIGMA] != edges {
            return false;
        }
        match &self.payload {
            Payload::General { bwt, indeg } => {
                bwt.len() as u64 == edges
                    && indeg.total_slots() as u64 == edges
                    && indeg.items() == self.node_count
                    && (0..crate::SIGMA).all(|c| {
                        self.c_array[c + 1] - self.c_array[c]
                            == bwt.rank(bwt.len(), Symbol::from_ordinal(c as u8))
                    })
            }
            Payload::Simplified { preds } => {
                let total: u64 = preds.iter().map(|b| b.count_ones()).sum();
                total == edges
                    && (0..crate::SIGMA)
                        .all(|c| self.c_array[c + 1] - self.c_array[c] == preds[c].count_ones())
            }
        }
    }

    /// Sample bookkeeping identities: one unary item per sampled node and one
    /// stored value per unary slot.
    pub fn check_sample_identities(&self) -> bool {
        self.samples.counts.items() as u64 == self.samples.marked.count_ones()
            && self.samples.counts.total_slots() == self.samples.values.len()
    }

    pub fn sampled_nodes(&self) -> u64 {
        self.samples.marked.count_ones()
    }

    /// Whether the values of node `i` are stored rather than derived.
    pub fn is_sampled(&self, i: usize) -> bool {
        self.samples.marked.get(i)
    }

    pub fn stored_values(&self) -> usize {
        self.samples.values.len()
    }

    /// The full range, which `find` of the empty pattern returns.
    pub fn full_range(&self) -> LexRange {
        LexRange::full(self.node_count)
    }

    /// One backward step: the range of nodes with a `c`-labeled path into `r`.
    /// An empty input yields an empty output.
    pub fn lf_range(&self, r: LexRange, c: Symbol) -> LexRange {
        if r.is_empty() {
            return LexRange::empty_at(r.sp);
        }
        let (sp_out, ep_out) = match &self.payload {
            Payload::General { bwt, indeg } => {
                let sp_in = (indeg.select1(r.sp as u64) + 1) as usize;
                let ep_in = indeg.select1(r.ep as u64 + 1) as usize;
                let sp_out = self.c_array[c.ordinal()] + bwt.rank(sp_in, c);
                let ep_out = (self.c_array[c.ordinal()] + bwt.rank(ep_in + 1, c)) as i64 - 1;
                (sp_out as i64, ep_out)
            }
            Payload::Simplified { preds } => {
                let bits = &preds[c.ordinal()];
                let sp_out = self.c_array[c.ordinal()] + bits.rank1(r.sp as usize);
                let ep_out =
                    (self.c_array[c.ordinal()] + bits.rank1(r.ep as usize + 1)) as i64 - 1;
                (sp_out as i64, ep_out)
            }
        };
        if ep_out < sp_out {
            return LexRange::empty_at(self.outdeg.rank1(sp_out as usize) as i64);
        }
        LexRange {
            sp: self.outdeg.rank1(sp_out as usize) as i64,
            ep: self.outdeg.rank1(ep_out as usize) as i64,
        }
    }

    /// Backward search: folds [`Self::lf_range`] over the pattern right to
    /// left, starting from the full range. Stops early once empty. The empty
    /// pattern returns the full range.
    pub fn find(&self, pattern: &[Symbol]) -> LexRange {
        debug_assert!(
            !pattern.iter().any(|s| s.is_technical()),
            "patterns must not contain technical characters"
        );
        let mut range = self.full_range();
        for &c in pattern.iter().rev() {
            range = self.lf_range(range, c);
            if range.is_empty() {
                break;
            }
        }
        range
    }

    /// Lexicographic rank of the sole predecessor of node `i`. Callers must
    /// only invoke this on nodes with exactly one incoming edge; unsampled
    /// nodes qualify by the sampling rules.
    pub fn lf_node(&self, i: usize) -> usize {
        let p_out = match &self.payload {
            Payload::General { bwt, indeg } => {
                debug_assert_eq!(indeg.count(i), 1, "lf_node on a multi-predecessor node");
                let p_in = (indeg.select1(i as u64) + 1) as usize;
                let c = bwt.get(p_in);
                self.c_array[c.ordinal()] + bwt.rank(p_in, c)
            }
            Payload::Simplified { preds } => {
                let c = PROBE_ORDER
                    .into_iter()
                    .find(|&c| preds[c.ordinal()].get(i))
                    .expect("node has no predecessor");
                self.c_array[c.ordinal()] + preds[c.ordinal()].rank1(i)
            }
        };
        self.outdeg.rank1(p_out as usize) as usize
    }

    /// Values of one node: stored samples, or an LF walk to the nearest
    /// sampled node with the step count added back.
    pub fn node_values(&self, i: usize) -> Vec<u64> {
        let mut j = i;
        let mut steps = 0u64;
        while !self.samples.marked.get(j) {
            j = self.lf_node(j);
            steps += 1;
            assert!(
                steps <= self.node_count as u64,
                "locate walk did not reach a sample; the samples are inconsistent"
            );
        }
        let rank = self.samples.marked.rank1(j) as usize;
        let (lo, hi) = self.samples.counts.range(rank);
        self.samples.values[lo..=hi].iter().map(|&v| v + steps).collect()
    }

    /// Distinct values over a lexicographic range, sorted.
    pub fn locate(&self, r: LexRange) -> Vec<u64> {
        let mut out: Vec<u64> = r.iter().flat_map(|i| self.node_values(i)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `locate` split against the input graph: values whose path really
    /// matches per [`LabeledGraph::verify_match`], and filtered false
    /// positives. Technical values never verify.
    pub fn locate_verified(&self, g: &LabeledGraph, pattern: &[Symbol]) -> (Vec<u64>, Vec<u64>) {
        let range = self.find(pattern);
        let mut verified = Vec::new();
        let mut filtered = Vec::new();
        for v in self.locate(range) {
            match self.vmap.to_real(v) {
                Some(node) if g.verify_match(node, pattern) => verified.push(v),
                _ => filtered.push(v),
            }
        }
        (verified, filtered)
    }
}

/// Convenience for the oracle route: build the de Bruijn graph explicitly,
/// maximally prune it, and encode.
pub fn encode_graph(
    g: &LabeledGraph,
    order: u64,
    mode: Encoding,
    sample_period: u64,
    cap: u64,
) -> Result<EncodedIndex> {
    let pg = PathGraph::build_debruijn(g, order, cap)?.maximally_prune();
    EncodedIndex::encode(&pg, g.value_map(order), mode, sample_period, u64::MAX, 0)
}
