//! Suffix-tree operations over the key set: LCP array with an x-ary range
//! minimum tree (RMQ and smaller-value queries), parent queries on
//! lexicographic ranges, distinct-value counting, and maximal exact match
//! search.

use crate::alphabet::Symbol;
use crate::index::{EncodedIndex, LexRange};
use crate::path_graph::PathGraph;
use crate::succinct::BitVec;

/// Default branching factor of the min tree.
pub const DEFAULT_BRANCHING: usize = 64;

/// LCP array over key-sorted nodes plus an x-ary tree of range minima.
/// `LCP[i]` is the longest common prefix of keys `i-1` and `i`, `LCP[0] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcpSupport {
    lcp: Vec<u64>,
    branching: usize,
    /// `levels[l][b]` = min of `lcp[b * x^(l+1) .. (b+1) * x^(l+1))`.
    levels: Vec<Vec<u64>>,
}

fn common_prefix_len(a: &[Symbol], b: &[Symbol]) -> u64 {
    a.iter().zip(b.iter()).take_while(|(x, y)| x == y).count() as u64
}

impl LcpSupport {
    pub fn from_lcp(lcp: Vec<u64>) -> LcpSupport {
        Self::with_branching(lcp, DEFAULT_BRANCHING)
    }

    pub fn with_branching(lcp: Vec<u64>, branching: usize) -> LcpSupport {
        assert!(branching >= 2);
        let mut levels: Vec<Vec<u64>> = Vec::new();
        let mut prev: &[u64] = &lcp;
        while prev.len() > 1 {
            let level: Vec<u64> = prev
                .chunks(branching)
                .map(|c| c.iter().copied().min().unwrap())
                .collect();
            levels.push(level);
            prev = levels.last().unwrap();
        }
        LcpSupport { lcp, branching, levels }
    }

    pub fn from_keys<K: AsRef<[Symbol]>>(keys: &[K]) -> LcpSupport {
        let mut lcp = vec![0u64; keys.len()];
        for i in 1..keys.len() {
            lcp[i] = common_prefix_len(keys[i - 1].as_ref(), keys[i].as_ref());
        }
        Self::from_lcp(lcp)
    }

    pub fn from_path_graph(pg: &PathGraph) -> LcpSupport {
        let keys: Vec<&[Symbol]> = pg.nodes.iter().map(|n| n.key.as_slice()).collect();
        Self::from_keys(&keys)
    }

    pub fn len(&self) -> usize {
        self.lcp.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lcp.is_empty()
    }

    pub fn get(&self, i: usize) -> u64 {
        self.lcp[i]
    }

    pub fn values(&self) -> &[u64] {
        &self.lcp
    }

    pub fn branching(&self) -> usize {
        self.branching
    }

    /// Minimum over `[lo, hi]`, stepping through the largest aligned blocks.
    pub fn range_min(&self, lo: usize, hi: usize) -> u64 {
        assert!(lo <= hi && hi < self.lcp.len());
        let x = self.branching;
        let mut best = u64::MAX;
        let mut i = lo;
        while i <= hi {
            let mut size = 1usize;
            let mut level = 0usize;
            while level < self.levels.len() && i.is_multiple_of(size * x) && i + size * x - 1 <= hi {
                size *= x;
                level += 1;
            }
            let v = if level == 0 { self.lcp[i] } else { self.levels[level - 1][i / size] };
            best = best.min(v);
            i += size;
        }
        best
    }

    /// Leftmost position of the minimum in `[lo, hi]`.
    pub fn rmq(&self, lo: usize, hi: usize) -> usize {
        let m = self.range_min(lo, hi);
        let pos = self.next_below(lo, m + 1);
        debug_assert!(pos <= hi);
        pos
    }

    /// Smallest `j >= from` with `lcp[j] < bound`, or `len()` when none.
    pub fn next_below(&self, from: usize, bound: u64) -> usize {
        let n = self.lcp.len();
        let x = self.branching;
        let mut i = from;
        while i < n {
            if self.lcp[i] < bound {
                return i;
            }
            i += 1;
            // Skip aligned blocks whose minimum is not below the bound.
            loop {
                let mut size = x;
                let mut level = 0usize;
                let mut skipped = false;
                while level < self.levels.len() && i.is_multiple_of(size) {
                    let b = i / size;
                    if i + size <= n && self.levels[level][b] >= bound {
                        if level + 1 < self.levels.len() && i.is_multiple_of(size * x) {
                            let bb = i / (size * x);
                            if i + size * x <= n && self.levels[level + 1][bb] >= bound {
                                size *= x;
                                level += 1;
                                continue;
                            }
                        }
                        i += size;
                        skipped = true;
                    }
                    break;
                }
                if !skipped || i >= n {
                    break;
                }
            }
        }
        n
    }

    /// Largest `j <= from` with `lcp[j] < bound`, or `None`.
    pub fn prev_below(&self, from: usize, bound: u64) -> Option<usize> {
        let x = self.branching as i64;
        let mut i = from as i64;
        while i >= 0 {
            if self.lcp[i as usize] < bound {
                return Some(i as usize);
            }
            i -= 1;
            // Skip aligned blocks ending at i whose minimum is in bounds.
            loop {
                let mut size = x;
                let mut level = 0usize;
                let mut skipped = false;
                while level < self.levels.len() && (i + 1) % size == 0 && i >= size - 1 {
                    let b = ((i + 1 - size) / size) as usize;
                    if self.levels[level][b] >= bound {
                        if level + 1 < self.levels.len()
                            && (i + 1) % (size * x) == 0
                            && i >= size * x - 1
                        {
                            let bb = ((i + 1 - size * x) / (size * x)) as usize;
                            if self.levels[level + 1][bb] >= bound {
                                size *= x;
                                level += 1;
                                continue;
                            }
                        }
                        i -= size;
                        skipped = true;
                    }
                    break;
                }
                if !skipped || i < 0 {
                    break;
                }
            }
        }
        None
    }

    /// Previous smaller value: largest `j < i` with `lcp[j] < lcp[i]`.
    pub fn psv(&self, i: usize) -> Option<usize> {
        if i == 0 {
            return None;
        }
        self.prev_below(i - 1, self.lcp[i])
    }

    /// Next smaller value: smallest `j > i` with `lcp[j] < lcp[i]`, or the
    /// sentinel `len()`.
    pub fn nsv(&self, i: usize) -> usize {
        self.next_below(i + 1, self.lcp[i])
    }

    /// The smallest LCP interval strictly containing `r`, with its string
    /// depth. The root is its own parent: `(full range, 0)`.
    pub fn parent(&self, r: LexRange) -> (LexRange, u64) {
        let n = self.lcp.len();
        let full = LexRange::full(n);
        if r.is_empty() || (r.sp <= 0 && r.ep >= n as i64 - 1) {
            return (full, 0);
        }
        let left = self.lcp[r.sp as usize];
        let right = if (r.ep as usize) + 1 < n { self.lcp[r.ep as usize + 1] } else { 0 };
        let depth = left.max(right);
        if depth == 0 {
            return (full, 0);
        }
        let sp = self
            .prev_below(r.sp as usize, depth)
            .expect("lcp[0] = 0 bounds every interval") as i64;
        let ep = self.next_below(r.ep as usize + 1, depth) as i64 - 1;
        (LexRange { sp, ep }, depth)
    }
}

/// Distinct-value counting support: per-node extra value counts and
/// per-internal-node redundancy counts, both encoded in unary (`x` becomes
/// `0^x 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSupport {
    /// `B_A`: unary `A[i] = |values(i)| - 1` over all nodes.
    additional: BitVec,
    /// `B_R`: unary `R[i]`, `i` in `[0, n-2]`, indexed by inorder internal
    /// node visits (slot `i` sits between leaves `i` and `i+1`).
    redundancy: BitVec,
}

fn unary_of(values: &[u64]) -> BitVec {
    let total: u64 = values.iter().sum::<u64>() + values.len() as u64;
    let mut bools = Vec::with_capacity(total as usize);
    for &v in values {
        bools.extend(std::iter::repeat_n(false, v as usize));
        bools.push(true);
    }
    BitVec::from_bools(&bools)
}

/// Sum of `values[a..=b]` over the unary encoding; two select calls.
fn unary_sum(bits: &BitVec, a: usize, b: usize) -> u64 {
    let high = bits.select1(b as u64 + 1) - b as i64;
    let low = bits.select1(a as u64) + 1 - a as i64;
    (high - low) as u64
}

impl CountSupport {
    /// Builds the counting structures. The redundancy of an internal node is
    /// the number of consecutive same-value leaf pairs whose lowest common
    /// ancestor it is; each count is charged to the node's first inorder
    /// visit.
    pub fn build(pg: &PathGraph, lcp: &LcpSupport) -> CountSupport {
        let n = pg.node_count();
        let additional: Vec<u64> = pg.nodes.iter().map(|v| v.values.len() as u64 - 1).collect();
        let mut redundancy = vec![0u64; n.saturating_sub(1)];
        let mut occurrences: Vec<(u64, u32)> = Vec::new();
        for (i, node) in pg.nodes.iter().enumerate() {
            occurrences.extend(node.values.iter().map(|&v| (v, i as u32)));
        }
        occurrences.sort_unstable();
        for pair in occurrences.windows(2) {
            let ((v1, leaf1), (v2, leaf2)) = (pair[0], pair[1]);
            if v1 != v2 {
                continue;
            }
            debug_assert!(leaf1 < leaf2, "a value occurs twice in one node");
            // The lowest common ancestor of the two leaves is the interval
            // whose depth is the minimum LCP strictly between them.
            let boundary = lcp.rmq(leaf1 as usize + 1, leaf2 as usize);
            let depth = lcp.get(boundary);
            // Charge the node's first inorder visit: its leftmost boundary.
            let start = lcp.prev_below(boundary, depth).map_or(0, |j| j + 1);
            let first = lcp.next_below(start.max(1), depth + 1);
            redundancy[first - 1] += 1;
        }
        CountSupport { additional: unary_of(&additional), redundancy: unary_of(&redundancy) }
    }

    /// Number of distinct values in `r`, which must come from `find`.
    pub fn count(&self, r: LexRange) -> u64 {
        if r.is_empty() {
            return 0;
        }
        let (sp, ep) = (r.sp as usize, r.ep as usize);
        let values = unary_sum(&self.additional, sp, ep) + r.len();
        let redundant = if sp == ep { 0 } else { unary_sum(&self.redundancy, sp, ep - 1) };
        values - redundant
    }

    pub(crate) fn parts(&self) -> (&BitVec, &BitVec) {
        (&self.additional, &self.redundancy)
    }

    pub(crate) fn from_parts(additional: BitVec, redundancy: BitVec) -> CountSupport {
        CountSupport { additional, redundancy }
    }
}

/// A maximal exact match between a query and the indexed paths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Mem {
    /// Query interval `[start, end)`.
    pub start: usize,
    pub end: usize,
    /// Lexicographic range of the matching nodes.
    pub range: LexRange,
    /// Set when the match reached the index order: longer matches may be
    /// false positives and need verification in the input graph.
    pub needs_verification: bool,
}

/// Maximal exact matches of length at least `min_len`: backward-extend from
/// each query position, shortening the matched suffix with parent queries on
/// mismatch. Matches are truncated at the index order and flagged there,
/// since only matches up to the order are exact.
pub fn find_mems(
    idx: &EncodedIndex,
    lcp: &LcpSupport,
    query: &[Symbol],
    min_len: usize,
) -> Vec<Mem> {
    assert!(min_len >= 1);
    let order = idx.order() as usize;
    // stats[i] = longest match starting at i, with its range.
    let mut stats: Vec<(usize, LexRange)> = vec![(0, idx.full_range()); query.len()];
    let mut range = idx.full_range();
    let mut len = 0usize;
    for i in (0..query.len()).rev() {
        loop {
            let stepped = idx.lf_range(range, query[i]);
            if !stepped.is_empty() {
                range = stepped;
                len += 1;
                break;
            }
            if len == 0 {
                // The character does not occur at all; stay at the root.
                range = idx.full_range();
                break;
            }
            let (up, depth) = lcp.parent(range);
            debug_assert!((depth as usize) < len);
            range = up;
            len = depth as usize;
        }
        stats[i] = (len, range);
    }

    let mut mems = Vec::new();
    for i in 0..query.len() {
        let (len_i, range_i) = stats[i];
        if len_i == 0 {
            continue;
        }
        if len_i >= order {
            // Truncated candidate; re-derive the range of the truncation.
            if order >= min_len {
                let truncated = idx.find(&query[i..i + order]);
                mems.push(Mem {
                    start: i,
                    end: i + order,
                    range: truncated,
                    needs_verification: true,
                });
            }
            continue;
        }
        let left_maximal = i == 0 || stats[i - 1].0 < len_i + 1;
        if left_maximal && len_i >= min_len {
            mems.push(Mem { start: i, end: i + len_i, range: range_i, needs_verification: false });
        }
    }
    mems
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::pattern_from_str;
    use crate::alphabet::seq_from_str;
    use crate::index::Encoding;
    use crate::path_graph::oracle_locate;
    use crate::test_util::{chain, g2, two_cycle};

    #[test]
    fn g2_lcp_array() {
        let g = g2();
        let pg = PathGraph::build_debruijn(&g, 3, 1 << 20).unwrap().maximally_prune();
        let lcp = LcpSupport::from_path_graph(&pg);
        assert_eq!(lcp.values(), &[0, 0, 2, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn lcp_of_disjoint_keys_is_zero() {
        let keys: Vec<Vec<Symbol>> =
            ["AC", "CA", "GT", "TG"].iter().map(|s| seq_from_str(s).unwrap()).collect();
        let lcp = LcpSupport::from_keys(&keys);
        assert_eq!(lcp.values(), &[0, 0, 0, 0]);
    }

    #[test]
    fn rmq_psv_nsv_match_linear_scan() {
        let mut state = 99u64;
        for (n, branching) in [(1usize, 2usize), (7, 2), (64, 4), (1000, 4), (1000, 64)] {
            let lcp: Vec<u64> = std::iter::once(0)
                .chain((1..n).map(|_| {
                    state =
                        state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    state >> 59
                }))
                .collect();
            let sup = LcpSupport::with_branching(lcp.clone(), branching);
            for i in 0..n {
                let psv = (0..i).rev().find(|&j| lcp[j] < lcp[i]);
                assert_eq!(sup.psv(i), psv, "psv at {i}");
                let nsv = (i + 1..n).find(|&j| lcp[j] < lcp[i]).unwrap_or(n);
                assert_eq!(sup.nsv(i), nsv, "nsv at {i}");
            }
            let mut lo = 0usize;
            for step in 0..200usize {
                let hi = (lo + step * 7) % n;
                let (lo2, hi2) = (lo.min(hi), lo.max(hi));
                let min = *lcp[lo2..=hi2].iter().min().unwrap();
                let pos = lcp[lo2..=hi2].iter().position(|&v| v == min).unwrap() + lo2;
                assert_eq!(sup.range_min(lo2, hi2), min);
                assert_eq!(sup.rmq(lo2, hi2), pos);
                lo = (lo + 13) % n;
            }
        }
    }

    #[test]
    fn rmq_ties_break_leftmost() {
        let sup = LcpSupport::from_lcp(vec![0, 5, 5, 5, 5]);
        assert_eq!(sup.rmq(1, 4), 1);
        assert_eq!(sup.rmq(2, 4), 2);
    }

    #[test]
    fn psv_nsv_examples() {
        let sup = LcpSupport::from_lcp(vec![0, 2, 1, 3]);
        assert_eq!(sup.psv(3), Some(2));
        assert_eq!(sup.nsv(1), 2);
        assert_eq!(sup.nsv(3), 4);
    }

    /// Explicit compacted key-trie; the independent oracle for parent.
    fn trie_parent_oracle(keys: &[Vec<Symbol>], r: LexRange) -> (LexRange, u64) {
        let n = keys.len();
        let mut intervals: Vec<(i64, i64, u64)> = vec![(0, n as i64 - 1, 0)];
        for sp in 0..n {
            for ep in sp..n {
                let mut shared = keys[sp].len();
                for i in sp..=ep {
                    shared = shared.min(common_prefix_len(&keys[sp], &keys[i]) as usize);
                }
                if sp == ep {
                    shared = keys[sp].len();
                }
                for depth in 1..=shared {
                    let maximal = (sp == 0
                        || (common_prefix_len(&keys[sp - 1], &keys[sp]) as usize) < depth)
                        && (ep + 1 == n
                            || (common_prefix_len(&keys[ep], &keys[ep + 1]) as usize) < depth);
                    if maximal {
                        intervals.push((sp as i64, ep as i64, depth as u64));
                    }
                }
            }
        }
        intervals
            .into_iter()
            .filter(|&(sp, ep, _)| sp <= r.sp && r.ep <= ep && (sp < r.sp || r.ep < ep))
            .min_by_key(|&(sp, ep, d)| (ep - sp, std::cmp::Reverse(d)))
            .map(|(sp, ep, d)| (LexRange { sp, ep }, d))
            .unwrap()
    }

    #[test]
    fn parent_matches_key_trie_oracle_on_find_ranges() {
        for g in [g2(), chain("GCATCATA"), two_cycle(), chain("ACGTACGA")] {
            let pg = PathGraph::build_debruijn(&g, 3, 1 << 20).unwrap().maximally_prune();
            let idx = EncodedIndex::encode(
                &pg,
                g.value_map(3),
                Encoding::General,
                64,
                u64::MAX,
                0,
            )
            .unwrap();
            let keys: Vec<Vec<Symbol>> = pg.nodes.iter().map(|n| n.key.clone()).collect();
            let lcp = LcpSupport::from_path_graph(&pg);
            let n = pg.node_count();
            let full = LexRange::full(n);
            assert_eq!(lcp.parent(full), (full, 0));
            let syms =
                [crate::alphabet::A, crate::alphabet::C, crate::alphabet::G, crate::alphabet::T];
            let mut patterns: Vec<Vec<Symbol>> = Vec::new();
            for a in syms {
                patterns.push(vec![a]);
                for b in syms {
                    patterns.push(vec![a, b]);
                    for c in syms {
                        patterns.push(vec![a, b, c]);
                        for d in syms {
                            patterns.push(vec![a, b, c, d]);
                        }
                    }
                }
            }
            for x in &patterns {
                let r = idx.find(x);
                if r.is_empty() || r == full {
                    continue;
                }
                assert_eq!(lcp.parent(r), trie_parent_oracle(&keys, r), "range {r:?}");
            }
        }
    }

    #[test]
    fn count_matches_distinct_locate() {
        for g in [g2(), chain("GCATCATA"), two_cycle(), chain("ACCA")] {
            let order = 3;
            let pg = PathGraph::build_debruijn(&g, order, 1 << 20).unwrap();
            for graph in [pg.clone(), pg.maximally_prune()] {
                let idx = EncodedIndex::encode(
                    &graph,
                    g.value_map(order),
                    Encoding::General,
                    64,
                    u64::MAX,
                    0,
                )
                .unwrap();
                let lcp = LcpSupport::from_path_graph(&graph);
                let count = CountSupport::build(&graph, &lcp);
                let syms = [
                    crate::alphabet::A,
                    crate::alphabet::C,
                    crate::alphabet::G,
                    crate::alphabet::T,
                ];
                let mut patterns: Vec<Vec<Symbol>> = vec![vec![]];
                for a in syms {
                    patterns.push(vec![a]);
                    for b in syms {
                        patterns.push(vec![a, b]);
                        for c in syms {
                            patterns.push(vec![a, b, c]);
                        }
                    }
                }
                for x in &patterns {
                    let r = idx.find(x);
                    assert_eq!(count.count(r), idx.locate(r).len() as u64, "pattern {x:?}");
                }
            }
        }
    }

    /// The total redundancy must equal the sum over internal trie nodes of
    /// (sum of child counts - node count), computed here by explicit
    /// interval descent with set unions.
    #[test]
    fn redundancy_totals_match_trie_oracle() {
        fn distinct(pg: &PathGraph, lo: usize, hi: usize) -> u64 {
            let mut set = std::collections::BTreeSet::new();
            for n in &pg.nodes[lo..=hi] {
                set.extend(n.values.iter().copied());
            }
            set.len() as u64
        }
        fn internal_sum(pg: &PathGraph, lcp: &[u64], lo: usize, hi: usize, acc: &mut u64) {
            if lo == hi {
                return;
            }
            let d = (lo + 1..=hi).map(|i| lcp[i]).min().unwrap();
            let mut children = Vec::new();
            let mut start = lo;
            for b in lo + 1..=hi + 1 {
                if b > hi || lcp[b] == d {
                    children.push((start, b - 1));
                    start = b;
                }
            }
            let child_total: u64 = children.iter().map(|&(a, b)| distinct(pg, a, b)).sum();
            *acc += child_total - distinct(pg, lo, hi);
            for (a, b) in children {
                internal_sum(pg, lcp, a, b, acc);
            }
        }
        for g in [g2(), chain("GCATCATA"), chain("ACCACCAA"), two_cycle()] {
            let pg = PathGraph::build_debruijn(&g, 3, 1 << 20).unwrap();
            for graph in [pg.clone(), pg.maximally_prune()] {
                let lcp = LcpSupport::from_path_graph(&graph);
                let cs = CountSupport::build(&graph, &lcp);
                let (additional, redundancy) = cs.parts();
                // Unary encoding: the zeros are the encoded values.
                let decoded_r = redundancy.len() as u64 - redundancy.count_ones();
                let decoded_a = additional.len() as u64 - additional.count_ones();
                let mut expected_r = 0;
                internal_sum(&graph, lcp.values(), 0, graph.node_count() - 1, &mut expected_r);
                assert_eq!(decoded_r, expected_r);
                let expected_a: u64 =
                    graph.nodes.iter().map(|n| n.values.len() as u64 - 1).sum();
                assert_eq!(decoded_a, expected_a);
            }
        }
    }

    #[test]
    fn count_redundancy_example() {
        // Pre-pruning de Bruijn graph of G2: ACT and AGT share the value of
        // node A, so find("A") covers two nodes but one distinct value.
        let g = g2();
        let pg = PathGraph::build_debruijn(&g, 3, 1 << 20).unwrap();
        let idx =
            EncodedIndex::encode(&pg, g.value_map(3), Encoding::General, 64, u64::MAX, 0).unwrap();
        let lcp = LcpSupport::from_path_graph(&pg);
        let cs = CountSupport::build(&pg, &lcp);
        let r = idx.find(&pattern_from_str("A").unwrap());
        assert_eq!(r.len(), 2);
        assert_eq!(cs.count(r), 1);
    }

    /// Brute-force MEM oracle over all query substrings, checked in the graph.
    fn mem_oracle(
        g: &crate::graph::LabeledGraph,
        order: u64,
        query: &[Symbol],
        min_len: usize,
    ) -> Vec<(usize, usize)> {
        let occurs =
            |i: usize, j: usize| -> bool { !oracle_locate(g, &query[i..j], order).is_empty() };
        let mut out = Vec::new();
        for i in 0..query.len() {
            for j in i + min_len..=query.len() {
                if occurs(i, j)
                    && (i == 0 || !occurs(i - 1, j))
                    && (j == query.len() || !occurs(i, j + 1))
                {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn mems_match_oracle_on_fixtures() {
        for g in [g2(), chain("GCATCATA"), chain("ACGTACGA"), two_cycle()] {
            let order = 3;
            let pg = PathGraph::build_debruijn(&g, order, 1 << 20).unwrap().maximally_prune();
            let idx = EncodedIndex::encode(
                &pg,
                g.value_map(order),
                Encoding::Simplified,
                64,
                u64::MAX,
                0,
            )
            .unwrap();
            let lcp = LcpSupport::from_path_graph(&pg);
            for query in ["ACGT", "GCATCATA", "TTTT", "CATAC", "A", "ACTGT"] {
                let q = pattern_from_str(query).unwrap();
                for min_len in [1usize, 2] {
                    let mems = find_mems(&idx, &lcp, &q, min_len);
                    let oracle = mem_oracle(&g, order, &q, min_len);
                    // Matches below the order must agree exactly.
                    let exact: Vec<(usize, usize)> = mems
                        .iter()
                        .filter(|m| !m.needs_verification)
                        .map(|m| (m.start, m.end))
                        .collect();
                    let oracle_short: Vec<(usize, usize)> = oracle
                        .iter()
                        .copied()
                        .filter(|&(i, j)| ((j - i) as u64) < order)
                        .collect();
                    assert_eq!(exact, oracle_short, "query {query} min {min_len}");
                    // Oracle matches at exactly the order appear flagged.
                    for &(i, j) in oracle.iter().filter(|&&(i, j)| (j - i) as u64 == order) {
                        assert!(
                            mems.iter()
                                .any(|m| m.needs_verification && m.start == i && m.end == j),
                            "query {query}: flagged mem ({i},{j}) missing"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mem_trivia() {
        let g = g2();
        let order = 3;
        let pg = PathGraph::build_debruijn(&g, order, 1 << 20).unwrap().maximally_prune();
        let idx =
            EncodedIndex::encode(&pg, g.value_map(order), Encoding::Simplified, 64, u64::MAX, 0)
                .unwrap();
        let lcp = LcpSupport::from_path_graph(&pg);
        // Whole-query match of an indexed path label.
        let q = pattern_from_str("AC").unwrap();
        let mems = find_mems(&idx, &lcp, &q, 1);
        assert_eq!(mems.len(), 1);
        assert_eq!((mems[0].start, mems[0].end), (0, 2));
        // Symbols absent from the graph match nothing.
        let q = pattern_from_str("NNN").unwrap();
        assert!(find_mems(&idx, &lcp, &q, 1).is_empty());
    }
}
