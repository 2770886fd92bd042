//! Prefix-doubling index construction.
//!
//! The pipeline never materializes the order-`P` de Bruijn graph. It extracts
//! base paths of length `k`, encodes their labels as sequences of k-mer
//! lexicographic ranks against a base k-mer index, and then alternates
//! pruning steps (merging path ranges that share a prefix and a start node)
//! with extension steps (joining paths pairwise), doubling the order each
//! round. A final merging step produces the maximally pruned path graph,
//! whose edges are determined by comparing rank ranges, never by decoding
//! labels.

use std::collections::HashMap;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::alphabet::{Symbol, SymbolSet, ENDMARKER};
use crate::graph::{LabeledGraph, ValueMap};
use crate::index::{EncodedIndex, Encoding, LexRange};
use crate::path_graph::{PathGraph, PathGraphNode};
use crate::suffix_tree::{CountSupport, LcpSupport};
use crate::{Error, Result};

/// Construction parameters. The final order is `base_order << doubling_steps`.
#[derive(Clone, Debug)]
pub struct ConstructionConfig {
    /// Base path length `k`.
    pub base_order: u64,
    /// Number of doubling rounds (0..=3).
    pub doubling_steps: u32,
    /// Extra locate samples along unary chains, one per this many nodes.
    pub sample_period: u64,
    /// Hard limit on enumerated paths and records.
    pub path_cap: u64,
    /// Index encoding to produce.
    pub encoding: Encoding,
    /// When set, extension rounds stage records in partition files under
    /// this directory (one partition per weakly connected component).
    pub staging_dir: Option<PathBuf>,
    /// Count distinct order-length path labels for the statistics report.
    pub count_kmers: bool,
}

impl Default for ConstructionConfig {
    fn default() -> Self {
        ConstructionConfig {
            base_order: 4,
            doubling_steps: 0,
            sample_period: 64,
            path_cap: 10_000_000,
            encoding: Encoding::Simplified,
            staging_dir: None,
            count_kmers: true,
        }
    }
}

impl ConstructionConfig {
    pub fn order(&self) -> u64 {
        self.base_order << self.doubling_steps
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=16).contains(&self.base_order) {
            return Err(Error::Config(format!(
                "base order must be in 1..=16, got {}",
                self.base_order
            )));
        }
        if self.doubling_steps > 3 {
            return Err(Error::Config(format!(
                "doubling steps must be in 0..=3, got {}",
                self.doubling_steps
            )));
        }
        if self.sample_period == 0 {
            return Err(Error::Config("sample period must be at least 1".into()));
        }
        Ok(())
    }
}

/// A key as a sequence of base k-mer ranks. Labels whose length is not a
/// multiple of `k` carry one extra slot: the rank of the final k-mer of the
/// lexicographically largest occurring extension.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RankKey {
    pub slots: Vec<u32>,
    pub len: u64,
}

impl RankKey {
    fn blocks(&self, k: u64) -> usize {
        self.len.div_ceil(k) as usize
    }

    fn is_bracketed(&self, k: u64) -> bool {
        !self.len.is_multiple_of(k)
    }

    /// The lower-bound rank sequence (bracket slot excluded).
    fn lower(&self, k: u64) -> &[u32] {
        &self.slots[..self.blocks(k)]
    }

    /// Final rank of the largest occurring extension.
    fn upper_last(&self, k: u64) -> u32 {
        if self.is_bracketed(k) {
            self.slots[self.blocks(k)]
        } else {
            self.slots[self.blocks(k) - 1]
        }
    }
}

/// A construction-time path: rank-encoded key, start value, predecessor
/// labels of the start node, and the extension node value (`None` once the
/// record's label identifies its start uniquely).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PathRecord {
    pub key: RankKey,
    pub value: u64,
    pub ext: Option<u64>,
    pub preds: SymbolSet,
}

/// The base order-`k` de Bruijn index used throughout construction: the
/// GCSA-encoded k-mer graph, the LCP array of its keys, and the
/// last-character array.
pub struct BaseKmerIndex {
    k: u64,
    keys: Vec<Vec<Symbol>>,
    gcsa: EncodedIndex,
    lcp: LcpSupport,
    last: Vec<Symbol>,
}

impl BaseKmerIndex {
    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn kmer_count(&self) -> usize {
        self.keys.len()
    }

    pub fn label_of(&self, rank: u32) -> &[Symbol] {
        &self.keys[rank as usize]
    }

    pub fn last_char(&self, rank: u32) -> Symbol {
        self.last[rank as usize]
    }

    fn rank_of(&self, label: &[Symbol]) -> u32 {
        self.keys
            .binary_search_by(|k| k.as_slice().cmp(label))
            .expect("k-mer missing from the base index") as u32
    }

    /// LCP of two base k-mers by rank.
    fn kmer_lcp(&self, a: u32, b: u32) -> u64 {
        if a == b {
            return self.k;
        }
        let (lo, hi) = (a.min(b) as usize, a.max(b) as usize);
        self.lcp.range_min(lo + 1, hi)
    }

    /// Backward step over a rank span; `None` when empty.
    fn lf_span(&self, lo: u32, hi: u32, c: Symbol) -> Option<(u32, u32)> {
        let r = self.gcsa.lf_range(LexRange { sp: lo as i64, ep: hi as i64 }, c);
        (!r.is_empty()).then_some((r.sp as u32, r.ep as u32))
    }

    fn lf_point(&self, rank: u32, c: Symbol) -> Option<u32> {
        self.lf_span(rank, rank, c).map(|(lo, hi)| {
            debug_assert_eq!(lo, hi, "k-mer rank step must be a singleton");
            lo
        })
    }

    /// Decodes the label of a rank key.
    pub fn decode(&self, key: &RankKey) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(key.len as usize);
        for (m, &slot) in key.lower(self.k).iter().enumerate() {
            let remaining = key.len as usize - m * self.k as usize;
            let take = remaining.min(self.k as usize);
            out.extend_from_slice(&self.keys[slot as usize][..take]);
        }
        out
    }
}

/// Builds the sorted base records and the base k-mer index.
pub fn build_base(g: &LabeledGraph, cfg: &ConstructionConfig) -> Result<(Vec<PathRecord>, BaseKmerIndex)> {
    cfg.validate()?;
    let k = cfg.base_order;
    let order = cfg.order();
    let stubs = g.enumerate_k_paths(k, order, cfg.path_cap)?;

    // Base de Bruijn graph nodes: one per distinct k-mer label.
    let mut nodes: Vec<PathGraphNode> = Vec::new();
    for stub in &stubs {
        match nodes.last_mut() {
            Some(last) if last.key == stub.label => {
                last.values.insert(stub.value);
                last.preds = last.preds.union(stub.preds);
            }
            _ => nodes.push(PathGraphNode {
                key: stub.label.clone(),
                values: std::iter::once(stub.value).collect(),
                preds: stub.preds,
            }),
        }
    }
    let keys: Vec<Vec<Symbol>> = nodes.iter().map(|n| n.key.clone()).collect();

    // Edges by exact overlap: u = (c . key(v))[0..k]. The technical edge into
    // the source is implicit.
    let source = nodes
        .iter()
        .position(|n| n.values.contains(&0))
        .expect("base graph has no source node") as u32;
    let mut edges = Vec::new();
    let mut probe: Vec<Symbol> = Vec::with_capacity(k as usize);
    for (vi, v) in nodes.iter().enumerate() {
        for c in v.preds.iter() {
            if c == ENDMARKER && vi as u32 == source {
                continue;
            }
            probe.clear();
            probe.push(c);
            probe.extend_from_slice(&v.key[..k as usize - 1]);
            let ui = keys
                .binary_search_by(|cand| cand.as_slice().cmp(&probe))
                .map_err(|_| {
                    Error::Construction(format!(
                        "missing base k-mer for predecessor label {c:?}"
                    ))
                })?;
            edges.push((ui as u32, vi as u32));
        }
    }
    edges.sort_unstable();
    let base_pg = PathGraph { order: k, nodes, edges };
    let vmap = g.value_map(order);
    let gcsa = EncodedIndex::encode(&base_pg, vmap, Encoding::General, cfg.sample_period, u64::MAX, 0)?;
    let lcp = LcpSupport::from_keys(&keys);
    let last = keys.iter().map(|key| key[k as usize - 1]).collect();
    let base = BaseKmerIndex { k, keys, gcsa, lcp, last };

    let records = stubs
        .into_iter()
        .map(|stub| PathRecord {
            key: RankKey { slots: vec![base.rank_of(&stub.label)], len: k },
            value: stub.value,
            ext: stub.ext,
            preds: stub.preds,
        })
        .collect();
    Ok((records, base))
}

/// Label-level LCP of two rank keys, composed from slot comparisons and the
/// base LCP array, capped at the label lengths.
pub fn record_lcp(a: &RankKey, b: &RankKey, base: &BaseKmerIndex) -> u64 {
    let k = base.k;
    let cap = a.len.min(b.len);
    let la = a.lower(k);
    let lb = b.lower(k);
    for m in 0..la.len().min(lb.len()) {
        if la[m] != lb[m] {
            return (m as u64 * k + base.kmer_lcp(la[m], lb[m])).min(cap);
        }
    }
    cap
}

/// Encodes the length-`new_len` prefix shared by a sorted run of records:
/// lower slots from the smallest member, the bracket bound from the largest.
fn truncate_key(first: &RankKey, last: &RankKey, new_len: u64, base: &BaseKmerIndex) -> RankKey {
    let k = base.k;
    debug_assert!(new_len <= first.len && new_len >= 1);
    let blocks = new_len.div_ceil(k) as usize;
    let mut slots: Vec<u32> = first.lower(k)[..blocks].to_vec();
    if !new_len.is_multiple_of(k) {
        let upper = if (blocks as u64) * k <= last.len {
            last.lower(k)[blocks - 1]
        } else {
            last.upper_last(k)
        };
        slots.push(upper);
    }
    RankKey { slots, len: new_len }
}

/// Generic interval pruning over a sorted, LCP-annotated sequence. Descends
/// the LCP interval tree; whenever every member of an interval satisfies the
/// merge criterion, the whole interval is replaced by its shared prefix of
/// length `boundary + 1`.
#[allow(clippy::too_many_arguments)]
fn prune_intervals<T: Clone>(
    items: &[T],
    lcp: &[u64],
    lo: usize,
    hi: usize,
    boundary: u64,
    len_of: &impl Fn(&T) -> u64,
    can_merge: &impl Fn(&[T]) -> bool,
    merge: &impl Fn(&[T], u64) -> T,
    out: &mut Vec<T>,
) {
    let shared = if lo == hi {
        len_of(&items[lo])
    } else {
        (lo + 1..=hi).map(|i| lcp[i]).min().unwrap()
    };
    if boundary < shared && can_merge(&items[lo..=hi]) {
        out.push(merge(&items[lo..=hi], boundary + 1));
        return;
    }
    if lo == hi {
        out.push(items[lo].clone());
        return;
    }
    // Split into child intervals at the branching depth.
    let mut start = lo;
    for b in lo + 1..=hi + 1 {
        if b > hi || lcp[b] == shared {
            prune_intervals(items, lcp, start, b - 1, shared, len_of, can_merge, merge, out);
            start = b;
        }
    }
}

/// Pruning step: maximal runs of records whose labels share a prefix and
/// which all start at one node merge into a single record with the shared
/// prefix as its key and no extension.
pub fn prune_step(records: Vec<PathRecord>, base: &BaseKmerIndex) -> Vec<PathRecord> {
    if records.is_empty() {
        return records;
    }
    let mut lcp = vec![0u64; records.len()];
    for i in 1..records.len() {
        lcp[i] = record_lcp(&records[i - 1].key, &records[i].key, base);
    }
    let mut out = Vec::with_capacity(records.len());
    prune_intervals(
        &records,
        &lcp,
        0,
        records.len() - 1,
        0,
        &|r: &PathRecord| r.key.len,
        &|run: &[PathRecord]| run.iter().all(|r| r.value == run[0].value),
        &|run: &[PathRecord], new_len| PathRecord {
            key: truncate_key(&run[0].key, &run[run.len() - 1].key, new_len, base),
            value: run[0].value,
            ext: None,
            preds: run.iter().fold(SymbolSet::EMPTY, |acc, r| acc.union(r.preds)),
        },
        &mut out,
    );
    out
}

/// Extension step: records with an extension node join every record starting
/// there, concatenating keys; finished records carry over unchanged.
pub fn extension_step(records: Vec<PathRecord>, base: &BaseKmerIndex) -> Result<Vec<PathRecord>> {
    let mut by_value: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, rec) in records.iter().enumerate() {
        by_value.entry(rec.value).or_default().push(i);
    }
    let mut out: Vec<PathRecord> = Vec::with_capacity(records.len());
    for rec in &records {
        let Some(ext) = rec.ext else {
            out.push(rec.clone());
            continue;
        };
        debug_assert!(
            !rec.key.is_bracketed(base.k),
            "extensible records must have full-length labels"
        );
        let continuations = by_value.get(&ext).ok_or_else(|| {
            Error::Construction(format!("record extension points at value {ext} with no paths"))
        })?;
        for &ci in continuations {
            let cont = &records[ci];
            let mut slots = rec.key.slots.clone();
            slots.extend_from_slice(&cont.key.slots);
            out.push(PathRecord {
                key: RankKey { slots, len: rec.key.len + cont.key.len },
                value: rec.value,
                ext: cont.ext,
                preds: rec.preds,
            });
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// A merged path graph node still carrying its rank-encoded key.
#[derive(Clone, Debug)]
struct MergedNode {
    key: RankKey,
    values: std::collections::BTreeSet<u64>,
    preds: SymbolSet,
}

/// Merging step: records with identical keys become nodes (value and
/// predecessor unions), then pruning is applied maximally over value sets.
/// Returns the nodes in key order, still rank-encoded.
fn merge_records(records: Vec<PathRecord>, base: &BaseKmerIndex) -> Vec<MergedNode> {
    let mut nodes: Vec<MergedNode> = Vec::new();
    for rec in records {
        match nodes.last_mut() {
            Some(last) if last.key == rec.key => {
                last.values.insert(rec.value);
                last.preds = last.preds.union(rec.preds);
            }
            _ => nodes.push(MergedNode {
                key: rec.key,
                values: std::iter::once(rec.value).collect(),
                preds: rec.preds,
            }),
        }
    }
    if nodes.is_empty() {
        return nodes;
    }
    let mut lcp = vec![0u64; nodes.len()];
    for i in 1..nodes.len() {
        lcp[i] = record_lcp(&nodes[i - 1].key, &nodes[i].key, base);
    }
    let mut out = Vec::with_capacity(nodes.len());
    prune_intervals(
        &nodes,
        &lcp,
        0,
        nodes.len() - 1,
        0,
        &|n: &MergedNode| n.key.len,
        &|run: &[MergedNode]| run.iter().all(|n| n.values == run[0].values),
        &|run: &[MergedNode], new_len| MergedNode {
            key: truncate_key(&run[0].key, &run[run.len() - 1].key, new_len, base),
            values: run[0].values.clone(),
            preds: run.iter().fold(SymbolSet::EMPTY, |acc, n| acc.union(n.preds)),
        },
        &mut out,
    );
    out
}

/// A rank-sequence range: fixed head slots with the final slot spanning
/// `[lo.last(), hi_last]`.
struct SlotRange {
    lo: Vec<u32>,
    hi_last: u32,
}

impl SlotRange {
    fn of_key(key: &RankKey, k: u64) -> SlotRange {
        SlotRange { lo: key.lower(k).to_vec(), hi_last: key.upper_last(k) }
    }

    fn hi_at(&self, i: usize) -> u32 {
        if i + 1 == self.lo.len() {
            self.hi_last
        } else {
            self.lo[i]
        }
    }
}

/// The rank range of `c . label(key)`, derived with base-index backward
/// steps and the last-character array; `None` when no such string occurs.
fn shift_range(key: &RankKey, c: Symbol, base: &BaseKmerIndex) -> Option<SlotRange> {
    let k = base.k;
    let lower = key.lower(k);
    let blocks = lower.len();
    let mut lo = Vec::with_capacity(blocks + 1);
    let mut prev_char = c;
    for (m, &slot) in lower.iter().enumerate().take(blocks - 1) {
        lo.push(base.lf_point(slot, prev_char)?);
        let _ = m;
        prev_char = base.last_char(slot);
    }
    let final_slot = lower[blocks - 1];
    if key.is_bracketed(k) {
        // The final block already spans a range; map it as a range.
        let (span_lo, span_hi) = base.lf_span(final_slot, key.upper_last(k), prev_char)?;
        lo.push(span_lo);
        Some(SlotRange { lo, hi_last: span_hi })
    } else {
        lo.push(base.lf_point(final_slot, prev_char)?);
        // One more character than the key covers: the trailing block spans
        // every k-mer starting with the last character of the label.
        let next_char = base.last_char(final_slot);
        let n = base.kmer_count() as u32;
        let (span_lo, span_hi) = base.lf_span(0, n - 1, next_char)?;
        lo.push(span_lo);
        Some(SlotRange { lo, hi_last: span_hi })
    }
}

fn ranges_overlap(a: &SlotRange, b: &SlotRange) -> bool {
    let m = a.lo.len().min(b.lo.len());
    let a_hi_below_b_lo = (0..m).any(|i| match a.hi_at(i).cmp(&b.lo[i]) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => false,
    });
    if a_hi_below_b_lo {
        return false;
    }
    let b_hi_below_a_lo = (0..m).any(|i| match b.hi_at(i).cmp(&a.lo[i]) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => false,
    });
    !b_hi_below_a_lo
}

/// Lexicographic comparison of truncated ranges: is `a` entirely below `b`?
fn range_below(a: &SlotRange, b: &SlotRange) -> bool {
    let m = a.lo.len().min(b.lo.len());
    for i in 0..m {
        match a.hi_at(i).cmp(&b.lo[i]) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// True iff `c . label(key_v)` prefix-matches `label(key_u)`, tested by
/// overlap of the derived rank ranges.
pub fn prefix_match_check(key_u: &RankKey, c: Symbol, key_v: &RankKey, base: &BaseKmerIndex) -> bool {
    let Some(shifted) = shift_range(key_v, c, base) else {
        return false;
    };
    ranges_overlap(&SlotRange::of_key(key_u, base.k), &shifted)
}

/// Edge determination: one sequential scan of the key-sorted nodes with one
/// cursor per predecessor label. Requires a maximally pruned node list.
fn determine_edges(nodes: &[MergedNode], base: &BaseKmerIndex) -> Result<Vec<(u32, u32)>> {
    let k = base.k;
    let source = nodes
        .iter()
        .position(|n| n.values.contains(&0))
        .expect("merged path graph has no source node") as u32;
    // Per-label node groups (contiguous in key order).
    let label_of = |n: &MergedNode| base.label_of(n.key.slots[0])[0];
    let mut group: Vec<(usize, usize)> = vec![(0, 0); crate::SIGMA];
    {
        let mut start = 0usize;
        while start < nodes.len() {
            let c = label_of(&nodes[start]).ordinal();
            let mut end = start;
            while end < nodes.len() && label_of(&nodes[end]).ordinal() == c {
                end += 1;
            }
            group[c] = (start, end);
            start = end;
        }
    }
    let mut cursors: Vec<usize> = (0..crate::SIGMA).map(|c| group[c].0).collect();
    let mut edges = Vec::new();
    for (vi, v) in nodes.iter().enumerate() {
        for c in v.preds.iter() {
            if c == ENDMARKER {
                if vi as u32 == source {
                    // The technical edge into the source is implicit.
                    continue;
                }
                // Only the all-$ sink key has another $ predecessor: itself.
                // Base windows cannot derive this occurrence, it lives in the
                // final positions of a sequence.
                debug_assert_eq!(vi, 0);
                edges.push((0, vi as u32));
                continue;
            }
            let shifted = shift_range(&v.key, c, base).ok_or_else(|| {
                Error::Construction(format!(
                    "predecessor label {c:?} of node {vi} has no occurrence"
                ))
            })?;
            let (_, end) = group[c.ordinal()];
            let cursor = &mut cursors[c.ordinal()];
            loop {
                if *cursor >= end {
                    return Err(Error::Construction(format!(
                        "no predecessor with label {c:?} found for node {vi}"
                    )));
                }
                let candidate = SlotRange::of_key(&nodes[*cursor].key, k);
                if range_below(&candidate, &shifted) {
                    *cursor += 1;
                    continue;
                }
                if !ranges_overlap(&candidate, &shifted) {
                    return Err(Error::Construction(format!(
                        "predecessor scan for node {vi} label {c:?} skipped its match"
                    )));
                }
                edges.push((*cursor as u32, vi as u32));
                break;
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(edges)
}

/// Merging step: equal-key records merge into nodes, pruning is applied
/// maximally, and edges are determined from rank ranges. Returns the explicit
/// path graph (keys decoded through the base index).
pub fn merging_step(
    records: Vec<PathRecord>,
    base: &BaseKmerIndex,
    order: u64,
) -> Result<PathGraph> {
    let mut merged = merge_records(records, base);
    // An all-`$` key shorter than the order is also preceded by `$` in the
    // padded collection; base windows cannot see occurrences in the final
    // k - 1 positions of a sequence, so the label is restored here.
    if let Some(sink) = merged.first_mut() {
        if base.label_of(sink.key.slots[0])[0] == ENDMARKER && sink.key.len < order {
            sink.preds.insert(ENDMARKER);
        }
    }
    let edges = determine_edges(&merged, base)?;
    let nodes = merged
        .into_iter()
        .map(|n| PathGraphNode { key: base.decode(&n.key), values: n.values, preds: n.preds })
        .collect();
    Ok(PathGraph { order, nodes, edges })
}

/// Everything the build produces.
pub struct BuiltIndex {
    pub index: EncodedIndex,
    pub path_graph: PathGraph,
    pub lcp: LcpSupport,
    pub counts: CountSupport,
}

/// Runs the full pipeline on an augmented graph.
pub fn build_index(g: &LabeledGraph, cfg: &ConstructionConfig) -> Result<BuiltIndex> {
    cfg.validate()?;
    assert!(g.is_augmented(), "augment the graph before building");
    let order = cfg.order();
    let (mut records, base) = build_base(g, cfg)?;
    let wcc = cfg.staging_dir.as_ref().map(|_| g.components());
    for round in 0..cfg.doubling_steps {
        records = prune_step(records, &base);
        records = match (&cfg.staging_dir, &wcc) {
            (Some(dir), Some((parts, comp))) => {
                let vmap = g.value_map(order);
                staged_extension(records, &base, &vmap, dir, round, *parts, comp)?
            }
            _ => extension_step(records, &base)?,
        };
        if records.len() as u64 > cfg.path_cap {
            return Err(Error::PathCapExceeded { cap: cfg.path_cap });
        }
    }
    let pg = merging_step(records, &base, order)?;
    let kmer_count = if cfg.count_kmers {
        g.count_distinct_k_labels(order, order, cfg.path_cap).unwrap_or(u64::MAX)
    } else {
        u64::MAX
    };
    let index = EncodedIndex::encode(
        &pg,
        g.value_map(order),
        cfg.encoding,
        cfg.sample_period,
        kmer_count,
        cfg.doubling_steps,
    )?;
    let lcp = LcpSupport::from_path_graph(&pg);
    let counts = CountSupport::build(&pg, &lcp);
    Ok(BuiltIndex { index, path_graph: pg, lcp, counts })
}

// ---------------------------------------------------------------------------
// Partitioned staging: extension rounds write records to one file per weakly
// connected component and merge them back in sorted order. This bounds the
// memory held per partition at whole-genome scale; at desk scale it mainly
// pins down the record file format.

const RECORD_MAGIC: &[u8; 8] = b"GCSA2PR1";
const RECORD_VERSION: u32 = 1;

fn write_u32(w: &mut impl Write, v: u32) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn write_u64(w: &mut impl Write, v: u64) -> std::io::Result<()> {
    w.write_all(&v.to_le_bytes())
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut buf = [0u8; 4];
    r.read_exact(&mut buf)?;
    Ok(u32::from_le_bytes(buf))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)?;
    Ok(u64::from_le_bytes(buf))
}

/// Writes a sorted record file: header, then one length-prefixed record per
/// path.
pub fn write_record_file(path: &Path, k: u64, records: &[PathRecord]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    w.write_all(RECORD_MAGIC)?;
    write_u32(&mut w, RECORD_VERSION)?;
    write_u32(&mut w, k as u32)?;
    write_u64(&mut w, records.len() as u64)?;
    for rec in records {
        write_u64(&mut w, rec.key.len)?;
        write_u32(&mut w, rec.key.slots.len() as u32)?;
        for &s in &rec.key.slots {
            write_u32(&mut w, s)?;
        }
        write_u64(&mut w, rec.value)?;
        write_u64(&mut w, rec.ext.unwrap_or(u64::MAX))?;
        w.write_all(&[rec.preds.iter().fold(0u8, |acc, s| acc | 1 << s.ordinal())])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_record_file(path: &Path, expected_k: u64) -> Result<Vec<PathRecord>> {
    let mut r = BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != RECORD_MAGIC {
        return Err(Error::Format("bad record file magic".into()));
    }
    let version = read_u32(&mut r)?;
    if version != RECORD_VERSION {
        return Err(Error::Format(format!("unsupported record file version {version}")));
    }
    let k = read_u32(&mut r)? as u64;
    if k != expected_k {
        return Err(Error::Format(format!("record file has base order {k}, expected {expected_k}")));
    }
    let count = read_u64(&mut r)?;
    let mut records = Vec::with_capacity(count.min(1 << 20) as usize);
    for _ in 0..count {
        let len = read_u64(&mut r)?;
        let slot_count = read_u32(&mut r)? as usize;
        let mut slots = Vec::with_capacity(slot_count.min(1 << 16));
        for _ in 0..slot_count {
            slots.push(read_u32(&mut r)?);
        }
        let value = read_u64(&mut r)?;
        let ext = match read_u64(&mut r)? {
            u64::MAX => None,
            v => Some(v),
        };
        let mut preds = SymbolSet::EMPTY;
        let mut byte = [0u8; 1];
        r.read_exact(&mut byte)?;
        for c in 0..crate::SIGMA as u8 {
            if byte[0] & (1 << c) != 0 {
                preds.insert(Symbol::from_ordinal(c));
            }
        }
        records.push(PathRecord { key: RankKey { slots, len }, value, ext, preds });
    }
    Ok(records)
}

/// Partition of a record: the component of its start node, of its extension
/// node when the start is technical, or every partition for fully technical
/// records (they are few and deduplicate on merge).
fn record_partitions(rec: &PathRecord, vmap: &ValueMap, comp: &[u32], parts: u32) -> Vec<u32> {
    let of_value = |v: u64| vmap.to_real(v).map(|node| comp[node as usize]);
    if let Some(p) = of_value(rec.value) {
        return vec![p];
    }
    if let Some(p) = rec.ext.and_then(of_value) {
        return vec![p];
    }
    (0..parts).collect()
}

/// Extension over one partition. Continuations living in a sibling partition
/// are simply absent here; those joins happen where the continuation lives,
/// so records with no local continuation are dropped rather than reported.
fn extension_step_local(records: Vec<PathRecord>, base: &BaseKmerIndex) -> Vec<PathRecord> {
    let mut by_value: HashMap<u64, Vec<usize>> = HashMap::new();
    for (i, rec) in records.iter().enumerate() {
        by_value.entry(rec.value).or_default().push(i);
    }
    let mut out: Vec<PathRecord> = Vec::with_capacity(records.len());
    for rec in &records {
        let Some(ext) = rec.ext else {
            out.push(rec.clone());
            continue;
        };
        debug_assert!(!rec.key.is_bracketed(base.k));
        for &ci in by_value.get(&ext).map(Vec::as_slice).unwrap_or(&[]) {
            let cont = &records[ci];
            let mut slots = rec.key.slots.clone();
            slots.extend_from_slice(&cont.key.slots);
            out.push(PathRecord {
                key: RankKey { slots, len: rec.key.len + cont.key.len },
                value: rec.value,
                ext: cont.ext,
                preds: rec.preds,
            });
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// File-backed extension round: split the records over one file per weakly
/// connected component, extend each partition, and merge the sorted staging
/// files back. Dangling extensions are detected globally up front.
fn staged_extension(
    records: Vec<PathRecord>,
    base: &BaseKmerIndex,
    vmap: &ValueMap,
    dir: &Path,
    round: u32,
    parts: u32,
    comp: &[u32],
) -> Result<Vec<PathRecord>> {
    std::fs::create_dir_all(dir)?;
    let values: std::collections::HashSet<u64> = records.iter().map(|r| r.value).collect();
    for rec in &records {
        if let Some(ext) = rec.ext {
            if !values.contains(&ext) {
                return Err(Error::Construction(format!(
                    "record extension points at value {ext} with no paths"
                )));
            }
        }
    }
    let mut buckets: Vec<Vec<PathRecord>> = vec![Vec::new(); parts as usize];
    for rec in &records {
        for p in record_partitions(rec, vmap, comp, parts) {
            buckets[p as usize].push(rec.clone());
        }
    }
    drop(records);
    let mut paths = Vec::new();
    for (p, bucket) in buckets.into_iter().enumerate() {
        let extended = extension_step_local(bucket, base);
        let path = dir.join(format!("round{round}.part{p}.records"));
        write_record_file(&path, base.k(), &extended)?;
        paths.push(path);
    }
    let mut merged: Vec<PathRecord> = Vec::new();
    for path in &paths {
        merged.extend(read_record_file(path, base.k())?);
    }
    merged.sort_unstable();
    merged.dedup();
    Ok(merged)
}
