//! Synthetic graph generators for self-checks and benchmarks.

use crate::alphabet::Symbol;
use crate::graph::LabeledGraph;

/// Small deterministic generator (splitmix64).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n.max(1)
    }

    pub fn base(&mut self) -> Symbol {
        Symbol::from_ordinal(2 + self.below(4) as u8)
    }
}

/// A random branching graph over the bases: a sparse chain backbone with
/// extra edges, possibly cyclic. Augmented and ready for indexing.
pub fn random_graph(seed: u64, max_nodes: usize) -> LabeledGraph {
    let mut rng = SplitMix64::new(seed);
    let n = 2 + rng.below(max_nodes.max(3) as u64 - 1) as usize;
    let labels: Vec<Symbol> = (0..n).map(|_| rng.base()).collect();
    let mut edges = Vec::new();
    let mut out_degree = vec![0u32; n];
    for (i, d) in out_degree.iter_mut().enumerate().take(n - 1) {
        if rng.below(100) < 85 {
            edges.push((i as u32, i as u32 + 1));
            *d += 1;
        }
    }
    // Extra edges, forward or backward, capped at out-degree 3.
    let extra = n as u64 / 3 + 1;
    for _ in 0..extra {
        let u = rng.below(n as u64) as usize;
        let v = rng.below(n as u64) as u32;
        if out_degree[u] < 3 && u as u32 != v {
            edges.push((u as u32, v));
            out_degree[u] += 1;
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let mut g = LabeledGraph::new(labels, &edges).expect("generated edges are in range");
    g.augment();
    g
}

/// A long chain of random bases with a single-base bubble every `snp_every`
/// positions: the shape of a linear reference with sparse variants.
pub fn chain_with_snps(seed: u64, length: usize, snp_every: usize) -> LabeledGraph {
    assert!(length >= 2 && snp_every >= 2);
    let mut rng = SplitMix64::new(seed);
    let mut labels: Vec<Symbol> = (0..length).map(|_| rng.base()).collect();
    let mut edges: Vec<(u32, u32)> = (0..length - 1).map(|i| (i as u32, i as u32 + 1)).collect();
    let mut next_id = length as u32;
    let mut pos = snp_every;
    while pos + 1 < length {
        // An alternative base differing from the reference at this position.
        let alt = loop {
            let c = rng.base();
            if c != labels[pos] {
                break c;
            }
        };
        labels.push(alt);
        edges.push((pos as u32 - 1, next_id));
        edges.push((next_id, pos as u32 + 1));
        next_id += 1;
        pos += snp_every;
    }
    let mut g = LabeledGraph::new(labels, &edges).expect("generated edges are in range");
    g.augment();
    g
}

/// A uniform random pattern over the bases.
pub fn random_pattern(rng: &mut SplitMix64, len: usize) -> Vec<Symbol> {
    (0..len).map(|_| rng.base()).collect()
}

/// A pattern sampled by walking the graph, so that a good fraction of test
/// queries actually match. Falls back to a uniform pattern on dead ends.
pub fn path_pattern(rng: &mut SplitMix64, g: &LabeledGraph, len: usize) -> Vec<Symbol> {
    let real = g.real_count();
    if real == 0 {
        return random_pattern(rng, len);
    }
    let mut node = rng.below(real as u64) as u32;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(g.label(node));
        let succ: Vec<u32> =
            g.out_edges(node).iter().copied().filter(|&v| v < real).collect();
        if succ.is_empty() {
            break;
        }
        node = succ[rng.below(succ.len() as u64) as usize];
    }
    while out.len() < len {
        out.push(rng.base());
    }
    out
}
