//! Browser bindings for the path index: build an index from graph text,
//! then explore find/locate/count and maximal exact matches interactively.
//! All results come back as JSON strings for a plain JavaScript page.

use wasm_bindgen::prelude::*;

use gcsa2::alphabet::{pattern_from_str, seq_to_string};
use gcsa2::construction::{build_index, BuiltIndex, ConstructionConfig};
use gcsa2::{find_mems, Encoding, GraphFormat, LabeledGraph};

#[wasm_bindgen]
pub struct Demo {
    graph: LabeledGraph,
    built: BuiltIndex,
}

fn err_str(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[wasm_bindgen]
impl Demo {
    /// Parses the graph text (TSV or GFA subset, auto-detected) and builds an
    /// index of order `base_order * 2^doubling`.
    #[wasm_bindgen(constructor)]
    pub fn new(graph_text: &str, base_order: u32, doubling: u32) -> Result<Demo, String> {
        let mut graph =
            LabeledGraph::parse(graph_text.as_bytes(), GraphFormat::Auto).map_err(err_str)?;
        graph.augment();
        if graph.real_count() > 5_000 {
            return Err("demo graphs are limited to 5000 nodes".to_string());
        }
        let cfg = ConstructionConfig {
            base_order: base_order as u64,
            doubling_steps: doubling,
            path_cap: 2_000_000,
            encoding: Encoding::Simplified,
            ..Default::default()
        };
        cfg.validate().map_err(err_str)?;
        let built = build_index(&graph, &cfg).map_err(err_str)?;
        Ok(Demo { graph, built })
    }

    pub fn order(&self) -> u32 {
        self.built.index.order() as u32
    }

    /// Build statistics for the status panel.
    pub fn stats_json(&self) -> String {
        let stats =
            gcsa2::stats::compute(&self.built.index, Some(&self.built.lcp), Some(&self.built.counts));
        serde_json::json!({
            "order": stats.order,
            "kmers": stats.kmer_count,
            "nodes": stats.node_count,
            "edges": stats.edge_count,
            "sampled_nodes": stats.sampled_nodes,
            "index_bytes": stats.index_bytes,
            "extension_bytes": stats.extension_bytes,
            "bits_per_kmer": stats.bits_per_kmer(),
        })
        .to_string()
    }

    /// The input graph for rendering: labels, edges, and the value offset
    /// that maps node ids to index values.
    pub fn graph_json(&self) -> String {
        let real = self.graph.real_count();
        let labels: Vec<String> =
            (0..real).map(|v| self.graph.label(v).to_string()).collect();
        let mut edges = Vec::new();
        for u in 0..real {
            for &v in self.graph.out_edges(u) {
                if v < real {
                    edges.push(serde_json::json!([u, v]));
                }
            }
        }
        serde_json::json!({
            "labels": labels,
            "edges": edges,
            "value_offset": self.built.index.value_map().order,
        })
        .to_string()
    }

    /// The path graph node table: keys, value sets, sampled flags.
    pub fn keys_json(&self) -> String {
        let nodes: Vec<serde_json::Value> = self
            .built
            .path_graph
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| {
                serde_json::json!({
                    "key": seq_to_string(&n.key),
                    "values": n.values.iter().collect::<Vec<_>>(),
                    "sampled": self.built.index.is_sampled(i),
                })
            })
            .collect();
        serde_json::json!(nodes).to_string()
    }

    /// Backward search plus locate, count, and graph verification for one
    /// pattern.
    pub fn locate_json(&self, pattern: &str) -> Result<String, String> {
        let pattern = pattern_from_str(pattern.trim()).map_err(err_str)?;
        let range = self.built.index.find(&pattern);
        let count = self.built.counts.count(range);
        let (verified, filtered) = self.built.index.locate_verified(&self.graph, &pattern);
        let vmap = self.built.index.value_map();
        let nodes: Vec<u64> = verified.iter().filter_map(|&v| vmap.to_real(v)).map(u64::from).collect();
        Ok(serde_json::json!({
            "pattern": seq_to_string(&pattern),
            "sp": range.sp,
            "ep": range.ep,
            "matched_keys": range.len(),
            "count": count,
            "values": verified,
            "graph_nodes": nodes,
            "filtered": filtered,
            "exact": pattern.len() as u64 <= self.built.index.order(),
        })
        .to_string())
    }

    /// Maximal exact matches of the query against the indexed paths.
    pub fn mems_json(&self, query: &str, min_len: usize) -> Result<String, String> {
        let query = pattern_from_str(query.trim()).map_err(err_str)?;
        if min_len == 0 {
            return Err("min_len must be at least 1".to_string());
        }
        let mems = find_mems(&self.built.index, &self.built.lcp, &query, min_len);
        let vmap = self.built.index.value_map();
        let items: Vec<serde_json::Value> = mems
            .iter()
            .map(|m| {
                let hits = self.built.index.locate(m.range);
                let nodes: Vec<u64> =
                    hits.iter().filter_map(|&v| vmap.to_real(v)).map(u64::from).collect();
                serde_json::json!({
                    "query_start": m.start,
                    "query_end": m.end,
                    "text": seq_to_string(&query[m.start..m.end]),
                    "sp": m.range.sp,
                    "ep": m.range.ep,
                    "graph_nodes": nodes,
                    "needs_verification": m.needs_verification,
                })
            })
            .collect();
        Ok(serde_json::json!({
            "query": seq_to_string(&query),
            "mems": items,
        })
        .to_string())
    }
}
