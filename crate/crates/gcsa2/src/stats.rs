//! Index statistics: counts and serialized component sizes.

use crate::index::EncodedIndex;
use crate::serialize;
use crate::suffix_tree::{CountSupport, LcpSupport};
use crate::Encoding;

/// Size and shape figures for one index, with component bytes measured from
/// the serialized representation.
#[derive(Clone, Debug)]
pub struct IndexStats {
    pub order: u64,
    pub doubling_steps: u32,
    pub encoding: Encoding,
    pub node_count: u64,
    pub edge_count: u64,
    pub sampled_nodes: u64,
    pub stored_values: u64,
    /// Distinct order-length path labels, when counted at build time.
    pub kmer_count: Option<u64>,
    /// Degree and predecessor structures plus the symbol counts.
    pub graph_bytes: u64,
    /// Everything needed for find/locate: graph plus samples.
    pub index_bytes: u64,
    /// Suffix-tree extensions (LCP and counting supports).
    pub extension_bytes: u64,
}

impl IndexStats {
    pub fn bits_per_kmer(&self) -> Option<f64> {
        self.kmer_count.map(|k| self.index_bytes as f64 * 8.0 / k as f64)
    }

    pub fn graph_bits_per_kmer(&self) -> Option<f64> {
        self.kmer_count.map(|k| self.graph_bytes as f64 * 8.0 / k as f64)
    }

    pub fn total_bits_per_kmer(&self) -> Option<f64> {
        self.kmer_count
            .map(|k| (self.index_bytes + self.extension_bytes) as f64 * 8.0 / k as f64)
    }

    /// Plain-text block, one `name<TAB>value` per line.
    pub fn render_text(&self) -> String {
        let fmt_opt = |v: Option<u64>| v.map_or("?".to_string(), |v| v.to_string());
        let fmt_bits = |v: Option<f64>| v.map_or("?".to_string(), |v| format!("{v:.3}"));
        let mut out = String::new();
        out.push_str(&format!("order\t{}\n", self.order));
        out.push_str(&format!("doubling\t{}\n", self.doubling_steps));
        out.push_str(&format!(
            "encoding\t{}\n",
            match self.encoding {
                Encoding::General => "general",
                Encoding::Simplified => "simplified",
            }
        ));
        out.push_str(&format!("kmers\t{}\n", fmt_opt(self.kmer_count)));
        out.push_str(&format!("nodes\t{}\n", self.node_count));
        out.push_str(&format!("edges\t{}\n", self.edge_count));
        out.push_str(&format!("sampled_nodes\t{}\n", self.sampled_nodes));
        out.push_str(&format!("stored_values\t{}\n", self.stored_values));
        out.push_str(&format!("graph_bytes\t{}\n", self.graph_bytes));
        out.push_str(&format!("index_bytes\t{}\n", self.index_bytes));
        out.push_str(&format!("extension_bytes\t{}\n", self.extension_bytes));
        out.push_str(&format!(
            "graph_bits_per_kmer\t{}\n",
            fmt_bits(self.graph_bits_per_kmer())
        ));
        out.push_str(&format!("index_bits_per_kmer\t{}\n", fmt_bits(self.bits_per_kmer())));
        out.push_str(&format!(
            "total_bits_per_kmer\t{}\n",
            fmt_bits(self.total_bits_per_kmer())
        ));
        out
    }
}

struct CountingSink(u64);

impl std::io::Write for CountingSink {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.0 += buf.len() as u64;
        Ok(buf.len())
    }
    fn flush(&mut self) -> std::io::Result<()> {
        Ok(())
    }
}

pub fn compute(
    idx: &EncodedIndex,
    lcp: Option<&LcpSupport>,
    counts: Option<&CountSupport>,
) -> IndexStats {
    let mut core = CountingSink(0);
    serialize::write_index_core(&mut core, idx).expect("counting sink cannot fail");
    let index_bytes = core.0;
    // The sample structures are the tail of the core section; the graph part
    // is everything before them.
    let samples_bytes = {
        let mut sink = CountingSink(0);
        serialize::write_samples(&mut sink, idx).expect("counting sink cannot fail");
        sink.0
    };
    let mut ext = CountingSink(0);
    if let Some(lcp) = lcp {
        serialize::write_lcp(&mut ext, lcp).expect("counting sink cannot fail");
    }
    if let Some(counts) = counts {
        serialize::write_counts(&mut ext, counts).expect("counting sink cannot fail");
    }
    IndexStats {
        order: idx.order(),
        doubling_steps: idx.doubling_steps(),
        encoding: idx.encoding(),
        node_count: idx.node_count() as u64,
        edge_count: idx.edge_count(),
        sampled_nodes: idx.sampled_nodes(),
        stored_values: idx.stored_values() as u64,
        kmer_count: (idx.kmer_count() != u64::MAX).then(|| idx.kmer_count()),
        graph_bytes: index_bytes - samples_bytes,
        index_bytes,
        extension_bytes: ext.0,
    }
}
