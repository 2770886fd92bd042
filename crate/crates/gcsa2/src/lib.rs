//! # gcsa2
//!
//! A succinct path index for character-labeled graphs. The index represents a
//! pruned de Bruijn graph of order `P` over the paths of an input graph and
//! encodes it with a generalization of the FM-index. Queries:
//!
//! * [`EncodedIndex::find`] — lexicographic range of graph positions matching a pattern,
//! * [`EncodedIndex::locate`] — start nodes of the matching paths,
//! * [`CountSupport::count`] — number of distinct start nodes in a range, and
//! * [`find_mems`] — maximal exact matches between a query and the indexed paths,
//!
//! with exact results for patterns up to length `P` and verifiable candidates
//! beyond that.
//!
//! ```
//! use gcsa2::{LabeledGraph, GraphFormat, construction::{build_index, ConstructionConfig}};
//!
//! let tsv = "N\t1\tA\nN\t2\tC\nN\t3\tG\nN\t4\tT\nE\t1\t2\nE\t1\t3\nE\t2\t4\nE\t3\t4\n";
//! let mut graph = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
//! graph.augment();
//!
//! let cfg = ConstructionConfig { base_order: 3, doubling_steps: 0, ..Default::default() };
//! let built = build_index(&graph, &cfg).unwrap();
//!
//! let pattern = gcsa2::alphabet::pattern_from_str("ACT").unwrap();
//! let range = built.index.find(&pattern);
//! let hits = built.index.locate(range);
//! assert_eq!(hits, vec![built.index.value_map().real(0)]);
//! ```
//!
//! The semantic (non-succinct) path graph machinery lives in [`path_graph`];
//! it doubles as the correctness oracle for the encoded index and is
//! size-capped. Construction follows a prefix-doubling pipeline over path
//! records keyed by k-mer ranks; see [`construction`].

pub mod alphabet;
pub mod construction;
pub mod graph;
pub mod index;
pub mod path_graph;
pub mod serialize;
pub mod stats;
pub mod succinct;
pub mod suffix_tree;
pub mod synth;
pub mod text;

mod error;
#[cfg(test)]
pub(crate) mod test_util;

pub use alphabet::{Symbol, SymbolSet, SIGMA};
pub use error::{Error, Result};
pub use graph::{GraphFormat, LabeledGraph, PathStub, ValueMap};
pub use index::{EncodedIndex, Encoding, LexRange};
pub use path_graph::PathGraph;
pub use suffix_tree::{find_mems, CountSupport, LcpSupport, Mem};
