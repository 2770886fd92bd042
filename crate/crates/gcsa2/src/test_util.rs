//! Shared fixtures for unit tests.

use crate::graph::{GraphFormat, LabeledGraph};

/// Four real nodes 1:A -> {2:C, 3:G} -> 4:T, augmented. Internal ids follow
/// parse order: A=0, C=1, G=2, T=3.
pub fn g2() -> LabeledGraph {
    let tsv = "N\t1\tA\nN\t2\tC\nN\t3\tG\nN\t4\tT\nE\t1\t2\nE\t1\t3\nE\t2\t4\nE\t3\t4\n";
    let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
    g.augment();
    g
}

/// A single chain of the given label string, augmented.
pub fn chain(labels: &str) -> LabeledGraph {
    let mut tsv = String::new();
    for (i, c) in labels.chars().enumerate() {
        tsv.push_str(&format!("N\t{}\t{}\n", i + 1, c));
    }
    for i in 1..labels.len() {
        tsv.push_str(&format!("E\t{}\t{}\n", i, i + 1));
    }
    let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
    g.augment();
    g
}

/// Two nodes A <-> C, augmented (no attachment points).
pub fn two_cycle() -> LabeledGraph {
    let tsv = "N\t1\tA\nN\t2\tC\nE\t1\t2\nE\t2\t1\n";
    let mut g = LabeledGraph::parse(tsv.as_bytes(), GraphFormat::Tsv).unwrap();
    g.augment();
    g
}
