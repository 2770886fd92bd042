//! Command-line interface: build, query, stats, and verify.
//!
//! Exit codes: 0 success, 1 I/O or internal error, 2 usage, 3 parse error
//! (graph or index file), 4 verification failure, 5 resource cap exceeded.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use gcsa2::alphabet::{pattern_from_str, seq_to_string};
use gcsa2::construction::{build_index, ConstructionConfig};
use gcsa2::path_graph::{oracle_locate, PathGraph};
use gcsa2::serialize::IndexContainer;
use gcsa2::synth::{path_pattern, random_pattern, SplitMix64};
use gcsa2::{find_mems, Encoding, Error, GraphFormat, LabeledGraph, Symbol};

const EXIT_USAGE: u8 = 2;
const EXIT_PARSE: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_CAP: u8 = 5;

#[derive(Parser)]
#[command(
    name = "gcsa2",
    about = "Succinct path index for character-labeled graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Auto,
    Tsv,
    Gfa,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> GraphFormat {
        match f {
            FormatArg::Auto => GraphFormat::Auto,
            FormatArg::Tsv => GraphFormat::Tsv,
            FormatArg::Gfa => GraphFormat::Gfa,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum EncodingArg {
    Simplified,
    General,
}

#[derive(Subcommand)]
enum Command {
    /// Build an index from a graph file.
    Build {
        /// Input graph (TSV or GFA subset).
        graph: PathBuf,
        /// Output index file.
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: FormatArg,
        /// Base path length k.
        #[arg(long, default_value_t = 4)]
        order: u64,
        /// Doubling steps d; the final order is k * 2^d.
        #[arg(long, default_value_t = 0)]
        doubling: u32,
        /// Extra locate samples along unary chains.
        #[arg(long, default_value_t = 64)]
        sample_period: u64,
        /// Hard limit on enumerated paths.
        #[arg(long, default_value_t = 10_000_000)]
        path_cap: u64,
        #[arg(long, value_enum, default_value = "simplified")]
        encoding: EncodingArg,
        /// Stage extension rounds in partition files under this directory.
        #[arg(long)]
        staging_dir: Option<PathBuf>,
        /// Skip counting distinct order-length labels (faster, stats show ?).
        #[arg(long)]
        no_kmer_count: bool,
        #[arg(long)]
        json: bool,
    },
    /// Query an index.
    Query {
        /// Index file produced by build.
        index: PathBuf,
        #[command(subcommand)]
        kind: QueryKind,
    },
    /// Print index statistics.
    Stats {
        index: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check an index against its graph with sampled oracle comparisons.
    Verify {
        index: PathBuf,
        graph: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: FormatArg,
        /// Number of random patterns to check.
        #[arg(long, default_value_t = 500)]
        budget: u64,
        /// Refuse graphs larger than this (the oracle is exponential-ish).
        #[arg(long, default_value_t = 100)]
        max_nodes: u32,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Args)]
struct QueryCommon {
    /// Patterns over A, C, G, T, N.
    patterns: Vec<String>,
    /// Read additional patterns from a file, one per line.
    #[arg(long)]
    patterns_file: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum QueryKind {
    /// Lexicographic range of the matching nodes.
    Find {
        #[command(flatten)]
        common: QueryCommon,
    },
    /// Start nodes of the matching paths.
    Locate {
        #[command(flatten)]
        common: QueryCommon,
        /// Re-check each hit against the graph and report false positives.
        #[arg(long, requires = "graph")]
        verify: bool,
        /// Graph file for --verify.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        format: FormatArg,
    },
    /// Number of distinct start nodes.
    Count {
        #[command(flatten)]
        common: QueryCommon,
    },
    /// Maximal exact matches between the query and the indexed paths.
    Mem {
        #[command(flatten)]
        common: QueryCommon,
        #[arg(long, default_value_t = 1)]
        min_len: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("gcsa2: {err}");
            let code = match err {
                Error::Parse { .. } | Error::Format(_) => EXIT_PARSE,
                Error::PathCapExceeded { .. } | Error::OracleCapExceeded { .. } => EXIT_CAP,
                Error::Config(_) => EXIT_USAGE,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}

fn load_graph(path: &PathBuf, format: FormatArg) -> Result<LabeledGraph, Error> {
    let file = File::open(path)?;
    let mut g = LabeledGraph::parse(BufReader::new(file), format.into())?;
    g.augment();
    Ok(g)
}

fn load_container(path: &PathBuf) -> Result<IndexContainer, Error> {
    let file = File::open(path)?;
    IndexContainer::load(&mut BufReader::new(file))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Build {
            graph,
            output,
            format,
            order,
            doubling,
            sample_period,
            path_cap,
            encoding,
            staging_dir,
            no_kmer_count,
            json,
        } => {
            let cfg = ConstructionConfig {
                base_order: order,
                doubling_steps: doubling,
                sample_period,
                path_cap,
                encoding: match encoding {
                    EncodingArg::Simplified => Encoding::Simplified,
                    EncodingArg::General => Encoding::General,
                },
                staging_dir,
                count_kmers: !no_kmer_count,
            };
            cfg.validate()?;
            let g = load_graph(&graph, format)?;
            let built = build_index(&g, &cfg)?;
            let container = IndexContainer {
                index: built.index,
                lcp: Some(built.lcp),
                counts: Some(built.counts),
            };
            let mut out = BufWriter::new(File::create(&output)?);
            container.save(&mut out)?;
            out.flush()?;
            let stats = gcsa2::stats::compute(
                &container.index,
                container.lcp.as_ref(),
                container.counts.as_ref(),
            );
            if json {
                println!("{}", stats_json(&stats));
            } else {
                print!("{}", stats.render_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Stats { index, json } => {
            let container = load_container(&index)?;
            let stats = gcsa2::stats::compute(
                &container.index,
                container.lcp.as_ref(),
                container.counts.as_ref(),
            );
            if json {
                println!("{}", stats_json(&stats));
            } else {
                print!("{}", stats.render_text());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Query { index, kind } => run_query(&index, kind),
        Command::Verify { index, graph, format, budget, max_nodes, seed } => {
            run_verify(&index, &graph, format, budget, max_nodes, seed)
        }
    }
}

fn stats_json(stats: &gcsa2::stats::IndexStats) -> String {
    json!({
        "order": stats.order,
        "doubling": stats.doubling_steps,
        "encoding": match stats.encoding {
            Encoding::General => "general",
            Encoding::Simplified => "simplified",
        },
        "kmers": stats.kmer_count,
        "nodes": stats.node_count,
        "edges": stats.edge_count,
        "sampled_nodes": stats.sampled_nodes,
        "stored_values": stats.stored_values,
        "graph_bytes": stats.graph_bytes,
        "index_bytes": stats.index_bytes,
        "extension_bytes": stats.extension_bytes,
        "graph_bits_per_kmer": stats.graph_bits_per_kmer(),
        "index_bits_per_kmer": stats.bits_per_kmer(),
        "total_bits_per_kmer": stats.total_bits_per_kmer(),
    })
    .to_string()
}

fn collect_patterns(common: &QueryCommon) -> Result<Vec<Vec<Symbol>>, Error> {
    let mut raw: Vec<String> = common.patterns.clone();
    if let Some(path) = &common.patterns_file {
        let mut text = String::new();
        File::open(path)?.read_to_string(&mut text)?;
        raw.extend(text.lines().map(|l| l.trim().to_string()).filter(|l| !l.is_empty()));
    }
    if raw.is_empty() && common.patterns_file.is_none() {
        return Err(Error::Config("no patterns given".into()));
    }
    raw.iter()
        .map(|p| {
            pattern_from_str(p).map_err(|_| {
                Error::Config(format!("pattern {p:?} must use the alphabet A, C, G, T, N"))
            })
        })
        .collect()
}

/// Runs one closure per pattern on a bounded worker pool; results come back
/// in input order. `GCSA2_THREADS` bounds the pool.
fn pooled<F>(patterns: &[Vec<Symbol>], work: F) -> Vec<String>
where
    F: Fn(usize, &[Symbol]) -> String + Sync,
{
    let threads = std::env::var("GCSA2_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or_else(|| {
            std::thread::available_parallelism().map(|n| n.get().min(8)).unwrap_or(1)
        })
        .max(1)
        .min(patterns.len().max(1));
    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, String)>();
    std::thread::scope(|scope| {
        for _ in 0..threads {
            let tx = tx.clone();
            let next = &next;
            let work = &work;
            scope.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= patterns.len() {
                    break;
                }
                tx.send((i, work(i, &patterns[i]))).expect("collector alive");
            });
        }
        drop(tx);
        // Sequence-numbered reassembly keeps the output order deterministic.
        let mut results: Vec<Option<String>> = vec![None; patterns.len()];
        for (i, line) in rx {
            results[i] = Some(line);
        }
        results.into_iter().map(|r| r.expect("every pattern processed")).collect()
    })
}

fn fmt_values(values: &[u64]) -> String {
    let inner: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn run_query(index_path: &PathBuf, kind: QueryKind) -> Result<ExitCode, Error> {
    let container = load_container(index_path)?;
    let idx = &container.index;
    match kind {
        QueryKind::Find { common } => {
            let patterns = collect_patterns(&common)?;
            let lines = pooled(&patterns, |_, p| {
                let r = idx.find(p);
                if common.json {
                    json!({"pattern": seq_to_string(p), "sp": r.sp, "ep": r.ep}).to_string()
                } else {
                    format!("{}\t{}\t{}", seq_to_string(p), r.sp, r.ep)
                }
            });
            print_lines(lines)
        }
        QueryKind::Locate { common, verify, graph, format } => {
            let patterns = collect_patterns(&common)?;
            let g = match (verify, graph) {
                (true, Some(path)) => Some(load_graph(&path, format)?),
                _ => None,
            };
            let lines = pooled(&patterns, |_, p| {
                let r = idx.find(p);
                if let Some(g) = &g {
                    let (verified, filtered) = idx.locate_verified(g, p);
                    if common.json {
                        json!({
                            "pattern": seq_to_string(p), "sp": r.sp, "ep": r.ep,
                            "values": verified, "filtered": filtered,
                        })
                        .to_string()
                    } else {
                        format!(
                            "{}\t{}\t{}\t{}\t{}",
                            seq_to_string(p),
                            r.sp,
                            r.ep,
                            fmt_values(&verified),
                            fmt_values(&filtered)
                        )
                    }
                } else {
                    let values = idx.locate(r);
                    if common.json {
                        json!({
                            "pattern": seq_to_string(p), "sp": r.sp, "ep": r.ep,
                            "values": values,
                        })
                        .to_string()
                    } else {
                        format!(
                            "{}\t{}\t{}\t{}",
                            seq_to_string(p),
                            r.sp,
                            r.ep,
                            fmt_values(&values)
                        )
                    }
                }
            });
            print_lines(lines)
        }
        QueryKind::Count { common } => {
            let patterns = collect_patterns(&common)?;
            let counts = container
                .counts
                .as_ref()
                .ok_or_else(|| Error::Config("index was built without counting support".into()))?;
            let lines = pooled(&patterns, |_, p| {
                let r = idx.find(p);
                let count = counts.count(r);
                if common.json {
                    json!({"pattern": seq_to_string(p), "sp": r.sp, "ep": r.ep, "count": count})
                        .to_string()
                } else {
                    format!("{}\t{}\t{}\t{}", seq_to_string(p), r.sp, r.ep, count)
                }
            });
            print_lines(lines)
        }
        QueryKind::Mem { common, min_len } => {
            if min_len < 1 {
                return Err(Error::Config("--min-len must be at least 1".into()));
            }
            let patterns = collect_patterns(&common)?;
            let lcp = container
                .lcp
                .as_ref()
                .ok_or_else(|| Error::Config("index was built without LCP support".into()))?;
            let lines = pooled(&patterns, |_, p| {
                let mems = find_mems(idx, lcp, p, min_len);
                if common.json {
                    json!({
                        "pattern": seq_to_string(p),
                        "mems": mems.iter().map(|m| json!({
                            "query_start": m.start,
                            "query_end": m.end,
                            "sp": m.range.sp,
                            "ep": m.range.ep,
                            "needs_verification": m.needs_verification,
                        })).collect::<Vec<_>>(),
                    })
                    .to_string()
                } else {
                    let mut block = format!("#pattern\t{}", seq_to_string(p));
                    for m in &mems {
                        block.push_str(&format!(
                            "\n{}\t{}\t{}\t{}\t{}",
                            m.start,
                            m.end,
                            m.range.sp,
                            m.range.ep,
                            if m.needs_verification { "V" } else { "-" }
                        ));
                    }
                    block
                }
            });
            print_lines(lines)
        }
    }
}

fn print_lines(lines: Vec<String>) -> Result<ExitCode, Error> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for line in lines {
        writeln!(out, "{line}")?;
    }
    Ok(ExitCode::SUCCESS)
}

/// Oracle-backed self check: locate/count/structure properties on sampled
/// patterns. Prints the first counterexample and exits 4 on failure.
fn run_verify(
    index_path: &PathBuf,
    graph_path: &PathBuf,
    format: FormatArg,
    budget: u64,
    max_nodes: u32,
    seed: u64,
) -> Result<ExitCode, Error> {
    let container = load_container(index_path)?;
    let g = load_graph(graph_path, format)?;
    if g.real_count() > max_nodes {
        return Err(Error::OracleCapExceeded {
            nodes: g.real_count() as usize,
            cap: max_nodes as usize,
        });
    }
    // A corrupted index may violate internal invariants in ways that panic
    // query code; report that as a verification failure, not a crash.
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        verify_properties(&container, &g, budget, seed)
    }));
    match outcome {
        Ok(result) => result,
        Err(_) => {
            println!("FAIL	internal	index structures are inconsistent");
            Ok(ExitCode::from(EXIT_VERIFY))
        }
    }
}

fn verify_properties(
    container: &IndexContainer,
    g: &LabeledGraph,
    budget: u64,
    seed: u64,
) -> Result<ExitCode, Error> {
    let idx = &container.index;
    let order = idx.order();

    // Structural checks through the oracle route.
    let oracle_pg = PathGraph::build_debruijn(g, order, 1 << 24)?.maximally_prune();
    if !oracle_pg.is_prefix_free()
        || !oracle_pg.short_keys_bound_holds()
        || !oracle_pg.no_prunable_prefix()
    {
        println!("FAIL\tstructure\tmaximally pruned graph violates its invariants");
        return Ok(ExitCode::from(EXIT_VERIFY));
    }
    if oracle_pg.node_count() != idx.node_count() {
        println!(
            "FAIL\tstructure\tindex has {} nodes, graph expects {}",
            idx.node_count(),
            oracle_pg.node_count()
        );
        return Ok(ExitCode::from(EXIT_VERIFY));
    }

    let mut rng = SplitMix64::new(seed);
    let mut patterns: Vec<Vec<Symbol>> = Vec::new();
    // Exhaustive over short base patterns, then random up to twice the order.
    let syms = [
        gcsa2::alphabet::A,
        gcsa2::alphabet::C,
        gcsa2::alphabet::G,
        gcsa2::alphabet::T,
    ];
    for a in syms {
        patterns.push(vec![a]);
        for b in syms {
            patterns.push(vec![a, b]);
        }
    }
    for i in 0..budget {
        let len = 1 + rng.below(2 * order) as usize;
        patterns.push(if i % 2 == 0 {
            path_pattern(&mut rng, g, len)
        } else {
            random_pattern(&mut rng, len)
        });
    }

    let mut checked = 0u64;
    for pattern in &patterns {
        let r = idx.find(pattern);
        let located: std::collections::BTreeSet<u64> = idx.locate(r).into_iter().collect();
        let truth = oracle_locate(g, pattern, order);
        let ok = if pattern.len() as u64 <= order {
            located == truth
        } else {
            // Beyond the order: supersets allowed, verification must filter.
            let (verified, _) = idx.locate_verified(g, pattern);
            truth.is_subset(&located)
                && verified.iter().copied().collect::<std::collections::BTreeSet<u64>>() == truth
        };
        if !ok {
            println!("FAIL\tlocate\t{}", seq_to_string(pattern));
            return Ok(ExitCode::from(EXIT_VERIFY));
        }
        if let Some(counts) = &container.counts {
            if counts.count(r) != idx.locate(r).len() as u64 {
                println!("FAIL\tcount\t{}", seq_to_string(pattern));
                return Ok(ExitCode::from(EXIT_VERIFY));
            }
        }
        checked += 1;
    }
    // Cross-check maximal exact matches on a few longer queries when the
    // LCP section is present.
    if let Some(lcp) = &container.lcp {
        for trial in 0..budget.min(50) {
            let q = path_pattern(&mut rng, g, (2 * order + trial % 7) as usize);
            let mems = find_mems(idx, lcp, &q, 1);
            for m in mems.iter().filter(|m| !m.needs_verification) {
                let truth = oracle_locate(g, &q[m.start..m.end], order);
                let got: std::collections::BTreeSet<u64> =
                    idx.locate(m.range).into_iter().collect();
                let right_maximal = m.end == q.len()
                    || oracle_locate(g, &q[m.start..m.end + 1], order).is_empty();
                let left_maximal = m.start == 0
                    || oracle_locate(g, &q[m.start - 1..m.end], order).is_empty();
                if got != truth || !right_maximal || !left_maximal {
                    println!("FAIL\tmem\t{}", seq_to_string(&q));
                    return Ok(ExitCode::from(EXIT_VERIFY));
                }
            }
            checked += 1;
        }
    }
    println!("PASS\t{} patterns checked", checked);
    Ok(ExitCode::SUCCESS)
}
