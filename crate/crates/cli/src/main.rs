use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use wellcut::engine::default_parallelism;
use wellcut::{CdaConfig, CdaKind, Criterion, Mode, RefinementConfig, RunManifest};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Wcc,
    Cm,
}

/// Refine a graph clustering until every cluster is connected and its
/// minimum cut exceeds the chosen criterion.
#[derive(Debug, Parser)]
#[command(name = "wellcut", version)]
struct Args {
    /// Edge list: one whitespace-separated vertex pair per line.
    #[arg(long)]
    graph: PathBuf,
    /// Input clustering: `vertex<TAB>cluster` lines.
    #[arg(long)]
    clusters: PathBuf,
    /// Output clustering path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "wcc")]
    mode: ModeArg,
    /// log10, log2, sqrt or linear:K.
    #[arg(long, default_value = "log10", value_parser = parse_criterion)]
    criterion: Criterion,
    #[arg(long, default_value_t = 1)]
    s_pre: usize,
    #[arg(long, default_value_t = 1)]
    s_post: usize,
    /// Worker threads; defaults to the machine width.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// CPM resolution for the community detector (cm mode).
    #[arg(long, default_value_t = 0.01)]
    cda_resolution: f64,
    /// Maximum local-move/aggregation passes of the CPM detector.
    #[arg(long, default_value_t = 10)]
    cda_max_passes: usize,
    /// Use precomputed `vertex<TAB>community` labels instead of CPM (cm mode).
    #[arg(long)]
    cda_labels: Option<PathBuf>,
    /// Seed for the CPM detector's visiting order.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write a key: value statistics report here.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Include the discarded vertex list in the statistics report.
    #[arg(long)]
    list_discarded: bool,
}

fn parse_criterion(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(|e: wellcut::Error| e.to_string())
}

impl Args {
    fn manifest(self) -> RunManifest {
        let mode = match self.mode {
            ModeArg::Wcc => Mode::Wcc,
            ModeArg::Cm => Mode::Cm,
        };
        let cda = (mode == Mode::Cm).then_some(CdaConfig {
            kind: match self.cda_labels {
                Some(path) => CdaKind::ExternalLabels(path),
                None => CdaKind::CpmHeuristic,
            },
            resolution: self.cda_resolution,
            max_passes: self.cda_max_passes,
            seed: self.seed,
        });
        RunManifest {
            graph_path: self.graph,
            clustering_path: self.clusters,
            output_path: self.out,
            config: RefinementConfig {
                mode,
                criterion: self.criterion,
                s_pre: self.s_pre,
                s_post: self.s_post,
                cda,
                parallelism: self.threads.map_or_else(default_parallelism, |t| t as usize),
            },
            stats_path: self.stats,
            list_discarded: self.list_discarded,
        }
    }
}

fn run(manifest: RunManifest) -> anyhow::Result<()> {
    let outcome = manifest.run().context("wellcut failed")?;
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    let s = &outcome.refinement.stats;
    println!(
        "graph: {} vertices, {} edges ({} self-loops, {} duplicates dropped)",
        outcome.graph_vertices,
        outcome.graph_edges,
        outcome.edge_list.build.self_loops,
        outcome.edge_list.build.duplicates
    );
    println!(
        "clusters: {} in, {} after CCR, {} out",
        s.input_clusters, s.ccr_components, s.output_clusters
    );
    println!(
        "vertices: {} clustered in, {} out, {} discarded",
        s.vertices_in, s.vertices_out, s.vertices_discarded
    );
    println!(
        "work: {} min cuts, {} CDA calls, max depth {}, {:.3}s",
        s.min_cut_calls,
        s.cda_calls,
        s.max_depth,
        s.elapsed.as_secs_f64()
    );
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.manifest()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
