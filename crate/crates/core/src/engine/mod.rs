//! Clustering refinement drivers.
//!
//! Both modes start with connected-component refinement and then run the
//! recursive check on every surviving component. Components are independent
//! tasks on a rayon pool of `parallelism` workers. Output cluster IDs are
//! assigned after all tasks finish, by sorting clusters on their smallest
//! member, so results do not depend on scheduling.

mod ccr;
mod check;
mod criterion;

use std::time::Duration;

use crate::cda::{CdaConfig, CommunityDetector};
use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub use ccr::refine_connected_components;
pub use check::{cm_check, wcc_check, ClusterSink, SPAWN_MIN_VERTICES};
pub use criterion::Criterion;

use check::{Context, Splitter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Wcc,
    Cm,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinementConfig {
    pub mode: Mode,
    pub criterion: Criterion,
    /// Connected components must have more than this many vertices to
    /// survive the initial refinement.
    pub s_pre: usize,
    /// Pieces split off during recursion must have more than this many
    /// vertices to be checked again.
    pub s_post: usize,
    /// Community detection used by CM; ignored by WCC.
    pub cda: Option<CdaConfig>,
    pub parallelism: usize,
}

impl Default for RefinementConfig {
    fn default() -> Self {
        RefinementConfig {
            mode: Mode::Wcc,
            criterion: Criterion::Log10,
            s_pre: 1,
            s_post: 1,
            cda: None,
            parallelism: default_parallelism(),
        }
    }
}

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RefinementConfig {
    pub fn wcc(criterion: Criterion) -> Self {
        RefinementConfig {
            criterion,
            ..Default::default()
        }
    }

    pub fn cm(criterion: Criterion, cda: CdaConfig) -> Self {
        RefinementConfig {
            mode: Mode::Cm,
            criterion,
            cda: Some(cda),
            ..Default::default()
        }
    }

    pub fn with_parallelism(mut self, parallelism: usize) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn with_thresholds(mut self, s_pre: usize, s_post: usize) -> Self {
        self.s_pre = s_pre;
        self.s_post = s_post;
        self
    }

    /// Checks hard constraints and returns soft warnings.
    pub fn validate(&self) -> Result<Vec<String>> {
        self.criterion.validate()?;
        if self.parallelism == 0 {
            return Err(Error::InvalidConfig("parallelism must be at least 1".into()));
        }
        if let Some(cda) = &self.cda {
            cda.validate()?;
        }
        let mut warnings = Vec::new();
        if self.s_post < self.s_pre {
            warnings.push(format!(
                "s_post ({}) is below s_pre ({}); recursion can emit clusters that the initial refinement would have dropped",
                self.s_post, self.s_pre
            ));
        }
        Ok(warnings)
    }
}

/// Counters for one refinement run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunStats {
    pub input_clusters: usize,
    pub ccr_components: usize,
    pub output_clusters: usize,
    /// Vertices clustered in the input.
    pub vertices_in: usize,
    pub vertices_out: usize,
    pub vertices_discarded: usize,
    pub min_cut_calls: usize,
    pub cda_calls: usize,
    pub max_depth: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone)]
pub struct Refinement {
    /// Output clusters numbered `0..k` by smallest member.
    pub clustering: Clustering,
    /// Input cluster ID each output cluster was refined from, indexed by
    /// output cluster ID.
    pub lineage: Vec<u64>,
    /// Input-clustered vertices absent from the output, ascending.
    pub discarded: Vec<usize>,
    pub stats: RunStats,
}

/// Well-Connected Clusters: recursive min-cut bisection.
pub fn run_wcc(g: &Graph, clustering: &Clustering, cfg: &RefinementConfig) -> Result<Refinement> {
    if cfg.mode != Mode::Wcc {
        return Err(Error::InvalidConfig("run_wcc called with mode cm".into()));
    }
    run(g, clustering, cfg, Splitter::Bisect)
}

/// Connectivity Modifier using the detector described by `cfg.cda`.
pub fn run_cm(g: &Graph, clustering: &Clustering, cfg: &RefinementConfig) -> Result<Refinement> {
    let cda = cfg
        .cda
        .as_ref()
        .ok_or_else(|| Error::InvalidConfig("mode cm needs a community detection config".into()))?;
    let detector = cda.detector()?;
    run_cm_with(g, clustering, cfg, detector.as_ref())
}

/// Connectivity Modifier with a caller-supplied detector.
pub fn run_cm_with(
    g: &Graph,
    clustering: &Clustering,
    cfg: &RefinementConfig,
    detector: &dyn CommunityDetector,
) -> Result<Refinement> {
    if cfg.mode != Mode::Cm {
        return Err(Error::InvalidConfig("run_cm called with mode wcc".into()));
    }
    run(g, clustering, cfg, Splitter::Modify(detector))
}

/// Dispatches on `cfg.mode`.
pub fn refine(g: &Graph, clustering: &Clustering, cfg: &RefinementConfig) -> Result<Refinement> {
    match cfg.mode {
        Mode::Wcc => run_wcc(g, clustering, cfg),
        Mode::Cm => run_cm(g, clustering, cfg),
    }
}

// `Instant::now` panics on wasm32-unknown-unknown; there elapsed reads as zero.
struct Stopwatch(#[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))] std::time::Instant);

impl Stopwatch {
    fn start() -> Self {
        Stopwatch(
            #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
            std::time::Instant::now(),
        )
    }

    fn elapsed(&self) -> Duration {
        #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
        return self.0.elapsed();
        #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
        Duration::ZERO
    }
}

fn run(
    g: &Graph,
    clustering: &Clustering,
    cfg: &RefinementConfig,
    splitter: Splitter<'_>,
) -> Result<Refinement> {
    let start = Stopwatch::start();
    cfg.validate()?;
    let sink = ClusterSink::new();
    let ctx = Context {
        cfg,
        splitter,
        sink: &sink,
    };

    let pool = if cfg.parallelism > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.parallelism)
            .build()
            .ok()
    } else {
        None
    };
    let components = match &pool {
        None => {
            let components = refine_connected_components(g, clustering, cfg.s_pre)?;
            for comp in &components {
                let sub = g.induced_subgraph(comp)?;
                check::process(sub, 1, &ctx, None);
            }
            components.len()
        }
        Some(pool) => pool.install(|| -> Result<usize> {
            let components = ccr::refine_connected_components_par(g, clustering, cfg.s_pre)?;
            let count = components.len();
            let ctx = &ctx;
            rayon::scope(|s| {
                for comp in components {
                    s.spawn(move |s| match g.induced_subgraph(&comp) {
                        Ok(sub) => check::process(sub, 1, ctx, Some(s)),
                        Err(err) => ctx.sink.fail(err),
                    });
                }
            });
            Ok(count)
        })?,
    };
    check::finish(&sink)?;

    let clusters = sink.clusters();
    let output = Clustering::from_sets(&clusters);
    let lineage = clusters
        .iter()
        .map(|c| clustering.cluster_of(c[0]).expect("output vertices come from input clusters"))
        .collect();
    let discarded: Vec<usize> = clustering
        .vertices()
        .filter(|&v| output.cluster_of(v).is_none())
        .collect();

    let stats = RunStats {
        input_clusters: clustering.num_clusters(),
        ccr_components: components,
        output_clusters: clusters.len(),
        vertices_in: clustering.len(),
        vertices_out: output.len(),
        vertices_discarded: discarded.len(),
        min_cut_calls: sink.min_cut_calls(),
        cda_calls: sink.cda_calls(),
        max_depth: sink.max_depth(),
        elapsed: start.elapsed(),
    };
    Ok(Refinement {
        clustering: output,
        lineage,
        discarded,
        stats,
    })
}
