//! Post-processing of graph clusterings so that every output cluster is
//! connected and well connected: its global minimum edge cut strictly exceeds
//! a criterion `f(n)` of its size.
//!
//! Two refinement modes are provided. WCC repeatedly bisects failing clusters
//! along their minimum cut. CM bisects as well, then re-clusters each side
//! with a community detection algorithm before recursing. Neither mode ever
//! merges clusters.
//!
//! ```
//! use wellcut::{synth, Clustering, Criterion, RefinementConfig};
//!
//! // Three 6-cliques in a chain, given as a single input cluster.
//! let g = synth::clique_chain(3, 6);
//! let input: Clustering = (0..18).map(|v| (v, 0)).collect();
//! let out = wellcut::run_wcc(&g, &input, &RefinementConfig::wcc(Criterion::Log10)).unwrap();
//! assert_eq!(out.clustering.num_clusters(), 3);
//! ```

pub mod cda;
pub mod clustering;
pub mod engine;
pub mod error;
pub mod graph;
pub mod io;
pub mod mincut;
pub mod pipeline;
pub mod synth;

pub use cda::{
    get_communities, score_cpm, CdaConfig, CdaKind, CommunityAssignment, CommunityDetector,
    CpmDetector, ExternalLabels, SingleCommunity,
};
pub use clustering::Clustering;
pub use engine::{
    cm_check, refine, refine_connected_components, run_cm, run_cm_with, run_wcc, wcc_check,
    ClusterSink, Criterion, Mode, Refinement, RefinementConfig, RunStats,
};
pub use error::{Error, Result};
pub use graph::{Graph, Subgraph};
pub use mincut::{brute_force_min_cut, global_min_cut, MinCutResult};
pub use pipeline::{RunManifest, RunOutcome};
