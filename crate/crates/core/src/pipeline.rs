//! File-to-file refinement runs.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::engine::{self, Mode, Refinement, RefinementConfig};
use crate::error::{Error, Result};
use crate::io::{self, EdgeListReport};

/// Everything needed for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub graph_path: PathBuf,
    pub clustering_path: PathBuf,
    pub output_path: PathBuf,
    pub config: RefinementConfig,
    pub stats_path: Option<PathBuf>,
    /// Include the discarded vertex list in the stats file.
    pub list_discarded: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub refinement: Refinement,
    pub edge_list: EdgeListReport,
    pub graph_vertices: usize,
    pub graph_edges: usize,
    pub warnings: Vec<String>,
}

/// Pipeline stage an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Config,
    ReadGraph,
    ReadClustering,
    Refine,
    WriteOutput,
    WriteStats,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::ReadGraph => "read graph",
            Stage::ReadClustering => "read clustering",
            Stage::Refine => "refine",
            Stage::WriteOutput => "write output",
            Stage::WriteStats => "write stats",
        })
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{stage}: {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

fn at<T>(stage: Stage, r: Result<T>) -> std::result::Result<T, StageError> {
    r.map_err(|source| StageError { stage, source })
}

impl RunManifest {
    pub fn validate(&self) -> Result<Vec<String>> {
        for (name, p) in [
            ("graph", &self.graph_path),
            ("clustering", &self.clustering_path),
            ("output", &self.output_path),
        ] {
            if p.as_os_str().is_empty() {
                return Err(Error::InvalidConfig(format!("{name} path is empty")));
            }
        }
        if matches!(&self.stats_path, Some(p) if p.as_os_str().is_empty()) {
            return Err(Error::InvalidConfig("stats path is empty".into()));
        }
        match (self.config.mode, &self.config.cda) {
            (Mode::Cm, None) => {
                return Err(Error::InvalidConfig(
                    "mode cm needs a community detection config".into(),
                ))
            }
            (Mode::Wcc, Some(_)) => {
                return Err(Error::InvalidConfig(
                    "community detection config is only used in mode cm".into(),
                ))
            }
            _ => {}
        }
        self.config.validate()
    }

    /// Reads inputs, refines, and writes the output and optional stats file.
    pub fn run(&self) -> std::result::Result<RunOutcome, StageError> {
        let warnings = at(Stage::Config, self.validate())?;
        let (graph, edge_list) = at(Stage::ReadGraph, io::read_edge_list(&self.graph_path))?;
        let clustering = at(
            Stage::ReadClustering,
            io::read_clustering(&self.clustering_path),
        )?;
        let refinement = at(Stage::Refine, engine::refine(&graph, &clustering, &self.config))?;
        at(
            Stage::WriteOutput,
            io::write_clustering(&refinement.clustering, &self.output_path),
        )?;
        let outcome = RunOutcome {
            refinement,
            edge_list,
            graph_vertices: graph.num_vertices(),
            graph_edges: graph.num_edges(),
            warnings,
        };
        if let Some(path) = &self.stats_path {
            let text = format_stats(self, &outcome);
            at(
                Stage::WriteStats,
                fs::write(path, text).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                }),
            )?;
        }
        Ok(outcome)
    }
}

/// Flat `key: value` report. `origin.<output id>` lines map output clusters
/// to their input cluster.
pub fn format_stats(manifest: &RunManifest, outcome: &RunOutcome) -> String {
    let cfg = &manifest.config;
    let s = &outcome.refinement.stats;
    let mut out = String::new();
    let mut kv = |k: &str, v: &dyn std::fmt::Display| writeln!(out, "{k}: {v}").unwrap();
    kv(
        "mode",
        &match cfg.mode {
            Mode::Wcc => "wcc",
            Mode::Cm => "cm",
        },
    );
    kv("criterion", &cfg.criterion);
    kv("s_pre", &cfg.s_pre);
    kv("s_post", &cfg.s_post);
    kv("threads", &cfg.parallelism);
    if let Some(cda) = &cfg.cda {
        kv("cda_resolution", &cda.resolution);
        kv("cda_seed", &cda.seed);
    }
    kv("graph_vertices", &outcome.graph_vertices);
    kv("graph_edges", &outcome.graph_edges);
    kv("edge_lines", &outcome.edge_list.lines);
    kv("self_loops_dropped", &outcome.edge_list.build.self_loops);
    kv("duplicates_dropped", &outcome.edge_list.build.duplicates);
    kv("input_clusters", &s.input_clusters);
    kv("ccr_components", &s.ccr_components);
    kv("output_clusters", &s.output_clusters);
    kv("vertices_in", &s.vertices_in);
    kv("vertices_out", &s.vertices_out);
    kv("vertices_discarded", &s.vertices_discarded);
    kv("min_cut_calls", &s.min_cut_calls);
    kv("cda_calls", &s.cda_calls);
    kv("max_depth", &s.max_depth);
    kv("elapsed_seconds", &format!("{:.6}", s.elapsed.as_secs_f64()));
    for (id, origin) in outcome.refinement.lineage.iter().enumerate() {
        kv(&format!("origin.{id}"), origin);
    }
    if manifest.list_discarded {
        let list: Vec<String> = outcome
            .refinement
            .discarded
            .iter()
            .map(ToString::to_string)
            .collect();
        kv("discarded_vertices", &list.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cda::CdaConfig;
    use crate::engine::Criterion;

    fn manifest(dir: &std::path::Path) -> RunManifest {
        RunManifest {
            graph_path: dir.join("g.tsv"),
            clustering_path: dir.join("c.tsv"),
            output_path: dir.join("out.tsv"),
            config: RefinementConfig::wcc(Criterion::Log2),
            stats_path: Some(dir.join("stats.txt")),
            list_discarded: true,
        }
    }

    #[test]
    fn file_to_file_run() {
        let dir = tempfile::tempdir().unwrap();
        let m = manifest(dir.path());
        // Two triangles joined by a bridge, plus a pendant vertex 6.
        fs::write(&m.graph_path, "0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n3 5\n5 6\n").unwrap();
        fs::write(&m.clustering_path, "0\t4\n1\t4\n2\t4\n3\t4\n4\t4\n5\t4\n6\t4\n").unwrap();
        let outcome = m.run().unwrap();
        assert_eq!(
            fs::read_to_string(&m.output_path).unwrap(),
            "0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n"
        );
        let stats = fs::read_to_string(m.stats_path.as_ref().unwrap()).unwrap();
        assert!(stats.contains("output_clusters: 2\n"));
        assert!(stats.contains("origin.1: 4\n"));
        assert!(stats.contains("discarded_vertices: 6\n"));
        assert!(stats.contains("vertices_discarded: 1\n"));
        assert_eq!(outcome.graph_edges, 8);
    }

    #[test]
    fn manifest_validation() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = manifest(dir.path());
        m.config.mode = Mode::Cm;
        assert!(m.validate().is_err());
        m.config.cda = Some(CdaConfig::default());
        assert!(m.validate().is_ok());
        m.config.mode = Mode::Wcc;
        assert!(m.validate().is_err());
        m.config.cda = None;
        m.output_path = PathBuf::new();
        assert!(m.validate().is_err());
    }

    #[test]
    fn errors_name_the_stage() {
        let dir = tempfile::tempdir().unwrap();
        let m = manifest(dir.path());
        let err = m.run().unwrap_err();
        assert_eq!(err.stage, Stage::ReadGraph);
        fs::write(&m.graph_path, "0 1\n").unwrap();
        fs::write(&m.clustering_path, "0\t0\n5\t0\n").unwrap();
        let err = m.run().unwrap_err();
        assert_eq!(err.stage, Stage::Refine);
        assert!(err.to_string().starts_with("refine: cluster 0"), "{err}");
    }
}
