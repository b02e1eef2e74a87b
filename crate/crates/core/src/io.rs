//! Plain-text graph and clustering files.
//!
//! Edge lists hold whitespace-separated vertex pairs, one per line; lines
//! starting with `#` or `%` are comments and columns past the second are
//! ignored. Clusterings are `vertex<TAB>cluster` lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{BuildReport, Graph};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeListReport {
    pub lines: usize,
    pub build: BuildReport,
}

pub fn read_edge_list(path: &Path) -> Result<(Graph, EdgeListReport)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_edge_list(&text, path)
}

/// Parses edge-list text; `path` only labels errors.
pub fn parse_edge_list(text: &str, path: &Path) -> Result<(Graph, EdgeListReport)> {
    let mut records = Vec::new();
    let mut lines = 0;
    for (i, line) in text.lines().enumerate() {
        lines += 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('%') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let (Some(u), Some(v)) = (tokens.next(), tokens.next()) else {
            return Err(parse_error(path, i, format!("expected two vertex ids, got {line:?}")));
        };
        records.push((parse_int(u, path, i)?, parse_int(v, path, i)?));
    }
    let (graph, build) = Graph::try_from_records(records)?;
    Ok((graph, EdgeListReport { lines, build }))
}

pub fn read_clustering(path: &Path) -> Result<Clustering> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_clustering(&text, path)
}

/// Parses `vertex<TAB>cluster` lines. A vertex listed twice is an error.
pub fn parse_clustering(text: &str, path: &Path) -> Result<Clustering> {
    let mut clustering = Clustering::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [v, c] = tokens[..] else {
            return Err(parse_error(
                path,
                i,
                format!("expected vertex and cluster id, got {line:?}"),
            ));
        };
        let v = parse_int(v, path, i)?;
        let c: u64 = c
            .parse()
            .map_err(|_| parse_error(path, i, format!("cluster id {c:?} is not a non-negative integer")))?;
        if v < 0 {
            return Err(parse_error(path, i, format!("negative vertex id {v}")));
        }
        if let Some(prev) = clustering.assign(v as usize, c) {
            return Err(parse_error(
                path,
                i,
                format!("vertex {v} already assigned to cluster {prev}"),
            ));
        }
    }
    Ok(clustering)
}

/// `vertex<TAB>cluster` rows in ascending vertex order.
pub fn format_clustering(clustering: &Clustering) -> String {
    let mut out = String::new();
    for (v, c) in clustering.iter() {
        writeln!(out, "{v}\t{c}").unwrap();
    }
    out
}

pub fn write_clustering(clustering: &Clustering, path: &Path) -> Result<()> {
    fs::write(path, format_clustering(clustering)).map_err(|e| Error::io(path, e))
}

fn parse_int(token: &str, path: &Path, line: usize) -> Result<i64> {
    token
        .parse()
        .map_err(|_| parse_error(path, line, format!("{token:?} is not an integer")))
}

fn parse_error(path: &Path, line: usize, reason: String) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line: line + 1,
        reason,
    }
}
