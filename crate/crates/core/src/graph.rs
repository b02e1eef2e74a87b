//! Immutable undirected graphs in double-index layout.
//!
//! A [`Graph`] is a CSR adjacency structure extended with an edge-to-source
//! array: for every slot `i` of the flat neighbor array, `edge_sources[i]` is
//! the vertex owning that slot, so the endpoints of any stored edge are
//! recovered in constant time. Every undirected edge is stored twice, once
//! per direction, and each adjacency range is sorted.

use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Counts of records discarded while canonicalizing an edge list.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct BuildReport {
    pub records: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_sources: Vec<usize>,
}

impl Graph {
    /// Builds a canonical simple graph from arbitrary vertex pairs.
    ///
    /// Self-loops and repeated pairs (in either orientation) are dropped. The
    /// vertex space is `0..=max_id`.
    pub fn from_edges<I>(edges: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::build(None, edges).0
    }

    /// Like [`Graph::from_edges`], but with an explicit vertex count so that
    /// trailing isolated vertices are kept.
    pub fn with_vertices<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let edges: Vec<_> = edges.into_iter().collect();
        if let Some(&(u, v)) = edges
            .iter()
            .find(|&&(u, v)| u >= num_vertices || v >= num_vertices)
        {
            return Err(Error::VertexOutOfRange {
                vertex: u.max(v),
                num_vertices,
            });
        }
        Ok(Self::build(Some(num_vertices), edges).0)
    }

    /// Builds a graph from signed records, rejecting negative IDs with the
    /// index of the offending record.
    pub fn try_from_records<I>(records: I) -> Result<(Self, BuildReport)>
    where
        I: IntoIterator<Item = (i64, i64)>,
    {
        let mut edges = Vec::new();
        for (index, (u, v)) in records.into_iter().enumerate() {
            if u < 0 || v < 0 {
                return Err(Error::MalformedEdge {
                    index,
                    reason: format!("negative vertex id in ({u}, {v})"),
                });
            }
            edges.push((u as usize, v as usize));
        }
        Ok(Self::build(None, edges))
    }

    fn build<I>(num_vertices: Option<usize>, edges: I) -> (Self, BuildReport)
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut report = BuildReport::default();
        let mut arcs = Vec::new();
        let mut max_id = None::<usize>;
        for (u, v) in edges {
            report.records += 1;
            max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
            if u == v {
                report.self_loops += 1;
                continue;
            }
            arcs.push((u.min(v), u.max(v)));
        }
        arcs.sort_unstable();
        let before = arcs.len();
        arcs.dedup();
        report.duplicates = before - arcs.len();

        let n = num_vertices.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
        let mut degree = vec![0usize; n];
        for &(u, v) in &arcs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; 2 * arcs.len()];
        // With arcs sorted by (min, max), vertex u first receives every
        // smaller neighbor (from arcs (w, u)) and then every larger one, so
        // each range is filled in ascending order.
        for &(u, v) in &arcs {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        let edge_sources = sources_from_offsets(&offsets);
        (
            Graph {
                offsets,
                neighbors,
                edge_sources,
            },
            report,
        )
    }

    /// Assembles a graph from already-canonical CSR parts.
    fn from_csr(offsets: Vec<usize>, neighbors: Vec<usize>) -> Self {
        let edge_sources = sources_from_offsets(&offsets);
        Graph {
            offsets,
            neighbors,
            edge_sources,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Number of undirected edges.
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn min_degree(&self) -> Option<usize> {
        (0..self.num_vertices()).map(|v| self.degree(v)).min()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.num_vertices() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Endpoints `(source, destination)` of the stored arc at `index`.
    pub fn arc(&self, index: usize) -> (usize, usize) {
        (self.edge_sources[index], self.neighbors[index])
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn neighbor_array(&self) -> &[usize] {
        &self.neighbors
    }

    pub fn edge_sources(&self) -> &[usize] {
        &self.edge_sources
    }

    /// Undirected edges as `(u, v)` with `u < v`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.neighbors.len())
            .map(|i| self.arc(i))
            .filter(|&(u, v)| u < v)
    }

    /// Extracts the subgraph induced by `vertex_ids`. Duplicates in the input
    /// are ignored; local IDs follow ascending global order.
    pub fn induced_subgraph(&self, vertex_ids: &[usize]) -> Result<Subgraph> {
        let n = self.num_vertices();
        if let Some(&bad) = vertex_ids.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange {
                vertex: bad,
                num_vertices: n,
            });
        }
        let mut ids = vertex_ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let local_graph = self.induce_sorted(&ids);
        Ok(Subgraph {
            parent_vertex_ids: ids,
            local_graph,
        })
    }

    /// Induced graph over a strictly increasing, in-range vertex list.
    fn induce_sorted(&self, ids: &[usize]) -> Graph {
        let mut offsets = Vec::with_capacity(ids.len() + 1);
        offsets.push(0);
        let mut neighbors = Vec::new();
        for &v in ids {
            // Global adjacency is sorted and the local relabeling is
            // monotone, so local ranges come out sorted.
            for &w in self.neighbors(v) {
                if let Ok(local) = ids.binary_search(&w) {
                    neighbors.push(local);
                }
            }
            offsets.push(neighbors.len());
        }
        Graph::from_csr(offsets, neighbors)
    }

    /// Maximal connected vertex sets, each sorted, ordered by smallest member.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.num_vertices();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        let mut components = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut members = Vec::new();
            while let Some(v) = queue.pop_front() {
                members.push(v);
                for &w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        let n = self.num_vertices();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == n
    }
}

fn sources_from_offsets(offsets: &[usize]) -> Vec<usize> {
    let mut sources = Vec::with_capacity(offsets.last().copied().unwrap_or(0));
    for (v, w) in offsets.windows(2).enumerate() {
        sources.extend(std::iter::repeat_n(v, w[1] - w[0]));
    }
    sources
}

/// A vertex subset of a parent graph together with its induced edges,
/// relabeled to dense local IDs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    parent_vertex_ids: Vec<usize>,
    local_graph: Graph,
}

impl Subgraph {
    /// Wraps a whole graph as a subgraph of itself.
    pub fn whole(graph: &Graph) -> Self {
        Subgraph {
            parent_vertex_ids: (0..graph.num_vertices()).collect(),
            local_graph: graph.clone(),
        }
    }

    /// Strictly increasing global IDs; local vertex `i` is
    /// `parent_vertex_ids()[i]`.
    pub fn parent_vertex_ids(&self) -> &[usize] {
        &self.parent_vertex_ids
    }

    pub fn graph(&self) -> &Graph {
        &self.local_graph
    }

    pub fn len(&self) -> usize {
        self.parent_vertex_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent_vertex_ids.is_empty()
    }

    pub fn num_edges(&self) -> usize {
        self.local_graph.num_edges()
    }

    /// Translates local IDs back to parent IDs.
    pub fn to_parent(&self, local: &[usize]) -> Vec<usize> {
        local.iter().map(|&i| self.parent_vertex_ids[i]).collect()
    }

    /// Restricts this subgraph to a set of its own local vertices. The result
    /// still refers to the original parent's IDs.
    pub fn restrict(&self, local_ids: &[usize]) -> Result<Subgraph> {
        let inner = self.local_graph.induced_subgraph(local_ids)?;
        Ok(Subgraph {
            parent_vertex_ids: self.to_parent(&inner.parent_vertex_ids),
            local_graph: inner.local_graph,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Graph {
        Graph::from_edges([(0, 1), (1, 2), (0, 2)])
    }

    #[test]
    fn duplicates_and_self_loops_are_dropped() {
        let (g, report) = Graph::try_from_records([(0, 1), (1, 0), (2, 2)]).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.num_vertices(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(g.degree(2), 0);
        assert_eq!(
            report,
            BuildReport {
                records: 3,
                self_loops: 1,
                duplicates: 1
            }
        );
    }

    #[test]
    fn empty_edge_list() {
        let g = Graph::from_edges(Vec::new());
        assert_eq!(g.num_vertices(), 0);
        assert_eq!(g.num_edges(), 0);
        assert!(g.connected_components().is_empty());
    }

    #[test]
    fn triangle_layout() {
        let g = triangle();
        assert_eq!(g.neighbor_array().len(), 6);
        assert!((0..3).all(|v| g.degree(v) == 2));
        assert_eq!(g.offsets(), &[0, 2, 4, 6]);
        assert_eq!(g.edge_sources(), &[0, 0, 1, 1, 2, 2]);
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn negative_record_is_named() {
        let err = Graph::try_from_records([(0, 1), (3, -1)]).unwrap_err();
        assert!(matches!(err, Error::MalformedEdge { index: 1, .. }), "{err}");
    }

    #[test]
    fn with_vertices_keeps_trailing_isolated() {
        let g = Graph::with_vertices(5, [(0, 1)]).unwrap();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.connected_components().len(), 4);
        assert!(Graph::with_vertices(2, [(0, 2)]).is_err());
    }

    #[test]
    fn induced_subgraph_cases() {
        let g = triangle();
        let s = g.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(s.num_edges(), 1);

        let whole = g.induced_subgraph(&[2, 0, 1]).unwrap();
        assert_eq!(whole.graph(), &g);
        assert_eq!(whole.parent_vertex_ids(), &[0, 1, 2]);

        let path = Graph::from_edges([(0, 1), (1, 2), (2, 3)]);
        let s = path.induced_subgraph(&[0, 2, 3]).unwrap();
        assert_eq!(s.graph().edges().collect::<Vec<_>>(), vec![(1, 2)]);
        assert_eq!(s.to_parent(&[1, 2]), vec![2, 3]);
        assert_eq!(s.graph().degree(0), 0);

        assert!(matches!(
            g.induced_subgraph(&[0, 7]),
            Err(Error::VertexOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn restrict_composes_parent_ids() {
        let path = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 4)]);
        let s = path.induced_subgraph(&[1, 2, 3, 4]).unwrap();
        let r = s.restrict(&[1, 2]).unwrap();
        assert_eq!(r.parent_vertex_ids(), &[2, 3]);
        assert_eq!(r.num_edges(), 1);
        assert_eq!(r, path.induced_subgraph(&[2, 3]).unwrap());
    }

    #[test]
    fn components_of_disjoint_edges() {
        let g = Graph::from_edges([(0, 1), (2, 3)]);
        assert_eq!(g.connected_components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(!g.is_connected());
        assert_eq!(triangle().connected_components(), vec![vec![0, 1, 2]]);
        assert!(triangle().is_connected());
    }
}
