//! Synthetic graph and clustering generators for tests, benchmarks and the
//! demo page.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::clustering::Clustering;
use crate::graph::Graph;

/// G(n, p) with exactly `n` vertices.
pub fn erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::with_vertices(n, edges).expect("ids below n")
}

/// G(n, p) patched into a connected graph by linking each extra component to
/// a random vertex of an earlier one.
pub fn connected_erdos_renyi<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> Graph {
    let g = erdos_renyi(n, p, rng);
    let components = g.connected_components();
    if components.len() <= 1 {
        return g;
    }
    let mut edges: Vec<_> = g.edges().collect();
    for i in 1..components.len() {
        let earlier = &components[rng.gen_range(0..i)];
        let a = *earlier.choose(rng).unwrap();
        let b = *components[i].choose(rng).unwrap();
        edges.push((a, b));
    }
    Graph::with_vertices(n, edges).expect("ids below n")
}

/// Planted-partition model. Block `b` covers a contiguous ID range; the
/// returned vector holds each vertex's block.
pub fn planted_partition<R: Rng + ?Sized>(
    block_sizes: &[usize],
    p_in: f64,
    p_out: f64,
    rng: &mut R,
) -> (Graph, Vec<usize>) {
    let blocks: Vec<usize> = block_sizes
        .iter()
        .enumerate()
        .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
        .collect();
    let n = blocks.len();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let p = if blocks[u] == blocks[v] { p_in } else { p_out };
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    (Graph::with_vertices(n, edges).expect("ids below n"), blocks)
}

/// `count` cliques of `size` vertices each, clique `i` on IDs
/// `i*size..(i+1)*size`, with one bridge from the last vertex of each clique
/// to the first vertex of the next.
pub fn clique_chain(count: usize, size: usize) -> Graph {
    let mut edges = Vec::new();
    for c in 0..count {
        let base = c * size;
        for u in 0..size {
            for v in u + 1..size {
                edges.push((base + u, base + v));
            }
        }
        if c + 1 < count {
            edges.push((base + size - 1, base + size));
        }
    }
    Graph::with_vertices(count * size, edges).expect("ids below n")
}

/// Assigns each vertex to one of `clusters` random clusters, leaving it
/// unclustered with probability `unclustered`.
pub fn random_clustering<R: Rng + ?Sized>(
    num_vertices: usize,
    clusters: usize,
    unclustered: f64,
    rng: &mut R,
) -> Clustering {
    let mut clustering = Clustering::new();
    for v in 0..num_vertices {
        if !rng.gen_bool(unclustered) {
            clustering.assign(v, rng.gen_range(0..clusters.max(1)) as u64);
        }
    }
    clustering
}

/// Many dense random clusters of equal size plus sparse noise between them.
/// Returns the graph and the planted clustering.
pub fn clustered_graph<R: Rng + ?Sized>(
    clusters: usize,
    size: usize,
    p_in: f64,
    inter_edges: usize,
    rng: &mut R,
) -> (Graph, Clustering) {
    let n = clusters * size;
    let mut edges = Vec::new();
    let mut clustering = Clustering::new();
    for c in 0..clusters {
        let base = c * size;
        for u in 0..size {
            clustering.assign(base + u, c as u64);
            for v in u + 1..size {
                if rng.gen_bool(p_in) {
                    edges.push((base + u, base + v));
                }
            }
        }
    }
    if n > 1 {
        for _ in 0..inter_edges {
            edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
        }
    }
    (Graph::with_vertices(n, edges).expect("ids below n"), clustering)
}
