//! Exact global minimum edge cuts.
//!
//! [`global_min_cut`] is a sequential Stoer–Wagner implementation used by the
//! refinement engine. [`brute_force_min_cut`] enumerates every bipartition
//! and only exists as an oracle for small graphs.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest graph the enumeration oracle accepts.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 20;

/// A minimum cut and a bipartition realizing it.
///
/// Both sides are sorted; `side_one` always holds vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCutResult {
    pub cut_weight: u64,
    pub side_one: Vec<usize>,
    pub side_two: Vec<usize>,
}

impl MinCutResult {
    fn from_membership(n: usize, cut_weight: u64, in_side_two: &[bool]) -> Self {
        let flip = in_side_two[0];
        let (mut side_one, mut side_two) = (Vec::new(), Vec::new());
        for v in 0..n {
            if in_side_two[v] != flip {
                side_two.push(v);
            } else {
                side_one.push(v);
            }
        }
        MinCutResult {
            cut_weight,
            side_one,
            side_two,
        }
    }
}

/// Counts edges of `g` whose endpoints fall on different sides.
pub fn crossing_edges(g: &Graph, side_one: &[usize]) -> u64 {
    let mut in_one = vec![false; g.num_vertices()];
    for &v in side_one {
        in_one[v] = true;
    }
    g.edges().filter(|&(u, v)| in_one[u] != in_one[v]).count() as u64
}

/// Exact global minimum cut of a connected graph.
///
/// Deterministic for a fixed input: the maximum-adjacency order breaks ties
/// toward the lower vertex ID.
pub fn global_min_cut(g: &Graph) -> Result<MinCutResult> {
    let n = g.num_vertices();
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    if !g.is_connected() {
        return Err(Error::ContractViolation(format!(
            "global min cut requested on a disconnected graph ({n} vertices, {} edges)",
            g.num_edges()
        )));
    }
    if n == 2 {
        return Ok(MinCutResult {
            cut_weight: 1,
            side_one: vec![0],
            side_two: vec![1],
        });
    }

    let mut adj: Vec<BTreeMap<usize, u64>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&w| (w, 1)).collect())
        .collect();
    let mut members: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut alive: Vec<usize> = (0..n).collect();

    let mut best_weight = u64::MAX;
    let mut best_side: Vec<usize> = Vec::new();

    let mut key = vec![0u64; n];
    let mut in_order = vec![false; n];
    let mut heap = BinaryHeap::new();

    while alive.len() > 1 {
        for &v in &alive {
            key[v] = 0;
            in_order[v] = false;
        }
        heap.clear();
        heap.push((0u64, Reverse(alive[0])));
        let mut prev = usize::MAX;
        let mut last = usize::MAX;
        let mut added = 0;
        while added < alive.len() {
            let v = match heap.pop() {
                Some((w, Reverse(v))) if !in_order[v] && w == key[v] => v,
                Some(_) => continue,
                // The contracted graph stays connected, so the heap only
                // runs dry once every live vertex has been ordered.
                None => unreachable!("max-adjacency order ran out of reachable vertices"),
            };
            in_order[v] = true;
            added += 1;
            prev = last;
            last = v;
            for (&u, &w) in &adj[v] {
                if !in_order[u] {
                    key[u] += w;
                    heap.push((key[u], Reverse(u)));
                }
            }
        }

        let (s, t) = (prev, last);
        let cut_of_phase = key[t];
        if cut_of_phase < best_weight {
            best_weight = cut_of_phase;
            best_side = members[t].clone();
        }

        let t_adj = std::mem::take(&mut adj[t]);
        for (u, w) in t_adj {
            adj[u].remove(&t);
            if u != s {
                *adj[u].entry(s).or_insert(0) += w;
                *adj[s].entry(u).or_insert(0) += w;
            }
        }
        let moved = std::mem::take(&mut members[t]);
        members[s].extend(moved);
        alive.retain(|&v| v != t);
    }

    let mut in_side_two = vec![false; n];
    for v in best_side {
        in_side_two[v] = true;
    }
    Ok(MinCutResult::from_membership(n, best_weight, &in_side_two))
}

/// Minimum cut by exhaustive enumeration of all `2^(n-1) - 1` bipartitions.
///
/// Ties go to the smallest bitmask of `side_two` over vertices `1..n`, which
/// makes the returned partition unique. Disconnected inputs are accepted and
/// report weight 0.
pub fn brute_force_min_cut(g: &Graph) -> Result<MinCutResult> {
    let n = g.num_vertices();
    if n < 2 {
        return Err(Error::TooFewVertices(n));
    }
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooManyVertices {
            got: n,
            max: BRUTE_FORCE_MAX_VERTICES,
        });
    }
    // Vertex v > 0 maps to bit v-1; vertex 0 always stays in side one.
    let edge_masks: Vec<(u32, u32)> = g
        .edges()
        .map(|(u, v)| (bit(u), bit(v)))
        .collect();
    let mut best = (u64::MAX, 0u32);
    for mask in 1u32..(1u32 << (n - 1)) {
        let weight = edge_masks
            .iter()
            .filter(|&&(a, b)| ((mask & a) != 0) != ((mask & b) != 0))
            .count() as u64;
        if weight < best.0 {
            best = (weight, mask);
        }
    }
    let in_side_two: Vec<bool> = (0..n).map(|v| best.1 & bit(v) != 0).collect();
    Ok(MinCutResult::from_membership(n, best.0, &in_side_two))
}

fn bit(v: usize) -> u32 {
    if v == 0 {
        0
    } else {
        1 << (v - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(edges)
    }

    fn check_realizes(g: &Graph, cut: &MinCutResult) {
        let n = g.num_vertices();
        assert!(!cut.side_one.is_empty() && !cut.side_two.is_empty());
        let mut all: Vec<usize> = cut.side_one.iter().chain(&cut.side_two).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>());
        assert_eq!(crossing_edges(g, &cut.side_one), cut.cut_weight);
    }

    #[test]
    fn single_edge() {
        let g = Graph::from_edges([(0, 1)]);
        for cut in [global_min_cut(&g).unwrap(), brute_force_min_cut(&g).unwrap()] {
            assert_eq!(cut.cut_weight, 1);
            assert_eq!(cut.side_one, vec![0]);
            assert_eq!(cut.side_two, vec![1]);
        }
    }

    #[test]
    fn bridged_four_cliques() {
        let g = synth::clique_chain(2, 4);
        let oracle = brute_force_min_cut(&g).unwrap();
        assert_eq!(oracle.cut_weight, 1);
        let cut = global_min_cut(&g).unwrap();
        assert_eq!(cut.cut_weight, 1);
        assert_eq!(cut.side_one, vec![0, 1, 2, 3]);
        assert_eq!(cut.side_two, vec![4, 5, 6, 7]);
        assert_eq!(cut, oracle);
    }

    #[test]
    fn cycle_clique_and_petersen() {
        let c5 = Graph::from_edges((0..5).map(|i| (i, (i + 1) % 5)));
        assert_eq!(brute_force_min_cut(&c5).unwrap().cut_weight, 2);
        assert_eq!(global_min_cut(&c5).unwrap().cut_weight, 2);

        let k4 = synth::clique_chain(1, 4);
        assert_eq!(brute_force_min_cut(&k4).unwrap().cut_weight, 3);
        assert_eq!(global_min_cut(&k4).unwrap().cut_weight, 3);

        let p = petersen();
        assert_eq!(p.num_edges(), 15);
        assert_eq!(brute_force_min_cut(&p).unwrap().cut_weight, 3);
        let cut = global_min_cut(&p).unwrap();
        assert_eq!(cut.cut_weight, 3);
        check_realizes(&p, &cut);
    }

    #[test]
    fn errors() {
        let one = Graph::with_vertices(1, []).unwrap();
        assert!(matches!(global_min_cut(&one), Err(Error::TooFewVertices(1))));
        let split = Graph::from_edges([(0, 1), (2, 3)]);
        assert!(matches!(
            global_min_cut(&split),
            Err(Error::ContractViolation(_))
        ));
        let big = Graph::from_edges((0..21).map(|i| (i, i + 1)));
        assert!(matches!(
            brute_force_min_cut(&big),
            Err(Error::TooManyVertices { got: 22, .. })
        ));
    }

    #[test]
    fn oracle_tie_break_is_smallest_mask() {
        // Every vertex of a 4-cycle is a min cut of weight 2; the smallest
        // side-two mask is {1}.
        let c4 = Graph::from_edges([(0, 1), (1, 2), (2, 3), (3, 0)]);
        let cut = brute_force_min_cut(&c4).unwrap();
        assert_eq!(cut.cut_weight, 2);
        assert_eq!(cut.side_two, vec![1]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn matches_oracle_on_random_connected_graphs(seed in any::<u64>(), n in 2usize..11, p in 0.15f64..0.9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = synth::connected_erdos_renyi(n, p, &mut rng);
            let cut = global_min_cut(&g).unwrap();
            let oracle = brute_force_min_cut(&g).unwrap();
            prop_assert_eq!(cut.cut_weight, oracle.cut_weight);
            check_realizes(&g, &cut);
            prop_assert!(cut.cut_weight <= g.min_degree().unwrap() as u64);

            // Removing the crossing edges leaves exactly the two sides.
            let mut in_one = vec![false; n];
            for &v in &cut.side_one { in_one[v] = true; }
            let kept = Graph::with_vertices(n, g.edges().filter(|&(u, v)| in_one[u] == in_one[v])).unwrap();
            let mut parts = kept.connected_components();
            parts.sort();
            let mut expected = vec![cut.side_one.clone(), cut.side_two.clone()];
            expected.sort();
            prop_assert_eq!(parts, expected);

            prop_assert_eq!(global_min_cut(&g).unwrap(), cut);
        }
    }
}
