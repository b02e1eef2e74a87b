//! Community detection used by the connectivity modifier.
//!
//! The engine only sees the [`CommunityDetector`] trait. Two detectors ship
//! with the crate: [`CpmDetector`], a Louvain-style local-move and
//! aggregation heuristic for the Constant Potts Model, and
//! [`ExternalLabels`], which replays a precomputed labeling.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::{Graph, Subgraph};
use crate::io;

/// Minimum CPM gain for a local move to count as an improvement.
const MOVE_EPSILON: f64 = 1e-10;

/// Disjoint, non-empty vertex sets covering a graph, kept in canonical order
/// (members sorted, sets ordered by smallest member).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommunityAssignment {
    communities: Vec<Vec<usize>>,
}

impl CommunityAssignment {
    /// Canonicalizes `communities` without validating it; see
    /// [`CommunityAssignment::validate`].
    pub fn new(mut communities: Vec<Vec<usize>>) -> Self {
        for c in &mut communities {
            c.sort_unstable();
        }
        communities.retain(|c| !c.is_empty());
        communities.sort();
        CommunityAssignment { communities }
    }

    /// One community per distinct label.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (v, &l) in labels.iter().enumerate() {
            groups.entry(l).or_default().push(v);
        }
        Self::new(groups.into_values().collect())
    }

    pub fn singletons(n: usize) -> Self {
        Self::new((0..n).map(|v| vec![v]).collect())
    }

    pub fn communities(&self) -> &[Vec<usize>] {
        &self.communities
    }

    pub fn len(&self) -> usize {
        self.communities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.communities.is_empty()
    }

    /// Checks that the sets partition `0..num_vertices`.
    pub fn validate(&self, num_vertices: usize) -> Result<()> {
        let mut seen = vec![false; num_vertices];
        for (i, c) in self.communities.iter().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidPartition(format!("community {i} is empty")));
            }
            for &v in c {
                if v >= num_vertices {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is out of range for {num_vertices} vertices"
                    )));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} is in more than one community"
                    )));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidPartition(format!("vertex {v} is not covered")));
        }
        Ok(())
    }

    /// Splits every community into the connected components of its induced
    /// subgraph in `g`.
    pub fn split_disconnected(self, g: &Graph) -> Self {
        let mut out = Vec::with_capacity(self.communities.len());
        for c in self.communities {
            if c.len() == 1 {
                out.push(c);
                continue;
            }
            let sub = g.induced_subgraph(&c).expect("community vertices lie in the graph");
            for part in sub.graph().connected_components() {
                out.push(sub.to_parent(&part));
            }
        }
        Self::new(out)
    }
}

/// Community detection over a cluster subgraph. Returned sets use the
/// subgraph's local IDs and must partition its vertices.
pub trait CommunityDetector: Send + Sync {
    fn communities(&self, sub: &Subgraph) -> CommunityAssignment;
}

/// Runs `detector` on `sub` and splits any disconnected community.
pub fn detect_connected(detector: &dyn CommunityDetector, sub: &Subgraph) -> CommunityAssignment {
    detector.communities(sub).split_disconnected(sub.graph())
}

/// Returns the whole vertex set as one community.
#[derive(Debug, Clone, Copy, Default)]
pub struct SingleCommunity;

impl CommunityDetector for SingleCommunity {
    fn communities(&self, sub: &Subgraph) -> CommunityAssignment {
        CommunityAssignment::new(vec![(0..sub.len()).collect()])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CdaKind {
    CpmHeuristic,
    /// Labels keyed by vertex ID, read from a `vertex<TAB>community` file.
    ExternalLabels(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CdaConfig {
    pub kind: CdaKind,
    pub resolution: f64,
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for CdaConfig {
    fn default() -> Self {
        CdaConfig {
            kind: CdaKind::CpmHeuristic,
            resolution: 0.01,
            max_passes: 10,
            seed: 0,
        }
    }
}

impl CdaConfig {
    pub fn cpm(resolution: f64) -> Self {
        CdaConfig {
            resolution,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.resolution > 0.0 && self.resolution.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "CPM resolution must be positive, got {}",
                self.resolution
            )));
        }
        if self.max_passes == 0 {
            return Err(Error::InvalidConfig("max_passes must be at least 1".into()));
        }
        Ok(())
    }

    /// Instantiates the configured detector. External labels are read here.
    pub fn detector(&self) -> Result<Box<dyn CommunityDetector>> {
        self.validate()?;
        Ok(match &self.kind {
            CdaKind::CpmHeuristic => Box::new(CpmDetector::from_config(self)),
            CdaKind::ExternalLabels(path) => Box::new(ExternalLabels::from_file(path)?),
        })
    }
}

/// Partition of `g` under the configured detector, with disconnected
/// communities split.
pub fn get_communities(g: &Graph, cfg: &CdaConfig) -> Result<CommunityAssignment> {
    let detector = cfg.detector()?;
    Ok(detect_connected(detector.as_ref(), &Subgraph::whole(g)))
}

/// Constant Potts Model quality: for each community, internal edges minus
/// `resolution * n(n-1)/2`.
pub fn score_cpm(g: &Graph, assignment: &CommunityAssignment, resolution: f64) -> Result<f64> {
    assignment.validate(g.num_vertices())?;
    let mut label = vec![0usize; g.num_vertices()];
    for (i, c) in assignment.communities().iter().enumerate() {
        for &v in c {
            label[v] = i;
        }
    }
    let mut internal = vec![0u64; assignment.len()];
    for (u, v) in g.edges() {
        if label[u] == label[v] {
            internal[label[u]] += 1;
        }
    }
    Ok(assignment
        .communities()
        .iter()
        .zip(internal)
        .map(|(c, e)| {
            let n = c.len() as f64;
            e as f64 - resolution * n * (n - 1.0) / 2.0
        })
        .sum())
}

/// Louvain-style CPM maximizer.
///
/// Each pass runs local moves from singletons until no move improves the
/// objective, then contracts communities into weighted nodes. Stops when a
/// pass moves nothing or after `max_passes`.
#[derive(Debug, Clone)]
pub struct CpmDetector {
    pub resolution: f64,
    pub max_passes: usize,
    pub seed: u64,
}

impl CpmDetector {
    pub fn from_config(cfg: &CdaConfig) -> Self {
        CpmDetector {
            resolution: cfg.resolution,
            max_passes: cfg.max_passes,
            seed: cfg.seed,
        }
    }

    /// Community label per vertex, before connectivity repair.
    pub fn labels(&self, g: &Graph) -> Vec<usize> {
        let n = g.num_vertices();
        let mut membership: Vec<usize> = (0..n).collect();
        let mut level = Level::from_graph(g);
        for pass in 0..self.max_passes {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed.wrapping_add(pass as u64));
            let Some(communities) = level.local_moves(self.resolution, &mut rng) else {
                break;
            };
            let (dense, count) = renumber(&communities);
            for m in &mut membership {
                *m = dense[*m];
            }
            if count == level.len() {
                break;
            }
            level = level.aggregate(&dense, count);
        }
        membership
    }
}

impl CommunityDetector for CpmDetector {
    fn communities(&self, sub: &Subgraph) -> CommunityAssignment {
        CommunityAssignment::from_labels(&self.labels(sub.graph()))
    }
}

/// One level of the aggregation hierarchy: weighted nodes with sizes.
/// Internal edge weight of a node is omitted since it never affects a move.
struct Level {
    adj: Vec<Vec<(usize, u64)>>,
    size: Vec<u64>,
}

impl Level {
    fn from_graph(g: &Graph) -> Self {
        Level {
            adj: (0..g.num_vertices())
                .map(|v| g.neighbors(v).iter().map(|&u| (u, 1)).collect())
                .collect(),
            size: vec![1; g.num_vertices()],
        }
    }

    fn len(&self) -> usize {
        self.size.len()
    }

    /// Repeated sweeps of single-node moves. Returns `None` if nothing moved.
    ///
    /// Moving node `v` of size `s` into community `C` (with `v` removed from
    /// its own) is worth `w(v, C) - resolution * s * |C|`; a move happens only
    /// when it beats staying by more than [`MOVE_EPSILON`]. Equal gains go to
    /// the lower community ID.
    fn local_moves(&self, resolution: f64, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
        let n = self.len();
        let mut community: Vec<usize> = (0..n).collect();
        let mut community_size = self.size.clone();
        let mut empty: BTreeSet<usize> = BTreeSet::new();
        let mut weight_to = vec![0u64; n];
        let mut touched = Vec::new();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut any_moved = false;
        loop {
            let mut moved = false;
            for &v in &order {
                let own = community[v];
                let s = self.size[v];
                for &(u, w) in &self.adj[v] {
                    let c = community[u];
                    if weight_to[c] == 0 {
                        touched.push(c);
                    }
                    weight_to[c] += w;
                }
                community_size[own] -= s;
                let gain = |c: usize, weight: u64| {
                    weight as f64 - resolution * s as f64 * community_size[c] as f64
                };
                let stay = gain(own, weight_to[own]);

                let mut best: Option<(f64, usize)> = None;
                let mut consider = |g: f64, c: usize| {
                    if g <= stay + MOVE_EPSILON {
                        return;
                    }
                    match best {
                        Some((bg, bc)) if g < bg || (g == bg && c > bc) => {}
                        _ => best = Some((g, c)),
                    }
                };
                for &c in &touched {
                    if c != own {
                        consider(gain(c, weight_to[c]), c);
                    }
                }
                if community_size[own] > 0 {
                    if let Some(&e) = empty.first() {
                        consider(0.0, e);
                    }
                }

                match best {
                    Some((_, target)) => {
                        community[v] = target;
                        community_size[target] += s;
                        empty.remove(&target);
                        if community_size[own] == 0 {
                            empty.insert(own);
                        }
                        moved = true;
                    }
                    None => community_size[own] += s,
                }
                for &c in &touched {
                    weight_to[c] = 0;
                }
                touched.clear();
            }
            if !moved {
                break;
            }
            any_moved = true;
        }
        any_moved.then_some(community)
    }

    fn aggregate(&self, dense: &[usize], count: usize) -> Level {
        let mut size = vec![0u64; count];
        let mut merged: Vec<BTreeMap<usize, u64>> = vec![BTreeMap::new(); count];
        for v in 0..self.len() {
            let cv = dense[v];
            size[cv] += self.size[v];
            for &(u, w) in &self.adj[v] {
                let cu = dense[u];
                if cu != cv {
                    *merged[cv].entry(cu).or_insert(0) += w;
                }
            }
        }
        Level {
            adj: merged.into_iter().map(|m| m.into_iter().collect()).collect(),
            size,
        }
    }
}

/// Maps community labels to `0..count` in order of first appearance.
fn renumber(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = vec![usize::MAX; labels.len()];
    let mut next = 0;
    let dense = labels
        .iter()
        .map(|&l| {
            if map[l] == usize::MAX {
                map[l] = next;
                next += 1;
            }
            map[l]
        })
        .collect();
    (dense, next)
}

/// Precomputed labels keyed by vertex ID of the subgraph's parent graph.
/// Vertices without a label become singleton communities.
#[derive(Debug, Clone)]
pub struct ExternalLabels {
    labels: Clustering,
}

impl ExternalLabels {
    pub fn new(labels: Clustering) -> Self {
        ExternalLabels { labels }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Ok(Self::new(io::read_clustering(path)?))
    }
}

impl CommunityDetector for ExternalLabels {
    fn communities(&self, sub: &Subgraph) -> CommunityAssignment {
        let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        let mut out = Vec::new();
        for (local, &v) in sub.parent_vertex_ids().iter().enumerate() {
            match self.labels.cluster_of(v) {
                Some(label) => groups.entry(label).or_default().push(local),
                None => out.push(vec![local]),
            }
        }
        out.extend(groups.into_values());
        CommunityAssignment::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use rand::Rng;

    fn triangle() -> Graph {
        Graph::from_edges([(0, 1), (1, 2), (0, 2)])
    }

    /// Every set partition of `0..n`, as restricted-growth label strings.
    fn all_partitions(n: usize) -> Vec<Vec<usize>> {
        fn grow(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
            if prefix.len() == n {
                out.push(prefix.clone());
                return;
            }
            for l in 0..=max + 1 {
                prefix.push(l);
                grow(prefix, max.max(l), n, out);
                prefix.pop();
            }
        }
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        grow(&mut vec![0], 0, n, &mut out);
        out
    }

    fn brute_force_cpm(g: &Graph, resolution: f64) -> f64 {
        all_partitions(g.num_vertices())
            .iter()
            .map(|labels| {
                score_cpm(g, &CommunityAssignment::from_labels(labels), resolution).unwrap()
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn partition_enumeration_counts_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877, 4140];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(all_partitions(n).len(), b);
        }
    }

    #[test]
    fn score_fixtures() {
        let t = triangle();
        let one = CommunityAssignment::new(vec![vec![0, 1, 2]]);
        assert!((score_cpm(&t, &one, 0.0).unwrap() - 3.0).abs() < 1e-12);
        let split = CommunityAssignment::new(vec![vec![0, 1], vec![2]]);
        assert!((score_cpm(&t, &split, 0.5).unwrap() - 0.5).abs() < 1e-12);
        let singles = CommunityAssignment::singletons(3);
        assert_eq!(score_cpm(&t, &singles, 0.7).unwrap(), 0.0);
    }

    #[test]
    fn score_rejects_bad_partitions() {
        let t = triangle();
        let overlap = CommunityAssignment::new(vec![vec![0, 1], vec![1, 2]]);
        assert!(matches!(score_cpm(&t, &overlap, 0.1), Err(Error::InvalidPartition(_))));
        let missing = CommunityAssignment::new(vec![vec![0, 1]]);
        assert!(score_cpm(&t, &missing, 0.1).is_err());
        let outside = CommunityAssignment::new(vec![vec![0, 1, 2, 3]]);
        assert!(score_cpm(&t, &outside, 0.1).is_err());
    }

    #[test]
    fn two_bridged_five_cliques() {
        let g = synth::clique_chain(2, 5);
        let cliques = CommunityAssignment::new(vec![(0..5).collect(), (5..10).collect()]);
        let merged = CommunityAssignment::new(vec![(0..10).collect()]);
        // 2 * (10 - 0.5 * 10) = 10 against 21 - 0.5 * 45 = -1.5
        assert_eq!(score_cpm(&g, &cliques, 0.5).unwrap(), 10.0);
        assert_eq!(score_cpm(&g, &merged, 0.5).unwrap(), -1.5);
        // At 0.01 the merged partition is better, which is why the fixture
        // uses 0.5.
        assert!(score_cpm(&g, &merged, 0.01).unwrap() > score_cpm(&g, &cliques, 0.01).unwrap());

        let found = get_communities(&g, &CdaConfig::cpm(0.5)).unwrap();
        assert_eq!(found, cliques);
    }

    #[test]
    fn edgeless_graph_stays_singletons() {
        let g = Graph::with_vertices(3, []).unwrap();
        for gamma in [0.001, 0.5, 3.0] {
            assert_eq!(
                get_communities(&g, &CdaConfig::cpm(gamma)).unwrap(),
                CommunityAssignment::singletons(3)
            );
        }
    }

    #[test]
    fn triangle_is_one_community() {
        let t = triangle();
        // Exhaustive check of the five partitions of three elements.
        assert_eq!(brute_force_cpm(&t, 0.5), 1.5);
        let found = get_communities(&t, &CdaConfig::cpm(0.5)).unwrap();
        assert_eq!(found.communities(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn single_vertex() {
        let g = Graph::with_vertices(1, []).unwrap();
        let found = get_communities(&g, &CdaConfig::default()).unwrap();
        assert_eq!(found.communities(), &[vec![0]]);
    }

    #[test]
    fn config_validation() {
        assert!(CdaConfig::cpm(0.0).validate().is_err());
        assert!(CdaConfig::cpm(-1.0).validate().is_err());
        let cfg = CdaConfig {
            max_passes: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert!(CdaConfig::default().validate().is_ok());
    }

    #[test]
    fn external_labels_use_parent_ids_and_split() {
        let g = Graph::from_edges([(0, 1), (1, 2), (3, 4), (4, 5)]);
        let labels: Clustering = [(1, 0), (2, 0), (4, 1), (5, 0)].into_iter().collect();
        let sub = g.induced_subgraph(&[1, 2, 4, 5]).unwrap();
        let raw = ExternalLabels::new(labels.clone()).communities(&sub);
        // local: 0->1, 1->2, 2->4, 3->5; label 0 = {1,2,5}, label 1 = {4}
        assert_eq!(raw.communities(), &[vec![0, 1, 3], vec![2]]);
        let repaired = detect_connected(&ExternalLabels::new(labels), &sub);
        assert_eq!(repaired.communities(), &[vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn near_optimal_when_optimum_is_one_community() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for _ in 0..200 {
            let n = rng.gen_range(2..=8);
            let p = rng.gen_range(0.2..0.95);
            let gamma = [0.05, 0.2, 0.5, 0.8][rng.gen_range(0..4)];
            let g = synth::connected_erdos_renyi(n, p, &mut rng);
            let found = get_communities(&g, &CdaConfig::cpm(gamma)).unwrap();
            found.validate(n).unwrap();
            let score = score_cpm(&g, &found, gamma).unwrap();
            assert!(score >= 0.0);

            let optimum = brute_force_cpm(&g, gamma);
            let whole = CommunityAssignment::new(vec![(0..n).collect()]);
            if optimum > 0.0 && score_cpm(&g, &whole, gamma).unwrap() == optimum {
                checked += 1;
                assert!(
                    score >= 0.9 * optimum,
                    "n={n} gamma={gamma} edges={:?}: {score} vs optimum {optimum}",
                    g.edges().collect::<Vec<_>>()
                );
            }
        }
        assert!(checked >= 20, "only {checked} single-community optima sampled");
    }

    #[test]
    fn local_moves_never_lower_the_score() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            let (g, _) = synth::planted_partition(&[6, 7, 5], 0.7, 0.1, &mut rng);
            let gamma = rng.gen_range(0.05..0.6);
            let mut last = 0.0;
            for passes in 1..=4 {
                let detector = CpmDetector {
                    resolution: gamma,
                    max_passes: passes,
                    seed: 3,
                };
                let labels = CommunityAssignment::from_labels(&detector.labels(&g));
                let score = score_cpm(&g, &labels, gamma).unwrap();
                assert!(score >= last - 1e-9, "pass {passes}: {score} < {last}");
                last = score;
            }
        }
    }

    #[test]
    fn deterministic_and_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (g, _) = synth::planted_partition(&[8, 8, 8], 0.6, 0.05, &mut rng);
            let cfg = CdaConfig::cpm(0.1);
            let a = get_communities(&g, &cfg).unwrap();
            assert_eq!(a, get_communities(&g, &cfg).unwrap());
            a.validate(g.num_vertices()).unwrap();
            for c in a.communities() {
                assert!(g.induced_subgraph(c).unwrap().graph().is_connected());
            }
        }
    }
}
