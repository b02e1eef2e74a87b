use std::collections::BTreeMap;

/// Vertex-to-cluster assignment. Vertices without an entry are unclustered.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Clustering {
    assignments: BTreeMap<usize, u64>,
}

impl Clustering {
    pub fn new() -> Self {
        Self::default()
    }

    /// Numbers `sets` canonically: clusters are ordered by their smallest
    /// member and receive IDs `0..k`. Empty sets are skipped.
    ///
    /// Panics if a vertex appears in two sets.
    pub fn from_sets<S: AsRef<[usize]>>(sets: &[S]) -> Self {
        let mut order: Vec<&[usize]> = sets
            .iter()
            .map(AsRef::as_ref)
            .filter(|s| !s.is_empty())
            .collect();
        order.sort_by_key(|s| s.iter().min().copied());
        let mut clustering = Clustering::new();
        for (id, set) in order.into_iter().enumerate() {
            for &v in set {
                let previous = clustering.assign(v, id as u64);
                assert!(previous.is_none(), "vertex {v} appears in two clusters");
            }
        }
        clustering
    }

    /// Sets `v`'s cluster, returning the previous one.
    pub fn assign(&mut self, v: usize, cluster: u64) -> Option<u64> {
        self.assignments.insert(v, cluster)
    }

    pub fn cluster_of(&self, v: usize) -> Option<u64> {
        self.assignments.get(&v).copied()
    }

    /// Number of clustered vertices.
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    /// `(vertex, cluster)` pairs in ascending vertex order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.assignments.iter().map(|(&v, &c)| (v, c))
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignments.keys().copied()
    }

    /// Member lists keyed by cluster ID, ascending; members are sorted.
    pub fn clusters(&self) -> BTreeMap<u64, Vec<usize>> {
        let mut clusters: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (&v, &c) in &self.assignments {
            clusters.entry(c).or_default().push(v);
        }
        clusters
    }

    pub fn num_clusters(&self) -> usize {
        self.clusters().len()
    }

    /// Same partition, renumbered by smallest member.
    pub fn canonical(&self) -> Clustering {
        let sets: Vec<Vec<usize>> = self.clusters().into_values().collect();
        Clustering::from_sets(&sets)
    }
}

impl FromIterator<(usize, u64)> for Clustering {
    fn from_iter<I: IntoIterator<Item = (usize, u64)>>(iter: I) -> Self {
        Clustering {
            assignments: iter.into_iter().collect(),
        }
    }
}
