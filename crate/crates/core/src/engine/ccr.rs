use rayon::prelude::*;

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Connected-component refinement.
///
/// Each input cluster is replaced by the connected components of its induced
/// subgraph that have more than `s_pre` vertices. Clusters without internal
/// edges produce nothing. Output follows ascending input cluster ID, then
/// component order.
pub fn refine_connected_components(
    g: &Graph,
    clustering: &Clustering,
    s_pre: usize,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for (id, members) in clustering.clusters() {
        out.extend(cluster_components(g, id, &members, s_pre)?);
    }
    Ok(out)
}

/// Same output as [`refine_connected_components`], computed with one task
/// per input cluster on the current rayon pool.
pub(crate) fn refine_connected_components_par(
    g: &Graph,
    clustering: &Clustering,
    s_pre: usize,
) -> Result<Vec<Vec<usize>>> {
    let clusters: Vec<(u64, Vec<usize>)> = clustering.clusters().into_iter().collect();
    let parts: Vec<Vec<Vec<usize>>> = clusters
        .par_iter()
        .map(|(id, members)| cluster_components(g, *id, members, s_pre))
        .collect::<Result<_>>()?;
    Ok(parts.into_iter().flatten().collect())
}

fn cluster_components(
    g: &Graph,
    id: u64,
    members: &[usize],
    s_pre: usize,
) -> Result<Vec<Vec<usize>>> {
    let sub = g.induced_subgraph(members).map_err(|e| match e {
        Error::VertexOutOfRange {
            vertex,
            num_vertices,
        } => Error::ClusterVertexOutOfRange {
            cluster: id,
            vertex,
            num_vertices,
        },
        other => other,
    })?;
    if sub.num_edges() == 0 {
        return Ok(Vec::new());
    }
    Ok(sub
        .graph()
        .connected_components()
        .into_iter()
        .filter(|cc| cc.len() > s_pre)
        .map(|cc| sub.to_parent(&cc))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_cluster(vertices: &[usize]) -> Clustering {
        vertices.iter().map(|&v| (v, 0)).collect()
    }

    #[test]
    fn splits_into_components() {
        let g = Graph::from_edges([(0, 1), (2, 3)]);
        let out = refine_connected_components(&g, &one_cluster(&[0, 1, 2, 3]), 1).unwrap();
        assert_eq!(out, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn size_threshold_is_strict() {
        let g = Graph::from_edges([(0, 1), (1, 2)]);
        let c = one_cluster(&[0, 1, 2]);
        assert_eq!(refine_connected_components(&g, &c, 2).unwrap(), vec![vec![0, 1, 2]]);
        assert!(refine_connected_components(&g, &c, 3).unwrap().is_empty());
    }

    #[test]
    fn edgeless_cluster_is_dropped() {
        let g = Graph::from_edges([(0, 1), (3, 4)]);
        let c = one_cluster(&[0, 2, 4]);
        for s_pre in [0, 1, 5] {
            assert!(refine_connected_components(&g, &c, s_pre).unwrap().is_empty());
        }
    }

    #[test]
    fn singletons_survive_only_with_zero_threshold() {
        let g = Graph::with_vertices(3, [(0, 1)]).unwrap();
        let c = one_cluster(&[0, 1, 2]);
        assert_eq!(
            refine_connected_components(&g, &c, 0).unwrap(),
            vec![vec![0, 1], vec![2]]
        );
    }

    #[test]
    fn out_of_range_names_cluster() {
        let g = Graph::from_edges([(0, 1)]);
        let c: Clustering = [(0, 4), (1, 4), (9, 4)].into_iter().collect();
        let err = refine_connected_components(&g, &c, 1).unwrap_err();
        assert!(
            matches!(err, Error::ClusterVertexOutOfRange { cluster: 4, vertex: 9, .. }),
            "{err}"
        );
    }

    #[test]
    fn parallel_matches_sequential() {
        let g = Graph::from_edges([(0, 1), (1, 2), (3, 4), (5, 6), (6, 7), (8, 9)]);
        let c: Clustering = (0..10).map(|v| (v, (v % 3) as u64)).collect();
        assert_eq!(
            refine_connected_components(&g, &c, 0).unwrap(),
            refine_connected_components_par(&g, &c, 0).unwrap()
        );
    }
}
