//! Browser bindings. Every operation takes and returns JSON so the page can
//! stay plain JavaScript; the `*_json` functions are the native-testable core.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::*;
use wellcut::{synth, CdaConfig, Clustering, Criterion, Graph, RefinementConfig};

/// Graph plus an optional cluster label per vertex, as exchanged with the page.
#[derive(Debug, Serialize, Deserialize)]
pub struct Scene {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub labels: Vec<Option<u64>>,
}

impl Scene {
    fn graph(&self) -> Result<Graph, String> {
        Graph::with_vertices(self.n, self.edges.iter().copied()).map_err(|e| e.to_string())
    }

    fn clustering(&self) -> Clustering {
        let mut c = Clustering::new();
        for (v, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                c.assign(v, *l);
            }
        }
        c
    }

    fn from_graph(g: &Graph, labels: Vec<Option<u64>>) -> Self {
        Scene {
            n: g.num_vertices(),
            edges: g.edges().collect(),
            labels,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    CliqueChain { count: usize, size: usize },
    Planted { blocks: usize, size: usize, p_in: f64, p_out: f64 },
    Random { n: usize, p: f64 },
}

#[derive(Debug, Deserialize)]
pub struct RefineRequest {
    pub scene: Scene,
    /// `wcc` or `cm`.
    pub mode: String,
    pub criterion: String,
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    #[serde(default = "one")]
    pub s_pre: usize,
    #[serde(default = "one")]
    pub s_post: usize,
}

fn default_resolution() -> f64 {
    0.01
}

fn one() -> usize {
    1
}

#[derive(Debug, Serialize)]
pub struct RefineResponse {
    pub labels: Vec<Option<u64>>,
    pub lineage: Vec<u64>,
    pub discarded: Vec<usize>,
    pub input_clusters: usize,
    pub output_clusters: usize,
    pub min_cut_calls: u64,
    pub cda_calls: u64,
    pub max_depth: usize,
}

#[derive(Debug, Serialize)]
pub struct CutResponse {
    pub cut_weight: u64,
    pub side_one: Vec<usize>,
    pub cut_edges: Vec<(usize, usize)>,
}

fn to_json<T: Serialize>(value: &T) -> Result<String, String> {
    serde_json::to_string(value).map_err(|e| e.to_string())
}

fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| e.to_string())
}

/// Builds a synthetic graph whose input clustering is the whole vertex set.
pub fn generate_json(spec: &str, seed: u64) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = match from_json::<Generator>(spec)? {
        Generator::CliqueChain { count, size } => synth::clique_chain(count, size),
        Generator::Planted { blocks, size, p_in, p_out } => {
            if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) {
                return Err("probabilities must lie in [0, 1]".into());
            }
            synth::planted_partition(&vec![size; blocks], p_in, p_out, &mut rng).0
        }
        Generator::Random { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err("probability must lie in [0, 1]".into());
            }
            synth::erdos_renyi(n, p, &mut rng)
        }
    };
    if g.num_vertices() > 2000 {
        return Err("keep demo graphs under 2000 vertices".into());
    }
    let labels = vec![Some(0); g.num_vertices()];
    to_json(&Scene::from_graph(&g, labels))
}

pub fn refine_json(request: &str) -> Result<String, String> {
    let req: RefineRequest = from_json(request)?;
    let g = req.scene.graph()?;
    let criterion: Criterion = req.criterion.parse().map_err(|e: wellcut::Error| e.to_string())?;
    let cfg = match req.mode.as_str() {
        "wcc" => RefinementConfig::wcc(criterion),
        "cm" => RefinementConfig::cm(criterion, CdaConfig::cpm(req.resolution)),
        other => return Err(format!("unknown mode {other:?}")),
    }
    .with_thresholds(req.s_pre, req.s_post)
    .with_parallelism(1);
    let out = wellcut::refine(&g, &req.scene.clustering(), &cfg).map_err(|e| e.to_string())?;
    let labels = (0..g.num_vertices()).map(|v| out.clustering.cluster_of(v)).collect();
    let s = &out.stats;
    to_json(&RefineResponse {
        labels,
        lineage: out.lineage,
        discarded: out.discarded,
        input_clusters: s.input_clusters,
        output_clusters: s.output_clusters,
        min_cut_calls: s.min_cut_calls as u64,
        cda_calls: s.cda_calls as u64,
        max_depth: s.max_depth,
    })
}

/// Minimum cut of the subgraph induced by the vertices labeled `cluster`.
pub fn min_cut_json(scene: &str, cluster: u64) -> Result<String, String> {
    let scene: Scene = from_json(scene)?;
    let g = scene.graph()?;
    let members: Vec<usize> = (0..scene.n)
        .filter(|&v| scene.labels.get(v).copied().flatten() == Some(cluster))
        .collect();
    if members.len() < 2 {
        return Err(format!("cluster {cluster} has fewer than two vertices"));
    }
    let sub = g.induced_subgraph(&members).map_err(|e| e.to_string())?;
    let cut = wellcut::global_min_cut(sub.graph()).map_err(|e| e.to_string())?;
    let side_one = sub.to_parent(&cut.side_one);
    let mut in_one = vec![false; scene.n];
    for &v in &side_one {
        in_one[v] = true;
    }
    let side_two = sub.to_parent(&cut.side_two);
    let mut in_two = vec![false; scene.n];
    for &v in &side_two {
        in_two[v] = true;
    }
    let cut_edges = g
        .edges()
        .filter(|&(u, v)| (in_one[u] && in_two[v]) || (in_two[u] && in_one[v]))
        .collect();
    to_json(&CutResponse {
        cut_weight: cut.cut_weight,
        side_one,
        cut_edges,
    })
}

/// CPM communities of the whole graph, as labels.
pub fn communities_json(scene: &str, resolution: f64) -> Result<String, String> {
    let scene: Scene = from_json(scene)?;
    let g = scene.graph()?;
    let found = wellcut::get_communities(&g, &CdaConfig::cpm(resolution)).map_err(|e| e.to_string())?;
    let mut labels = vec![None; scene.n];
    for (id, community) in found.communities().iter().enumerate() {
        for &v in community {
            labels[v] = Some(id as u64);
        }
    }
    let score = wellcut::score_cpm(&g, &found, resolution).map_err(|e| e.to_string())?;
    to_json(&serde_json::json!({ "labels": labels, "score": score }))
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn generate(spec: &str, seed: u64) -> Result<String, JsError> {
    js(generate_json(spec, seed))
}

#[wasm_bindgen]
pub fn refine(request: &str) -> Result<String, JsError> {
    js(refine_json(request))
}

#[wasm_bindgen(js_name = minCut)]
pub fn min_cut(scene: &str, cluster: u64) -> Result<String, JsError> {
    js(min_cut_json(scene, cluster))
}

#[wasm_bindgen]
pub fn communities(scene: &str, resolution: f64) -> Result<String, JsError> {
    js(communities_json(scene, resolution))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn chain(count: usize, size: usize) -> String {
        generate_json(
            &format!(r#"{{"kind":"clique_chain","count":{count},"size":{size}}}"#),
            0,
        )
        .unwrap()
    }

    #[test]
    fn generate_then_refine() {
        let scene = chain(3, 5);
        let req = format!(r#"{{"scene":{scene},"mode":"wcc","criterion":"log10"}}"#);
        let out: Value = serde_json::from_str(&refine_json(&req).unwrap()).unwrap();
        assert_eq!(out["output_clusters"], 3);
        assert_eq!(out["labels"][0], 0);
        assert_eq!(out["labels"][14], 2);
    }

    #[test]
    fn cm_mode_and_bad_requests() {
        let scene = chain(2, 6);
        let req = format!(r#"{{"scene":{scene},"mode":"cm","criterion":"linear:0.25","resolution":0.1}}"#);
        let out: Value = serde_json::from_str(&refine_json(&req).unwrap()).unwrap();
        assert_eq!(out["output_clusters"], 2);
        let bad = format!(r#"{{"scene":{scene},"mode":"xx","criterion":"log10"}}"#);
        assert!(refine_json(&bad).is_err());
        let bad = format!(r#"{{"scene":{scene},"mode":"wcc","criterion":"cube"}}"#);
        assert!(refine_json(&bad).is_err());
        assert!(generate_json(r#"{"kind":"random","n":10,"p":2.0}"#, 1).is_err());
    }

    #[test]
    fn min_cut_reports_the_bridge() {
        let scene = chain(2, 4);
        let out: Value = serde_json::from_str(&min_cut_json(&scene, 0).unwrap()).unwrap();
        assert_eq!(out["cut_weight"], 1);
        assert_eq!(out["cut_edges"], serde_json::json!([[3, 4]]));
        assert!(min_cut_json(&scene, 7).is_err());
    }

    #[test]
    fn communities_on_planted_blocks() {
        let scene = generate_json(
            r#"{"kind":"planted","blocks":3,"size":8,"p_in":1.0,"p_out":0.0}"#,
            3,
        )
        .unwrap();
        let out: Value = serde_json::from_str(&communities_json(&scene, 0.5).unwrap()).unwrap();
        let labels = out["labels"].as_array().unwrap();
        assert_eq!(labels[0], labels[7]);
        assert_ne!(labels[0], labels[8]);
        assert_eq!(out["score"], 3.0 * (28.0 - 0.5 * 28.0));
    }
}
