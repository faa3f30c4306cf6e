use super::{EdgeWeights, Graph};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// JSON graph description:
/// `{"vertices": [...], "edges": [{"u": .., "v": .., "a": 1.0}, ...], "root": "v0", "ref_edge": ["v0", "v1"]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSpec>,
    pub root: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ref_edge: Option<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeSpec {
    pub u: String,
    pub v: String,
    #[serde(default = "default_weight")]
    pub a: f64,
}

fn default_weight() -> f64 {
    1.0
}

impl GraphSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text)
            .map_err(|e| Error::InvalidGraph(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    /// Canonical graph plus the `a` fields rearranged into canonical edge order.
    pub fn build(&self) -> Result<(Graph, EdgeWeights)> {
        let pairs: Vec<(String, String)> = self.edges.iter().map(|e| (e.u.clone(), e.v.clone())).collect();
        let refe = self.ref_edge.as_ref().map(|(u, v)| (u.as_str(), v.as_str()));
        let g = Graph::new(self.vertices.clone(), &pairs, &self.root, refe)?;
        let mut a = vec![0.0; g.num_edges()];
        for es in &self.edges {
            let u = g.vertex_index(&es.u).expect("validated");
            let v = g.vertex_index(&es.v).expect("validated");
            a[g.edge_between(u, v).expect("validated")] = es.a;
        }
        Ok((g, EdgeWeights::new(a)?))
    }

    pub fn from_graph(g: &Graph, a: &EdgeWeights) -> Self {
        let (ru, rv) = g.edge(g.reference_edge());
        GraphSpec {
            vertices: g.labels().to_vec(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(u, v))| EdgeSpec {
                    u: g.label(u).to_string(),
                    v: g.label(v).to_string(),
                    a: a[e],
                })
                .collect(),
            root: g.label(g.root()).to_string(),
            ref_edge: Some((g.label(ru).to_string(), g.label(rv).to_string())),
        }
    }
}
