use crate::error::CliError;
use errw_core::envsampler::{McmcSettings, Parametrization};
use errw_core::graph::{EdgeWeights, Graph, GraphSpec};
use errw_core::magic::RootedParams;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Validate,
    EntropyRate,
    EnvKl,
    TrajKl,
    GapDecay,
    NstarRates,
    MiGrowth,
    TailCheck,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Validate => "validate",
            Kind::EntropyRate => "entropy-rate",
            Kind::EnvKl => "env-kl",
            Kind::TrajKl => "traj-kl",
            Kind::GapDecay => "gap-decay",
            Kind::NstarRates => "nstar-rates",
            Kind::MiGrowth => "mi-growth",
            Kind::TailCheck => "tail-check",
        };
        f.write_str(s)
    }
}

/// Edge weights given as one value for every edge or as a list in the order
/// the graph file lists its edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightSpec {
    Uniform(f64),
    PerEdge(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub a0: Option<WeightSpec>,
    pub a1: Option<WeightSpec>,
    pub t: Option<usize>,
    pub t_grid: Option<Vec<usize>>,
    /// Excursion counts for star experiments.
    pub m_grid: Option<Vec<u64>>,
    /// Leaf weights swept by `nstar-rates`.
    pub a_values: Option<Vec<f64>>,
    /// Weight increment of the alternative in star gap tables.
    pub delta: f64,
    pub trials: usize,
    pub gamma: f64,
    pub s: Option<f64>,
    pub edge: Option<(String, String)>,
    pub eps: Vec<f64>,
    pub mcmc: McmcSettings,
    pub quad_nodes: usize,
    pub paths: usize,
    pub parametrization: Parametrization,
    pub ks_samples: usize,
    pub ks_excursions: u64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            a0: None,
            a1: None,
            t: None,
            t_grid: None,
            m_grid: None,
            a_values: None,
            delta: 0.5,
            trials: 2000,
            gamma: 1.0,
            s: None,
            edge: None,
            eps: vec![0.1, 0.05, 0.02, 0.01],
            mcmc: McmcSettings::default(),
            quad_nodes: 32,
            paths: 1000,
            parametrization: Parametrization::Half,
            ks_samples: 20_000,
            ks_excursions: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: Kind,
    /// Graph file, relative to the config file's directory.
    pub graph: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub params: Params,
}

/// A parsed config with its graph loaded and weights resolved.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: ExperimentConfig,
    pub config_path: PathBuf,
    pub graph: Graph,
    pub p0: RootedParams,
    pub p1: Option<RootedParams>,
    pub edge: usize,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn weights(
    spec: &WeightSpec,
    file: &GraphSpec,
    g: &Graph,
    config_path: &Path,
    name: &str,
) -> Result<EdgeWeights, CliError> {
    let bad = |msg: String| CliError::Config {
        path: config_path.to_path_buf(),
        msg: format!("params.{name}: {msg}"),
    };
    let values = match spec {
        WeightSpec::Uniform(x) => vec![*x; g.num_edges()],
        WeightSpec::PerEdge(list) => {
            if list.len() != file.edges.len() {
                return Err(bad(format!(
                    "expected {} weights, got {}",
                    file.edges.len(),
                    list.len()
                )));
            }
            let mut out = vec![0.0; g.num_edges()];
            for (es, &x) in file.edges.iter().zip(list) {
                let u = g.vertex_index(&es.u).expect("graph validated");
                let v = g.vertex_index(&es.v).expect("graph validated");
                out[g.edge_between(u, v).expect("graph validated")] = x;
            }
            out
        }
    };
    EdgeWeights::new(values).map_err(|e| bad(e.to_string()))
}

impl Loaded {
    pub fn from_path(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        let config: ExperimentConfig = serde_json::from_str(&text).map_err(|e| CliError::Config {
            path: path.to_path_buf(),
            msg: format!("line {}, column {}: {e}", e.line(), e.column()),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        let graph_path = base.join(&config.graph);
        let graph_err = |msg: String| CliError::Graph {
            path: graph_path.clone(),
            msg,
        };
        let file = GraphSpec::from_json(&read(&graph_path)?).map_err(|e| graph_err(e.to_string()))?;
        let (graph, file_weights) = file.build().map_err(|e| graph_err(e.to_string()))?;
        let p = &config.params;
        let a0 = match &p.a0 {
            Some(spec) => weights(spec, &file, &graph, path, "a0")?,
            None => file_weights,
        };
        let a1 =
            p.a1.as_ref()
                .map(|spec| weights(spec, &file, &graph, path, "a1"))
                .transpose()?;
        let p0 = RootedParams::at_root(&graph, a0)?;
        let p1 = a1.map(|a| RootedParams::at_root(&graph, a)).transpose()?;
        let edge = match &p.edge {
            None => 0,
            Some((u, v)) => {
                let idx = |x: &str| graph.vertex_index(x);
                idx(u)
                    .zip(idx(v))
                    .and_then(|(u, v)| graph.edge_between(u, v))
                    .ok_or_else(|| CliError::Config {
                        path: path.to_path_buf(),
                        msg: format!("params.edge: no edge {u}-{v} in the graph"),
                    })?
            }
        };
        let loaded = Loaded {
            config,
            config_path: path.to_path_buf(),
            graph,
            p0,
            p1,
            edge,
        };
        loaded.check()?;
        Ok(loaded)
    }

    fn invalid(&self, msg: impl Into<String>) -> CliError {
        CliError::Config {
            path: self.config_path.clone(),
            msg: msg.into(),
        }
    }

    fn check(&self) -> Result<(), CliError> {
        let p = &self.config.params;
        if p.trials < 1 {
            return Err(self.invalid("params.trials must be at least 1"));
        }
        if !(p.gamma > 0.0) {
            return Err(self.invalid("params.gamma must be positive"));
        }
        if let Some(grid) = &p.t_grid {
            if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(self.invalid("params.t_grid must be nonempty and strictly increasing"));
            }
        }
        if let Some(grid) = &p.m_grid {
            if grid.is_empty() || grid.windows(2).any(|w| w[1] <= w[0]) {
                return Err(self.invalid("params.m_grid must be nonempty and strictly increasing"));
            }
        }
        if p.quad_nodes < 8 {
            return Err(self.invalid("params.quad_nodes must be at least 8"));
        }
        if self.config.kind == Kind::NstarRates && !self.graph.is_star_at_root() {
            return Err(self.invalid("nstar-rates needs a star graph rooted at its center"));
        }
        Ok(())
    }

    pub fn params(&self) -> &Params {
        &self.config.params
    }

    pub fn require_p1(&self) -> Result<&RootedParams, CliError> {
        self.p1
            .as_ref()
            .ok_or_else(|| self.invalid(format!("{} needs params.a1", self.config.kind)))
    }

    /// Horizons from `t_grid`, else the single `t`.
    pub fn horizons(&self) -> Result<Vec<usize>, CliError> {
        let p = self.params();
        match (&p.t_grid, p.t) {
            (Some(grid), _) => Ok(grid.clone()),
            (None, Some(t)) => Ok(vec![t]),
            (None, None) => Err(self.invalid(format!("{} needs params.t or params.t_grid", self.config.kind))),
        }
    }

    /// Leaf weights for star sweeps: `a_values`, else the common weight of `a0`.
    pub fn star_weights(&self) -> Result<Vec<f64>, CliError> {
        if let Some(v) = &self.params().a_values {
            return Ok(v.clone());
        }
        let a = self.p0.a();
        if a.iter().all(|&x| x == a[0]) {
            Ok(vec![a[0]])
        } else {
            Err(self.invalid("params.a_values is required when leaf weights differ"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_untagged() {
        let p: Params = serde_json::from_str(r#"{"a0": 2.0, "a1": [1, 2, 3]}"#).unwrap();
        assert_eq!(p.a0, Some(WeightSpec::Uniform(2.0)));
        assert_eq!(p.a1, Some(WeightSpec::PerEdge(vec![1.0, 2.0, 3.0])));
        assert_eq!(p.trials, 2000);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(serde_json::from_str::<Params>(r#"{"trails": 3}"#).is_err());
    }
}
