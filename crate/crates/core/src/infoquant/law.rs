use crate::error::{Error, Result};
use crate::graph::{Graph, Trajectory};
use crate::magic::{env_kl, env_kl_terms, log_z, posterior_from_undirected, RootedParams};
use crate::numerics::KahanSum;
use serde::Serialize;
use std::collections::BTreeMap;

/// Default cap on the number of length-`T` walks an exact computation may cover.
pub const PATH_BUDGET: f64 = 1e7;

/// Number of walks of length `t` from `root`.
pub fn count_walks(g: &Graph, root: usize, t: usize) -> f64 {
    let mut ways = vec![0.0; g.num_vertices()];
    ways[root] = 1.0;
    for _ in 0..t {
        let mut next = vec![0.0; g.num_vertices()];
        for (v, &w) in ways.iter().enumerate() {
            if w != 0.0 {
                for (u, _) in g.neighbors(v) {
                    next[u] += w;
                }
            }
        }
        ways = next;
    }
    ways.iter().sum()
}

fn check_budget(g: &Graph, root: usize, t: usize, budget: f64) -> Result<f64> {
    let count = count_walks(g, root, t);
    if count > budget {
        return Err(Error::BudgetExceeded { count, budget });
    }
    Ok(count)
}

/// All walks of length `t` from `root`, by depth-first search.
pub fn enumerate_paths(g: &Graph, root: usize, t: usize, budget: f64) -> Result<Vec<Trajectory>> {
    check_budget(g, root, t, budget)?;
    let mut out = Vec::new();
    let mut stack = vec![root];
    fn dfs(g: &Graph, t: usize, stack: &mut Vec<usize>, out: &mut Vec<Trajectory>) {
        if stack.len() == t + 1 {
            out.push(Trajectory::from_states_unchecked(stack.clone()));
            return;
        }
        let at = *stack.last().expect("nonempty");
        for (v, _) in g.neighbors(at) {
            stack.push(v);
            dfs(g, t, stack, out);
            stack.pop();
        }
    }
    dfs(g, t, &mut stack, &mut out);
    Ok(out)
}

/// One class of paths sharing an undirected count vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawEntry {
    pub counts: Vec<u64>,
    pub end: usize,
    /// Number of paths in the class.
    pub multiplicity: u64,
    /// Log-probability of each single path in the class.
    pub log_prob: f64,
}

impl LawEntry {
    /// Total probability of the class.
    pub fn mass(&self) -> f64 {
        self.multiplicity as f64 * self.log_prob.exp()
    }
}

/// Exact law of `X_0^T` under ERRW, grouped by undirected count signature.
/// Every path in a class has the same probability
/// `Z_{x_T, A+N} / Z_{v0, A}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryLaw {
    pub horizon: usize,
    pub root: usize,
    pub entries: Vec<LawEntry>,
}

impl TrajectoryLaw {
    pub fn new(g: &Graph, p: &RootedParams, t: usize) -> Result<Self> {
        Self::with_budget(g, p, t, PATH_BUDGET)
    }

    pub fn with_budget(g: &Graph, p: &RootedParams, t: usize, budget: f64) -> Result<Self> {
        let classes = signature_classes(g, p.root, t, budget)?;
        let base = log_z(g, p);
        let entries = classes
            .into_iter()
            .map(|(counts, (end, multiplicity))| {
                let post = posterior_from_undirected(g, p, &counts)?;
                debug_assert_eq!(post.root, end);
                Ok(LawEntry {
                    log_prob: log_z(g, &post) - base,
                    counts,
                    end,
                    multiplicity,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            horizon: t,
            root: p.root,
            entries,
        })
    }

    pub fn total_mass(&self) -> f64 {
        self.entries.iter().map(LawEntry::mass).collect::<KahanSum>().value()
    }

    /// `H(X_0^T) = −Σ_paths P log P`.
    pub fn entropy(&self) -> f64 {
        -self
            .entries
            .iter()
            .map(|e| e.mass() * e.log_prob)
            .collect::<KahanSum>()
            .value()
    }
}

/// Count signatures reachable in `t` steps, each with its endpoint and path
/// multiplicity.
pub(crate) fn signature_classes(
    g: &Graph,
    root: usize,
    t: usize,
    budget: f64,
) -> Result<BTreeMap<Vec<u64>, (usize, u64)>> {
    check_budget(g, root, t, budget)?;
    let mut layer: BTreeMap<Vec<u64>, (usize, u64)> = BTreeMap::new();
    layer.insert(vec![0; g.num_edges()], (root, 1));
    for _ in 0..t {
        let mut next: BTreeMap<Vec<u64>, (usize, u64)> = BTreeMap::new();
        for (counts, &(at, mult)) in &layer {
            for (v, e) in g.neighbors(at) {
                let mut c = counts.clone();
                c[e] += 1;
                let slot = next.entry(c).or_insert((v, 0));
                debug_assert_eq!(slot.0, v);
                slot.1 += mult;
            }
        }
        layer = next;
    }
    Ok(layer)
}

fn check_pair(g: &Graph, p0: &RootedParams, p1: &RootedParams) -> Result<()> {
    if p0.root != p1.root {
        return Err(Error::RootMismatch(p0.root, p1.root));
    }
    g.check_len(p0.weights.len())?;
    g.check_len(p1.weights.len())
}

/// `D(P_0^{(T)} ‖ P_1^{(T)})` by exact summation over count classes.
pub fn trajectory_kl_exact(g: &Graph, p0: &RootedParams, p1: &RootedParams, t: usize) -> Result<f64> {
    check_pair(g, p0, p1)?;
    let law = TrajectoryLaw::new(g, p0, t)?;
    let base1 = log_z(g, p1);
    let mut acc = KahanSum::new();
    for entry in &law.entries {
        let post1 = posterior_from_undirected(g, p1, &entry.counts)?;
        let lp1 = log_z(g, &post1) - base1;
        acc.add(entry.mass() * (entry.log_prob - lp1));
    }
    Ok(acc.value().max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMethod {
    ExactEnumeration,
    Mc,
}

/// Environment KL, trajectory KL and their gap, with the edge and vertex
/// `Λ` parts of the posterior expectation.
#[derive(Debug, Clone, Serialize)]
pub struct GapReport {
    pub horizon: usize,
    pub env_kl: f64,
    pub traj_kl: f64,
    /// `env_kl − traj_kl`.
    pub gap: f64,
    /// `E_{P_0}[D(μ_{x_T, A0+N} ‖ μ_{x_T, A1+N})]`.
    pub gap_posterior: f64,
    pub method: GapMethod,
    pub std_error: Option<f64>,
    /// `E[Σ_e Λ(a0_e + N_e, a1_e + N_e)]`.
    pub edge_term: f64,
    /// `E[Σ_v Λ(b0_v, b1_v)]` at the posterior root.
    pub vertex_term: f64,
}

/// Gap computed two ways: `env_kl − traj_kl`, and the exhaustive expectation
/// of the posterior environment KL.
pub fn gap_exact(g: &Graph, p0: &RootedParams, p1: &RootedParams, t: usize) -> Result<GapReport> {
    check_pair(g, p0, p1)?;
    let env = env_kl(g, p0, p1)?.value;
    let traj = trajectory_kl_exact(g, p0, p1, t)?;
    let law = TrajectoryLaw::new(g, p0, t)?;
    let (mut post, mut edge, mut vert) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
    for entry in &law.entries {
        let a0 = p0.weights.plus_counts(&entry.counts);
        let a1 = p1.weights.plus_counts(&entry.counts);
        let kl = env_kl_terms(g, a0.values(), a1.values(), entry.end);
        let m = entry.mass();
        post.add(m * (kl.edge_term - kl.vertex_term));
        edge.add(m * kl.edge_term);
        vert.add(m * kl.vertex_term);
    }
    Ok(GapReport {
        horizon: t,
        env_kl: env,
        traj_kl: traj,
        gap: env - traj,
        gap_posterior: post.value(),
        method: GapMethod::ExactEnumeration,
        std_error: None,
        edge_term: edge.value(),
        vertex_term: vert.value(),
    })
}
