use crate::config::{Kind, Loaded};
use crate::error::CliError;
use crate::experiments::{
    adjudication_instance, excursions, par_name, tail_exponent, uniform_star_weight, uses_exact_star_sampler,
    validate_horizons, DEFAULT_TAIL_HORIZONS, ORACLE_MAX_T, VALIDATE_WALKS,
};
use errw_core::graph::MAX_SUBSET_EDGES;
use errw_core::infoquant::{composition_count, count_walks, COMPOSITION_BUDGET, PATH_BUDGET};
use std::fmt::Write as _;
use std::path::Path;

/// One planned operation and whether it fits its budget.
struct Step {
    what: String,
    proceed: bool,
}

fn step(what: impl Into<String>) -> Step {
    Step {
        what: what.into(),
        proceed: true,
    }
}

fn budgeted(what: &str, count: f64, budget: f64, unit: &str) -> Step {
    let proceed = count <= budget;
    let verdict = if proceed { "proceed" } else { "budget exceeded, refuse" };
    Step {
        what: format!("{what}: {count} {unit} (budget {budget}): {verdict}"),
        proceed,
    }
}

fn sampler(l: &Loaded) -> Step {
    let n = l.params().mcmc.n;
    if uses_exact_star_sampler(&l.graph, &l.p0) {
        step(format!(
            "environment sampler: {n} exact Dirichlet draws ({} parametrization)",
            par_name(l.params().parametrization)
        ))
    } else {
        let m = &l.params().mcmc;
        step(format!(
            "environment sampler: {n} MCMC draws (burn-in {}, thin {}, step scale {}, auto-tune {})",
            m.burn_in, m.thin, m.step_scale, m.auto_tune
        ))
    }
}

fn enumeration(l: &Loaded, t: usize) -> Step {
    budgeted(
        &format!("trajectory enumeration T={t}"),
        count_walks(&l.graph, l.p0.root, t),
        PATH_BUDGET,
        "walks",
    )
}

fn steps(l: &Loaded) -> Result<Vec<Step>, CliError> {
    let p = l.params();
    let g = &l.graph;
    let mut out = Vec::new();
    match l.config.kind {
        Kind::Validate => {
            out.push(step(format!(
                "path-probability oracle: {} simulated walks, T in 1..={ORACLE_MAX_T}",
                p.paths
            )));
            let hs = validate_horizons(g, l.p0.root);
            let last = hs.last().copied().unwrap_or(0);
            out.push(step(format!(
                "normalization and gap identity: T = 0..={last}, {} walks at most (cap {VALIDATE_WALKS})",
                count_walks(g, l.p0.root, last)
            )));
            out.push(step(format!(
                "gradient check: {} log-normalizer evaluations",
                2 * g.num_edges()
            )));
            out.push(step("environment KL: closed form against Bregman form"));
            out.push(sampler(l));
            let (n, a) = adjudication_instance(l);
            out.push(step(format!(
                "parametrization adjudication: {} urn runs of {} excursions, {n}-star with a = {a}",
                p.ks_samples, p.ks_excursions
            )));
        }
        Kind::EntropyRate => {
            out.push(sampler(l));
            out.push(step("entropy rate upper bound: closed form"));
            if let Some(t) = p.t.filter(|&t| t > 0) {
                out.push(enumeration(l, t));
            }
        }
        Kind::EnvKl => {
            l.require_p1()?;
            out.push(step("environment KL: closed form, Bregman form, edge and vertex terms"));
            out.push(sampler(l));
        }
        Kind::TrajKl => {
            l.require_p1()?;
            for t in l.horizons()? {
                out.push(enumeration(l, t));
            }
        }
        Kind::GapDecay => {
            l.require_p1()?;
            for t in l.horizons()? {
                out.push(step(format!(
                    "gap Monte Carlo T={t}: 3 estimators x {} trials x {t} steps, {} quadrature nodes",
                    p.trials, p.quad_nodes
                )));
            }
        }
        Kind::NstarRates => {
            let weights = l.star_weights()?;
            for a in weights {
                for t in l.horizons()? {
                    let m = excursions(l, t)?;
                    out.push(step(format!(
                        "star a={a} T={t} (M={m}): exact sums of {} terms, quadrature, urn {} trials x {m} draws",
                        m + 1,
                        p.trials
                    )));
                }
                out.push(step(format!(
                    "parametrization adjudication a={a}: {} urn runs of {} excursions",
                    p.ks_samples, p.ks_excursions
                )));
            }
        }
        Kind::MiGrowth => {
            if uniform_star_weight(l).is_some() {
                for t in l.horizons()? {
                    let m = excursions(l, t)?;
                    out.push(budgeted(
                        &format!("star composition sum T={t} (M={m})"),
                        composition_count(m, g.num_edges()),
                        COMPOSITION_BUDGET,
                        "compositions",
                    ));
                }
            } else {
                out.push(sampler(l));
                for t in l.horizons()? {
                    out.push(enumeration(l, t));
                }
            }
        }
        Kind::TailCheck => {
            let m = g.num_edges();
            let subsets = if m >= 64 {
                f64::INFINITY
            } else {
                2f64.powi(m as i32) - 2.0
            };
            out.push(budgeted(
                &format!("tail constants at s = {}", tail_exponent(l)),
                subsets,
                2f64.powi(MAX_SUBSET_EDGES as i32) - 2.0,
                "proper edge subsets",
            ));
            out.push(sampler(l));
            let horizons = match (&p.t_grid, p.t) {
                (None, None) => DEFAULT_TAIL_HORIZONS.to_vec(),
                _ => l.horizons()?,
            };
            for t in horizons {
                out.push(step(format!(
                    "inverse local time Monte Carlo T={t}: {} trials x {t} steps",
                    p.trials
                )));
            }
        }
    }
    Ok(out)
}

/// Plan listing and whether every step fits its budget.
pub fn describe(l: &Loaded, seed: u64, out_dir: &Path) -> Result<(String, bool), CliError> {
    let g = &l.graph;
    let mut text = String::new();
    let _ = writeln!(text, "experiment: {}", l.config.kind);
    let _ = writeln!(
        text,
        "graph: {} ({} vertices, {} edges, root {})",
        l.config.graph.display(),
        g.num_vertices(),
        g.num_edges(),
        g.label(l.p0.root)
    );
    let _ = writeln!(text, "seed: {seed}");
    let _ = writeln!(
        text,
        "artifacts: {}",
        out_dir.join(format!("{}.{{csv,json}}", l.config.kind)).display()
    );
    let _ = writeln!(text, "operations:");
    let plan = steps(l)?;
    for s in &plan {
        let _ = writeln!(text, "  - {}", s.what);
    }
    let proceed = plan.iter().all(|s| s.proceed);
    let _ = writeln!(text, "plan: {}", if proceed { "proceed" } else { "refuse" });
    Ok((text, proceed))
}
