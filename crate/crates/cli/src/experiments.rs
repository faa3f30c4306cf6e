use crate::artifacts::{Check, Outcome, Table};
use crate::config::{Kind, Loaded};
use crate::error::CliError;
use crate::row;
use errw_core::envsampler::{
    mcmc_sample_env, sample_env_star, validate_sampler, Parametrization, SampleMethod, SampleSet,
};
use errw_core::graph::{EdgeWeights, Graph};
use errw_core::infoquant::{
    count_walks, entropy_rate_mc, entropy_rate_upper, enumerate_paths, gap_exact, gap_formula_mc, gap_integral,
    gap_upper, inverse_bound_eval, inverse_local_time_mc, mi_nstar_exact, mi_upper_bound, mutual_information_exact,
    nstar_gap_exact, nstar_inverse_exact, nstar_inverse_quadrature, nstar_urn_mc, rate_fit, refined_threshold,
    run_trials, star_beta_parameters, tail_constants, urn_draws, BoundVariant, RateFit, RefinedSchedule,
    ThresholdedSchedule, TrajectoryLaw, PATH_BUDGET,
};
use errw_core::magic::{
    env_kl, env_kl_bregman, grad_log_z, log_path_probability, log_z, sequential_log_probability, sufficient_statistics,
    RootedParams,
};
use errw_core::numerics::{effective_sample_size, kahan_sum, ks_statistic, mean_and_se};
use errw_core::walkers::{simulate_errw_with, RngSeed};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use statrs::distribution::{Beta, ContinuousCDF};

pub const SIGMAS: f64 = 4.0;
pub const PATH_TOL: f64 = 1e-9;
pub const NORMALIZATION_TOL: f64 = 1e-9;
pub const GAP_IDENTITY_TOL: f64 = 1e-8;
pub const GRADIENT_TOL: f64 = 1e-6;
pub const KL_FORMS_TOL: f64 = 1e-10;
pub const QUADRATURE_TOL: f64 = 1e-6;
/// Largest walk count enumerated by `validate`.
pub const VALIDATE_WALKS: f64 = 1e5;
pub const VALIDATE_MAX_T: usize = 10;
pub const ORACLE_MAX_T: usize = 30;
pub const DEFAULT_TAIL_HORIZONS: [usize; 3] = [10, 100, 1000];

/// Stream `item` of section `section`; each leaves 2^32 trial streams.
pub fn stream(seed: u64, section: u64, item: u64) -> RngSeed {
    RngSeed::new(seed, (section << 48) | (item << 32))
}

pub fn run(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    match l.config.kind {
        Kind::Validate => validate(l, seed),
        Kind::EntropyRate => entropy_rate(l, seed),
        Kind::EnvKl => env_kl_experiment(l, seed),
        Kind::TrajKl => traj_kl(l),
        Kind::GapDecay => gap_decay(l, seed),
        Kind::NstarRates => nstar_rates(l, seed),
        Kind::MiGrowth => mi_growth(l, seed),
        Kind::TailCheck => tail_check(l, seed),
    }
}

pub fn uses_exact_star_sampler(g: &Graph, p: &RootedParams) -> bool {
    g.with_root(p.root).map(|h| h.is_star_at_root()).unwrap_or(false)
}

fn environments(l: &Loaded, p: &RootedParams, seed: RngSeed) -> Result<SampleSet, CliError> {
    let settings = &l.params().mcmc;
    let set = if uses_exact_star_sampler(&l.graph, p) {
        sample_env_star(&l.graph, p, settings.n, seed, l.params().parametrization)?
    } else {
        mcmc_sample_env(&l.graph, p, settings, seed)?
    };
    Ok(set)
}

/// Mean and standard error, inflated by autocorrelation for MCMC draws.
fn sample_mean(values: &[f64], method: SampleMethod) -> (f64, f64) {
    let (mean, se) = mean_and_se(values);
    if method == SampleMethod::Mcmc && values.len() > 1 {
        (
            mean,
            se * (values.len() as f64 / effective_sample_size(values).max(1.0)).sqrt(),
        )
    } else {
        (mean, se)
    }
}

fn edge_label(g: &Graph, e: usize) -> String {
    let (u, v) = g.edge(e);
    format!("{}-{}", g.label(u), g.label(v))
}

fn checks_table(checks: &[Check]) -> Table {
    let mut table = Table::new(&["suite", "check", "value", "tolerance", "pass"]);
    for c in checks {
        table.push(row![c.suite.as_str(), c.name.as_str(), c.value, c.tolerance, c.pass]);
    }
    table
}

fn tally(checks: &[Check]) -> String {
    format!(
        "{}/{} checks passed",
        checks.iter().filter(|c| c.pass).count(),
        checks.len()
    )
}

fn fit_json(fit: Option<RateFit>) -> Value {
    match fit {
        Some(f) => json!({ "slope": f.slope, "intercept": f.intercept, "r2": f.r2 }),
        None => Value::Null,
    }
}

/// Log-log fit over the strictly positive points, if at least four remain.
fn positive_fit(points: &[(f64, f64)]) -> Option<RateFit> {
    let kept: Vec<(f64, f64)> = points.iter().copied().filter(|&(x, y)| x > 0.0 && y > 0.0).collect();
    rate_fit(&kept).ok()
}

/// Kolmogorov–Smirnov distances of jittered urn frequencies `(K + U)/M` to
/// the Beta marginals of both star parametrizations.
pub struct Adjudication {
    pub n: usize,
    pub a: f64,
    pub m: u64,
    pub samples: usize,
    pub d_half: f64,
    pub d_full: f64,
}

impl Adjudication {
    pub fn run(n: usize, a: f64, m: u64, samples: usize, seed: RngSeed) -> Result<Self, CliError> {
        if m == 0 || samples == 0 {
            return Err(CliError::Setup(
                "adjudication needs ks_excursions ≥ 1 and ks_samples ≥ 1".into(),
            ));
        }
        let freqs = run_trials(samples, seed, |s| {
            let mut rng = s.rng();
            (urn_draws(n, a, m, &mut rng) as f64 + rng.random::<f64>()) / m as f64
        });
        let ks = |par: Parametrization| -> Result<f64, CliError> {
            let (x, y) = star_beta_parameters(n, a, par);
            let beta = Beta::new(x, y).map_err(|e| CliError::Setup(format!("Beta({x}, {y}): {e}")))?;
            Ok(ks_statistic(&freqs, |t| beta.cdf(t)))
        };
        Ok(Self {
            n,
            a,
            m,
            samples,
            d_half: ks(Parametrization::Half)?,
            d_full: ks(Parametrization::Full)?,
        })
    }

    pub fn winner(&self) -> Parametrization {
        if self.d_half <= self.d_full {
            Parametrization::Half
        } else {
            Parametrization::Full
        }
    }

    fn distance(&self, par: Parametrization) -> f64 {
        match par {
            Parametrization::Half => self.d_half,
            Parametrization::Full => self.d_full,
        }
    }

    fn check(&self, suite: &str, configured: Parametrization) -> Check {
        let other = match configured {
            Parametrization::Half => Parametrization::Full,
            Parametrization::Full => Parametrization::Half,
        };
        let (mine, theirs) = (self.distance(configured), self.distance(other));
        Check::new(
            suite,
            format!("ks_{}_below_alternative_a{}", par_name(configured), self.a),
            mine,
            theirs,
            mine < theirs,
        )
    }

    fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "a": self.a,
            "excursions": self.m,
            "samples": self.samples,
            "ks_half": self.d_half,
            "ks_full": self.d_full,
            "winner": par_name(self.winner()),
        })
    }
}

pub fn par_name(p: Parametrization) -> &'static str {
    match p {
        Parametrization::Half => "half",
        Parametrization::Full => "full",
    }
}

/// Star instance used by `validate` for the parametrization adjudication:
/// the configured star if it has equal leaf weights, else the 3-star with
/// `a = 1`.
pub fn adjudication_instance(l: &Loaded) -> (usize, f64) {
    let a = l.p0.a();
    if l.graph.is_star_at_root() && a.iter().all(|&x| x == a[0]) {
        (a.len(), a[0])
    } else {
        (3, 1.0)
    }
}

/// Alternative weights for `validate`: `a1`, else `a0 + 1`.
pub fn validate_alternative(l: &Loaded) -> Result<RootedParams, CliError> {
    match &l.p1 {
        Some(p) => Ok(p.clone()),
        None => {
            let shifted = EdgeWeights::new(l.p0.a().iter().map(|x| x + 1.0).collect())?;
            Ok(RootedParams::at_root(&l.graph, shifted)?)
        }
    }
}

/// Horizons `0..=VALIDATE_MAX_T` whose walk count stays within `VALIDATE_WALKS`.
pub fn validate_horizons(g: &Graph, root: usize) -> Vec<usize> {
    (0..=VALIDATE_MAX_T)
        .take_while(|&t| count_walks(g, root, t) <= VALIDATE_WALKS)
        .collect()
}

fn validate(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    let (g, p0) = (&l.graph, &l.p0);
    let p1 = validate_alternative(l)?;
    let params = l.params();
    let mut checks = Vec::new();
    let mut results = Map::new();

    let mut rng = stream(seed, 1, 0).rng();
    let mut worst: f64 = 0.0;
    for _ in 0..params.paths {
        let t = rng.random_range(1..=ORACLE_MAX_T);
        let path = simulate_errw_with(g, p0, t, &mut rng);
        let closed = log_path_probability(g, p0, &path)?;
        let sequential = sequential_log_probability(g, p0, &path)?;
        worst = worst.max((closed - sequential).abs());
    }
    checks.push(Check::at_most(
        "path_probability_oracle",
        "max_abs_log_probability_difference",
        worst,
        PATH_TOL,
    ));

    let horizons = validate_horizons(g, p0.root);
    let mut worst: f64 = 0.0;
    for &t in &horizons {
        let grouped = TrajectoryLaw::new(g, p0, t)?.total_mass();
        let mut direct = Vec::new();
        for path in enumerate_paths(g, p0.root, t, PATH_BUDGET)? {
            direct.push(log_path_probability(g, p0, &path)?.exp());
        }
        worst = worst.max((grouped - 1.0).abs()).max((kahan_sum(direct) - 1.0).abs());
    }
    checks.push(Check::at_most(
        "normalization",
        "max_abs_total_mass_error",
        worst,
        NORMALIZATION_TOL,
    ));

    let mut worst: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut gaps = Vec::new();
    for &t in &horizons {
        let r = gap_exact(g, p0, &p1, t)?;
        worst = worst.max((r.gap - r.gap_posterior).abs());
        min_gap = min_gap.min(r.gap);
        gaps.push(json!({ "T": t, "gap": r.gap, "gap_posterior": r.gap_posterior }));
    }
    checks.push(Check::at_most(
        "gap_identity",
        "max_abs_gap_difference",
        worst,
        GAP_IDENTITY_TOL,
    ));
    checks.push(Check::new(
        "gap_identity",
        "min_gap",
        min_gap,
        -GAP_IDENTITY_TOL,
        min_gap >= -GAP_IDENTITY_TOL,
    ));
    results.insert("gap_identity".into(), Value::Array(gaps));

    let h = 1e-5;
    let grad = grad_log_z(g, p0);
    let mut worst: f64 = 0.0;
    for (e, &ge) in grad.iter().enumerate() {
        let shifted = |d: f64| -> Result<f64, CliError> {
            let mut x = p0.a().to_vec();
            x[e] += d;
            Ok(log_z(g, &RootedParams::at_root(g, EdgeWeights::new(x)?)?))
        };
        let fd = (shifted(h)? - shifted(-h)?) / (2.0 * h);
        worst = worst.max((ge - fd).abs());
    }
    checks.push(Check::at_most(
        "gradient_check",
        "max_abs_finite_difference_error",
        worst,
        GRADIENT_TOL,
    ));

    let closed = env_kl(g, p0, &p1)?.value;
    let bregman = env_kl_bregman(g, p0, &p1)?;
    let rel = (closed - bregman).abs() / closed.abs().max(1.0);
    checks.push(Check::at_most(
        "env_kl_forms",
        "relative_closed_minus_bregman",
        rel,
        KL_FORMS_TOL,
    ));

    let set = environments(l, p0, stream(seed, 2, 0))?;
    let report = validate_sampler(g, &set, p0)?;
    checks.push(Check::at_most("sampler", "max_abs_z", report.max_abs_z, SIGMAS));
    results.insert("sampler".into(), serde_json::to_value(&report).expect("serializable"));

    let (n, a) = adjudication_instance(l);
    let adj = Adjudication::run(n, a, params.ks_excursions, params.ks_samples, stream(seed, 3, 0))?;
    checks.push(adj.check("star_parametrization", params.parametrization));
    results.insert("star_parametrization".into(), adj.to_json());

    let summary = format!("validate: {}", tally(&checks));
    Ok(Outcome {
        table: checks_table(&checks),
        results,
        checks,
        summary,
    })
}

fn entropy_rate(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    let (g, p0) = (&l.graph, &l.p0);
    let set = environments(l, p0, stream(seed, 1, 0))?;
    let est = entropy_rate_mc(g, &set)?;
    let upper = entropy_rate_upper(g, p0);
    let slack = SIGMAS * est.std_error;
    let max_degree = (0..g.num_vertices()).map(|v| g.degree(v)).max().unwrap_or(1) as f64;
    let mut table = Table::new(&["quantity", "horizon", "value_nats_per_step", "std_error_nats_per_step"]);
    table.push(row!["entropy_rate_mc", "", est.value, est.std_error]);
    table.push(row!["entropy_rate_upper", "", upper, 0.0]);
    let mut checks = vec![
        Check::new(
            "entropy_rate",
            "upper_minus_estimate",
            upper - est.value,
            -slack,
            upper >= est.value - slack,
        ),
        Check::new(
            "entropy_rate",
            "estimate_within_log_max_degree",
            est.value,
            max_degree.ln() + slack,
            est.value >= -slack && est.value <= max_degree.ln() + slack,
        ),
    ];
    let mut results = Map::new();
    results.insert("estimate".into(), json!(est));
    results.insert("upper".into(), json!(upper));
    if let Some(t) = l.params().t.filter(|&t| t > 0) {
        let h = TrajectoryLaw::new(g, p0, t)?.entropy() / t as f64;
        let hi = est.value + slack + mi_upper_bound(t as u64, g.num_edges()) / t as f64;
        table.push(row!["path_entropy_per_step", t, h, 0.0]);
        checks.push(Check::new(
            "entropy_sandwich",
            format!("path_entropy_per_step_T{t}"),
            h,
            hi,
            h >= est.value - slack && h <= hi,
        ));
        results.insert(
            "path_entropy_per_step".into(),
            json!({ "T": t, "value": h, "upper": hi }),
        );
    }
    let summary = format!(
        "entropy-rate: r = {} ± {}, upper {}; {}",
        est.value,
        est.std_error,
        upper,
        tally(&checks)
    );
    Ok(Outcome {
        table,
        results,
        checks,
        summary,
    })
}

fn env_kl_experiment(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    let (g, p0) = (&l.graph, &l.p0);
    let p1 = l.require_p1()?;
    let kl = env_kl(g, p0, p1)?;
    let bregman = env_kl_bregman(g, p0, p1)?;
    let set = environments(l, p0, stream(seed, 1, 0))?;
    let delta: Vec<f64> = p0.a().iter().zip(p1.a()).map(|(x, y)| x - y).collect();
    let values: Vec<f64> = set
        .samples
        .iter()
        .map(|x| sufficient_statistics(g, x).iter().zip(&delta).map(|(t, d)| t * d).sum())
        .collect();
    let (mean, se) = sample_mean(&values, set.method);
    let mc = mean + log_z(g, p1) - log_z(g, p0);

    let mut table = Table::new(&["form", "value_nats", "std_error_nats"]);
    table.push(row!["closed_form", kl.value, 0.0]);
    table.push(row!["bregman", bregman, 0.0]);
    table.push(row!["edge_term", kl.edge_term, 0.0]);
    table.push(row!["vertex_term", kl.vertex_term, 0.0]);
    table.push(row!["sufficient_statistic_mc", mc, se]);
    let rel = (kl.value - bregman).abs() / kl.value.abs().max(1.0);
    let checks = vec![
        Check::at_most("env_kl_forms", "relative_closed_minus_bregman", rel, KL_FORMS_TOL),
        Check::at_most("env_kl_mc", "abs_mc_minus_closed", (mc - kl.value).abs(), SIGMAS * se),
    ];
    let mut results = Map::new();
    results.insert(
        "env_kl".into(),
        json!({ "value": kl.value, "bregman": bregman, "edge_term": kl.edge_term, "vertex_term": kl.vertex_term }),
    );
    results.insert(
        "mc".into(),
        json!({ "value": mc, "std_error": se, "samples": set.len() }),
    );
    let summary = format!("env-kl: D = {} (MC {} ± {}); {}", kl.value, mc, se, tally(&checks));
    Ok(Outcome {
        table,
        results,
        checks,
        summary,
    })
}

fn traj_kl(l: &Loaded) -> Result<Outcome, CliError> {
    let (g, p0) = (&l.graph, &l.p0);
    let p1 = l.require_p1()?;
    let horizons = l.horizons()?;
    let reports = horizons
        .par_iter()
        .map(|&t| gap_exact(g, p0, p1, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "T",
        "env_kl_nats",
        "traj_kl_nats",
        "gap_nats",
        "gap_posterior_nats",
        "edge_term_nats",
        "vertex_term_nats",
    ]);
    let mut worst: f64 = 0.0;
    let mut excess = f64::NEG_INFINITY;
    let mut drop: f64 = 0.0;
    for (i, r) in reports.iter().enumerate() {
        table.push(row![
            r.horizon,
            r.env_kl,
            r.traj_kl,
            r.gap,
            r.gap_posterior,
            r.edge_term,
            r.vertex_term
        ]);
        worst = worst.max((r.gap - r.gap_posterior).abs());
        excess = excess.max(r.traj_kl - r.env_kl);
        if i > 0 {
            drop = drop.max(reports[i - 1].traj_kl - r.traj_kl);
        }
    }
    let checks = vec![
        Check::at_most("gap_identity", "max_abs_gap_difference", worst, GAP_IDENTITY_TOL),
        Check::at_most("data_processing", "max_traj_minus_env", excess, GAP_IDENTITY_TOL),
        Check::at_most("data_processing", "max_decrease_in_T", drop, GAP_IDENTITY_TOL),
    ];
    let mut results = Map::new();
    results.insert("horizons".into(), serde_json::to_value(&reports).expect("serializable"));
    let last = reports.last().expect("nonempty grid");
    let summary = format!(
        "traj-kl: T = {} traj KL {} of env KL {}; {}",
        last.horizon,
        last.traj_kl,
        last.env_kl,
        tally(&checks)
    );
    Ok(Outcome {
        table,
        results,
        checks,
        summary,
    })
}

fn gap_decay(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    let (g, p0) = (&l.graph, &l.p0);
    let p1 = l.require_p1()?;
    let params = l.params();
    let horizons = l.horizons()?;
    let rows = horizons
        .par_iter()
        .enumerate()
        .map(|(j, &t)| {
            let j = j as u64;
            let mc = gap_formula_mc(g, p0, p1, t, params.trials, stream(seed, 1, j))?;
            let upper = gap_upper(g, p0, p1, t, params.trials, stream(seed, 2, j))?;
            let integral = gap_integral(g, p0, p1, t, params.trials, stream(seed, 3, j), params.quad_nodes)?;
            Ok((t, mc, upper, integral))
        })
        .collect::<Result<Vec<_>, errw_core::Error>>()?;
    let mut table = Table::new(&[
        "T",
        "gap_mc_nats",
        "std_error_nats",
        "edge_term_nats",
        "vertex_term_nats",
        "gap_upper_nats",
        "upper_std_error_nats",
        "gap_integral_nats",
        "integral_std_error_nats",
    ]);
    let mut checks = Vec::new();
    let mut points = Vec::new();
    for (t, mc, upper, integral) in &rows {
        table.push(row![
            *t,
            mc.value,
            mc.std_error,
            mc.edge_term,
            mc.vertex_term,
            upper.value,
            upper.std_error,
            integral.value,
            integral.std_error
        ]);
        let su = SIGMAS * mc.std_error.hypot(upper.std_error);
        checks.push(Check::new(
            "gap_upper",
            format!("upper_minus_gap_T{t}"),
            upper.value - mc.value,
            -su,
            upper.value >= mc.value - su,
        ));
        let si = SIGMAS * mc.std_error.hypot(integral.std_error);
        checks.push(Check::at_most(
            "gap_integral",
            format!("abs_integral_minus_gap_T{t}"),
            (integral.value - mc.value).abs(),
            si,
        ));
        points.push((*t as f64, mc.value));
    }
    let fit = positive_fit(&points);
    let mut results = Map::new();
    results.insert("fit".into(), fit_json(fit));
    results.insert("env_kl".into(), json!(env_kl(g, p0, p1)?.value));
    let slope = fit.map_or("n/a".to_string(), |f| format!("{:.4}", f.slope));
    let summary = format!(
        "gap-decay: {} horizons, fitted slope {slope}; {}",
        rows.len(),
        tally(&checks)
    );
    Ok(Outcome {
        table,
        results,
        checks,
        summary,
    })
}

/// Converts walk steps on a star to excursions from its center.
pub fn excursions(l: &Loaded, t: usize) -> Result<u64, CliError> {
    if !t.is_multiple_of(2) {
        return Err(CliError::Config {
            path: l.config_path.clone(),
            msg: format!("star horizons must be even walk step counts, got T = {t}"),
        });
    }
    Ok((t / 2) as u64)
}

fn nstar_rates(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    let params = l.params();
    let par = params.parametrization;
    let other = match par {
        Parametrization::Half => Parametrization::Full,
        Parametrization::Full => Parametrization::Half,
    };
    let n = l.graph.num_edges();
    let weights = l.star_weights()?;
    let horizons = l.horizons()?;
    let ms = horizons
        .iter()
        .map(|&t| excursions(l, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new(&[
        "a",
        "alpha",
        "T",
        "M",
        "inverse_moment",
        "inverse_quadrature",
        "inverse_alternative",
        "urn_mc",
        "urn_std_error",
        "gap_nats",
        "gap_edge_term_nats",
        "gap_vertex_term_nats",
    ]);
    let mut checks = Vec::new();
    let mut fits = Vec::new();
    for (i, &a) in weights.iter().enumerate() {
        let alpha = par.alpha(a);
        let rows = ms
            .par_iter()
            .enumerate()
            .map(|(j, &m)| {
                let exact = nstar_inverse_exact(n, a, params.gamma, m, par)?;
                let quad = nstar_inverse_quadrature(n, a, params.gamma, m, par)?;
                let alt = nstar_inverse_exact(n, a, params.gamma, m, other)?;
                let urn = nstar_urn_mc(
                    n,
                    a,
                    params.gamma,
                    m,
                    params.trials,
                    stream(seed, 1 + i as u64, j as u64),
                )?;
                let gap = nstar_gap_exact(&vec![a; n], &vec![a + params.delta; n], m, par)?;
                Ok((m, exact, quad, alt, urn, gap))
            })
            .collect::<Result<Vec<_>, errw_core::Error>>()?;
        let mut inverse_points = Vec::new();
        let mut gap_points = Vec::new();
        let mut worst_quad: f64 = 0.0;
        let mut worst_z: f64 = 0.0;
        for (m, exact, quad, alt, urn, gap) in &rows {
            table.push(row![
                a,
                alpha,
                2 * *m,
                *m,
                *exact,
                *quad,
                *alt,
                urn.value,
                urn.std_error,
                gap.gap,
                gap.edge_term,
                gap.vertex_term
            ]);
            worst_quad = worst_quad.max((exact - quad).abs());
            if urn.std_error > 0.0 {
                worst_z = worst_z.max(((urn.value - exact) / urn.std_error).abs());
            }
            inverse_points.push((*m as f64, *exact));
            gap_points.push((2.0 * *m as f64, gap.gap));
        }
        checks.push(Check::at_most(
            "nstar_inverse",
            format!("abs_exact_minus_quadrature_a{a}"),
            worst_quad,
            QUADRATURE_TOL,
        ));
        checks.push(Check::at_most(
            "nstar_inverse",
            format!("max_abs_urn_z_a{a}"),
            worst_z,
            SIGMAS,
        ));
        let m_ks = params.ks_excursions;
        let adj = Adjudication::run(n, a, m_ks, params.ks_samples, stream(seed, 1 + i as u64, 1 << 15))?;
        checks.push(adj.check("star_parametrization", par));
        fits.push(json!({
            "a": a,
            "alpha": alpha,
            "expected_exponent": -alpha.min(1.0),
            "inverse_fit": fit_json(positive_fit(&inverse_points)),
            "gap_fit": fit_json(positive_fit(&gap_points)),
            "adjudication": adj.to_json(),
        }));
    }
    let mut results = Map::new();
    results.insert("n".into(), json!(n));
    results.insert("gamma".into(), json!(params.gamma));
    results.insert("delta".into(), json!(params.delta));
    results.insert("parametrization".into(), json!(par_name(par)));
    results.insert("rates".into(), Value::Array(fits.clone()));
    let slopes: Vec<String> = fits
        .iter()
        .map(|f| {
            let s = f["gap_fit"]["slope"]
                .as_f64()
                .map_or("n/a".to_string(), |s| format!("{s:.3}"));
            format!("a={}: {s}", f["a"])
        })
        .collect();
    let summary = format!("nstar-rates: gap slopes [{}]; {}", slopes.join(", "), tally(&checks));
    Ok(Outcome {
        table,
        results,
        checks,
        summary,
    })
}

/// Common leaf weight if the graph is a star at its root with equal weights.
pub fn uniform_star_weight(l: &Loaded) -> Option<f64> {
    let a = l.p0.a();
    (l.graph.is_star_at_root() && a.iter().all(|&x| x == a[0])).then(|| a[0])
}

fn mi_growth(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    let g = &l.graph;
    let horizons = l.horizons()?;
    let mut table = Table::new(&[
        "method",
        "T",
        "mi_nats",
        "std_error_nats",
        "path_entropy_nats",
        "bound_nats",
    ]);
    let mut checks = Vec::new();
    let mut results = Map::new();
    if let Some(a) = uniform_star_weight(l) {
        let n = g.num_edges();
        let mut values = Vec::new();
        for &t in &horizons {
            let m = excursions(l, t)?;
            let mi = mi_nstar_exact(n, a, m)?;
            let bound = mi_upper_bound((t as u64).saturating_sub(1), n);
            table.push(row!["star_exact", t, mi, 0.0, "", bound]);
            checks.push(Check::new(
                "mi_bound",
                format!("bound_minus_mi_T{t}"),
                bound - mi,
                0.0,
                mi <= bound,
            ));
            values.push(mi);
        }
        let drop = values.windows(2).map(|w| w[0] - w[1]).fold(0.0, f64::max);
        checks.push(Check::at_most("mi_monotone", "max_decrease_in_T", drop, 1e-12));
        results.insert("method".into(), json!("star_exact"));
        results.insert("mi".into(), json!(values));
    } else {
        let set = environments(l, &l.p0, stream(seed, 1, 0))?;
        let mut values = Vec::new();
        for &t in &horizons {
            let mi = mutual_information_exact(g, &l.p0, t, &set)?;
            let bound = mi_upper_bound(t as u64, g.num_edges());
            let slack = SIGMAS * mi.std_error;
            table.push(row![
                "enumeration_mc",
                t,
                mi.value,
                mi.std_error,
                mi.path_entropy,
                bound
            ]);
            checks.push(Check::new(
                "mi_bound",
                format!("bound_minus_mi_T{t}"),
                bound - mi.value,
                -slack,
                mi.value <= bound + slack && mi.value >= -slack,
            ));
            values.push(json!(mi));
        }
        results.insert("method".into(), json!("enumeration_mc"));
        results.insert("mi".into(), Value::Array(values));
    }
    let summary = format!("mi-growth: {} horizons; {}", horizons.len(), tally(&checks));
    Ok(Outcome {
        table,
        results,
        checks,
        summary,
    })
}

/// Default tail exponent: a quarter of the smallest weight.
pub fn tail_exponent(l: &Loaded) -> f64 {
    l.params().s.unwrap_or(0.25 * l.p0.weights.min())
}

fn tail_check(l: &Loaded, seed: u64) -> Result<Outcome, CliError> {
    let (g, p0) = (&l.graph, &l.p0);
    let params = l.params();
    let s = tail_exponent(l);
    let set = environments(l, p0, stream(seed, 1, 0))?;
    let n = set.len() as f64;
    let mut table = Table::new(&["check", "edge", "threshold_or_T", "empirical", "std_error", "bound"]);
    let mut checks = Vec::new();
    let binomial = |count: usize| {
        let f = count as f64 / n;
        (f, (f * (1.0 - f) / n).sqrt())
    };
    let mut constants = Vec::new();
    for e in 0..g.num_edges() {
        let c = tail_constants(g, p0, e, s)?;
        let label = edge_label(g, e);
        for &eps in &params.eps {
            let (f, sigma) = binomial(set.samples.iter().filter(|x| x[e] < eps).count());
            let bound = c.c_es * eps.powf(s);
            table.push(row!["small_edge", label.as_str(), eps, f, sigma, bound]);
            checks.push(Check::new(
                "small_edge",
                format!("{label}_eps{eps}"),
                f,
                bound,
                f <= bound + SIGMAS * sigma,
            ));
        }
        constants.push(c);
    }
    let root_edges = g.incident(p0.root).to_vec();
    let c_root = constants[0].c_root;
    for &eps in &params.eps {
        let count = set
            .samples
            .iter()
            .filter(|x| 0.5 * root_edges.iter().map(|&h| x[h]).sum::<f64>() < eps)
            .count();
        let (f, sigma) = binomial(count);
        let bound = c_root * eps.powf(s);
        table.push(row!["root_mass", "", eps, f, sigma, bound]);
        checks.push(Check::new(
            "root_mass",
            format!("eps{eps}"),
            f,
            bound,
            f <= bound + SIGMAS * sigma,
        ));
    }

    let a_min = p0.weights.min();
    let horizons = match (&params.t_grid, params.t) {
        (None, None) => DEFAULT_TAIL_HORIZONS.to_vec(),
        _ => l.horizons()?,
    };
    let label = edge_label(g, l.edge);
    let schedule = ThresholdedSchedule::default_for(a_min)?;
    let c_thr = tail_constants(g, p0, l.edge, schedule.s)?;
    let refined = if a_min > refined_threshold() {
        let r = RefinedSchedule::default_for(a_min)?;
        Some((r, tail_constants(g, p0, l.edge, r.s)?))
    } else {
        None
    };
    for (j, &t) in horizons.iter().enumerate() {
        let mc = inverse_local_time_mc(g, p0, l.edge, params.gamma, t, params.trials, stream(seed, 2, j as u64))?;
        let slack = SIGMAS * mc.std_error;
        let eps = schedule.epsilons(t as f64);
        let bound = inverse_bound_eval(&c_thr, params.gamma, t as f64, eps, BoundVariant::Thresholded)?;
        table.push(row![
            "inverse_thresholded",
            label.as_str(),
            t,
            mc.value,
            mc.std_error,
            bound
        ]);
        checks.push(Check::new(
            "inverse_bound",
            format!("thresholded_T{t}"),
            mc.value,
            bound,
            mc.value <= bound + slack,
        ));
        if let Some((r, c)) = &refined {
            let bound = inverse_bound_eval(c, params.gamma, t as f64, r.epsilons(t as f64), BoundVariant::Refined)?;
            table.push(row![
                "inverse_refined",
                label.as_str(),
                t,
                mc.value,
                mc.std_error,
                bound
            ]);
            checks.push(Check::new(
                "inverse_bound",
                format!("refined_T{t}"),
                mc.value,
                bound,
                mc.value <= bound + slack,
            ));
        }
    }
    let mut results = Map::new();
    results.insert("s".into(), json!(s));
    results.insert(
        "constants".into(),
        serde_json::to_value(&constants).expect("serializable"),
    );
    results.insert(
        "thresholded_schedule".into(),
        serde_json::to_value(schedule).expect("serializable"),
    );
    results.insert(
        "thresholded_constants".into(),
        serde_json::to_value(&c_thr).expect("serializable"),
    );
    results.insert("refined".into(), json!(refined.is_some()));
    let summary = format!("tail-check: s = {s}, {} samples; {}", set.len(), tally(&checks));
    Ok(Outcome {
        table,
        results,
        checks,
        summary,
    })
}
