//! `errw-infolab`: runs a JSON-configured experiment and writes
//! `<kind>.csv` and `<kind>.json`, or prints its plan without running it.
//!
//! Exit status: 0 when every check passes, 1 when some check fails, 2 on
//! configuration, graph, budget or I/O errors and on refused plans.

mod artifacts;
mod config;
mod error;
mod experiments;
mod plan;

use clap::{Parser, Subcommand};
use config::Loaded;
use error::CliError;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "errw-infolab",
    version,
    about = "Edge-reinforced random walk information experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment and write its artifacts.
    Run(Args),
    /// Print the operations, budgets and path counts without running.
    Describe(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for Monte Carlo trials.
    #[arg(long)]
    jobs: Option<usize>,
}

fn output_dir(args: &Args, l: &Loaded) -> PathBuf {
    if let Some(out) = &args.out {
        return out.clone();
    }
    match &l.config.output {
        Some(out) => l.config_path.parent().unwrap_or_else(|| Path::new(".")).join(out),
        None => PathBuf::from("results"),
    }
}

fn graph_json(l: &Loaded) -> serde_json::Value {
    let g = &l.graph;
    let edges: Vec<_> = (0..g.num_edges())
        .map(|e| {
            let (u, v) = g.edge(e);
            json!({ "u": g.label(u), "v": g.label(v), "a0": l.p0.a()[e], "a1": l.p1.as_ref().map(|p| p.a()[e]) })
        })
        .collect();
    json!({
        "file": l.config.graph,
        "vertices": g.labels(),
        "root": g.label(l.p0.root),
        "edges": edges,
    })
}

fn execute(cli: Cli) -> Result<ExitCode, CliError> {
    let (args, describe) = match cli.command {
        Command::Run(a) => (a, false),
        Command::Describe(a) => (a, true),
    };
    if let Some(jobs) = args.jobs {
        if jobs == 0 {
            return Err(CliError::Setup("--jobs must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Setup(e.to_string()))?;
    }
    let l = Loaded::from_path(&args.config)?;
    let seed = args.seed.unwrap_or(l.config.seed);
    let out_dir = output_dir(&args, &l);
    let (plan, proceed) = plan::describe(&l, seed, &out_dir)?;
    if describe {
        print!("{plan}");
        return Ok(if proceed { ExitCode::SUCCESS } else { ExitCode::from(2) });
    }
    if !proceed {
        eprint!("{plan}");
        return Err(CliError::Setup("plan exceeds a budget; see describe".into()));
    }
    let outcome = experiments::run(&l, seed)?;
    let params = serde_json::to_value(l.params()).expect("params serialize");
    let (csv, _) = artifacts::emit(&out_dir, l.config.kind, seed, graph_json(&l), params, &outcome)?;
    let verdict = if outcome.passed() { "PASS" } else { "FAIL" };
    println!("{verdict} {} -> {}", outcome.summary, csv.display());
    for c in outcome.checks.iter().filter(|c| !c.pass) {
        eprintln!(
            "failed {}/{}: value {} vs tolerance {}",
            c.suite, c.name, c.value, c.tolerance
        );
    }
    Ok(if outcome.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
