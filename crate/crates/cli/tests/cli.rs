use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn graph(name: &str) -> String {
    fixtures().join("graphs").join(name).display().to_string()
}

fn write_config(dir: &Path, name: &str, config: Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&config).unwrap()).unwrap();
    path
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_errw-infolab"))
        .args(args)
        .output()
        .unwrap()
}

fn run(config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    cli(&args)
}

fn describe(config: &Path) -> Output {
    cli(&["describe", "--config", config.to_str().unwrap()])
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

#[test]
fn validate_on_triangle_passes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "validate.json",
        json!({ "kind": "validate", "graph": graph("triangle.json"), "seed": 3, "params": { "paths": 300 } }),
    );
    let out = run(&config, dir.path(), &[]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert!(text(&out.stdout).starts_with("PASS validate:"));
    let csv = std::fs::read_to_string(dir.path().join("validate.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# schema=validate version=1 seed=3"));
    assert_eq!(lines.next(), Some("suite,check,value,tolerance,pass"));
    let suites: Vec<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
    for suite in [
        "path_probability_oracle",
        "gap_identity",
        "gradient_check",
        "star_parametrization",
    ] {
        assert!(suites.contains(&suite), "{suite} missing from {suites:?}");
    }
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("validate.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], json!(true));
    assert_eq!(report["results"]["star_parametrization"]["winner"], json!("half"));
}

#[test]
fn gap_decay_writes_grid_and_slope() {
    let dir = tempfile::tempdir().unwrap();
    let grid: Vec<usize> = (3..=12).map(|k| 1 << k).collect();
    let config = write_config(
        dir.path(),
        "gap.json",
        json!({
            "kind": "gap-decay",
            "graph": graph("triangle.json"),
            "seed": 5,
            "params": { "a1": 2.0, "t_grid": grid, "trials": 400 }
        }),
    );
    let out = run(&config, dir.path(), &[]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("gap-decay.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# schema=gap-decay version=1 seed=5");
    assert!(lines[1].starts_with("T,gap_mc_nats,std_error_nats,"));
    assert_eq!(lines.len(), 2 + grid.len());
    let ts: Vec<usize> = lines[2..]
        .iter()
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ts, grid);
    let report: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("gap-decay.json")).unwrap()).unwrap();
    let slope = report["results"]["fit"]["slope"].as_f64().unwrap();
    assert!(slope < 0.0 && slope > -2.0, "slope {slope}");
}

#[test]
fn malformed_graph_fails_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        "{\n  \"vertices\": [\"a\", \"b\"],\n  \"edges\": [{\"u\": \"a\" \"v\": \"b\"}],\n  \"root\": \"a\"\n}\n",
    )
    .unwrap();
    let config = write_config(dir.path(), "c.json", json!({ "kind": "validate", "graph": "bad.json" }));
    let out = run(&config, dir.path(), &[]);
    assert!(!out.status.success());
    let err = text(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("line 3"), "{err}");
    assert!(!dir.path().join("validate.csv").exists());
}

#[test]
fn disconnected_graph_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("split.json");
    let spec = json!({ "vertices": ["a", "b", "c", "d"], "edges": [{ "u": "a", "v": "b" }, { "u": "c", "v": "d" }], "root": "a" });
    std::fs::write(&bad, spec.to_string()).unwrap();
    let config = write_config(
        dir.path(),
        "c.json",
        json!({ "kind": "validate", "graph": "split.json" }),
    );
    let out = run(&config, dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("disconnected"));
}

#[test]
fn invalid_configs_are_rejected_with_context() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (
            json!({ "kind": "gap-decay", "graph": graph("triangle.json"), "params": { "a1": 2.0, "t_grid": [8, 8, 16] } }),
            "strictly increasing",
        ),
        (
            json!({ "kind": "gap-decay", "graph": graph("triangle.json"), "params": { "a1": 2.0, "t": 8, "trials": 0 } }),
            "trials",
        ),
        (
            json!({ "kind": "gap-decay", "graph": graph("triangle.json"), "params": { "t": 8 } }),
            "needs params.a1",
        ),
        (
            json!({ "kind": "env-kl", "graph": graph("triangle.json"), "params": { "a1": [1.0, 2.0] } }),
            "expected 3 weights",
        ),
        (
            json!({ "kind": "nstar-rates", "graph": graph("triangle.json"), "params": { "t": 8 } }),
            "star",
        ),
        (json!({ "kind": "warp", "graph": graph("triangle.json") }), "line"),
    ];
    for (i, (config, needle)) in cases.into_iter().enumerate() {
        let path = write_config(dir.path(), &format!("c{i}.json"), config);
        let out = run(&path, dir.path(), &[]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        let err = text(&out.stderr);
        assert!(
            err.contains(&format!("c{i}.json")) && err.contains(needle),
            "case {i}: {err}"
        );
    }
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        json!({ "kind": "gap-decay", "graph": graph("cycle4.json"), "seed": 9, "params": { "a1": 2.5, "t_grid": [4, 16, 64], "trials": 300 } }),
        json!({ "kind": "nstar-rates", "graph": graph("star3.json"), "seed": 9, "params": { "a_values": [1.0], "t_grid": [16, 64], "trials": 300, "ks_samples": 500, "ks_excursions": 200 } }),
        json!({ "kind": "tail-check", "graph": graph("triangle.json"), "seed": 9, "params": { "t": 50, "trials": 300, "mcmc": { "n": 2000, "burn_in": 1000 } } }),
    ];
    for (i, config) in configs.into_iter().enumerate() {
        let kind = config["kind"].as_str().unwrap().to_string();
        let path = write_config(dir.path(), &format!("r{i}.json"), config);
        let (a, b) = (dir.path().join(format!("a{i}")), dir.path().join(format!("b{i}")));
        assert!(run(&path, &a, &["--jobs", "1"]).status.success());
        assert!(run(&path, &b, &["--jobs", "4"]).status.success());
        for ext in ["csv", "json"] {
            let x = std::fs::read(a.join(format!("{kind}.{ext}"))).unwrap();
            let y = std::fs::read(b.join(format!("{kind}.{ext}"))).unwrap();
            assert!(x == y, "{kind}.{ext} differs between runs");
        }
    }
}

#[test]
fn seed_override_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "mi.json",
        json!({ "kind": "mi-growth", "graph": graph("star3.json"), "seed": 1, "params": { "t_grid": [2, 4, 8] } }),
    );
    assert!(run(&config, dir.path(), &["--seed", "77"]).status.success());
    let csv = std::fs::read_to_string(dir.path().join("mi-growth.csv")).unwrap();
    assert!(csv.starts_with("# schema=mi-growth version=1 seed=77\n"));
}

#[test]
fn describe_reports_walk_counts_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write_config(
        dir.path(),
        "tri.json",
        json!({ "kind": "traj-kl", "graph": graph("triangle.json"), "params": { "a1": 2.0, "t": 12 } }),
    );
    let out = describe(&ok);
    assert!(out.status.success());
    let plan = text(&out.stdout);
    assert!(plan.contains("T=12: 4096 walks (budget 10000000): proceed"), "{plan}");
    assert!(plan.ends_with("plan: proceed\n"));
    assert_eq!(describe(&ok).stdout, out.stdout);

    let big = write_config(
        dir.path(),
        "k4.json",
        json!({ "kind": "traj-kl", "graph": graph("k4.json"), "params": { "a1": 2.0, "t": 30 } }),
    );
    let out = describe(&big);
    assert!(!out.status.success());
    let plan = text(&out.stdout);
    assert!(
        plan.contains("budget exceeded, refuse") && plan.ends_with("plan: refuse\n"),
        "{plan}"
    );
    assert_eq!(describe(&big).stdout, out.stdout);
    assert!(!run(&big, dir.path(), &[]).status.success());
    assert!(!dir.path().join("traj-kl.csv").exists());
}

#[test]
fn shipped_configs_describe_cleanly() {
    let dir = fixtures().join("configs");
    let mut names: Vec<PathBuf> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    names.sort();
    assert!(!names.is_empty());
    for path in names {
        let out = describe(&path);
        let refuses = path.file_name().unwrap().to_str().unwrap().contains("k4_t30");
        assert_eq!(
            out.status.success(),
            !refuses,
            "{}: {}",
            path.display(),
            text(&out.stderr)
        );
    }
}
