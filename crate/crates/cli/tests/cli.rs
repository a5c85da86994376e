use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hypis(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypis"))
        .current_dir(dir)
        .env_remove("HYPIS_THREADS")
        .env_remove("TOOL_THREADS")
        .args(args)
        .output()
        .unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

const MODEL: [&str; 10] = ["--n", "9", "--k", "4", "--r", "2", "--p", "1.0", "--seed", "5"];

#[test]
fn generate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let b = ok(&hypis(dir.path(), &[&["generate"][..], &MODEL].concat()));
    let c = ok(&hypis(dir.path(), &[&["generate"][..], &MODEL].concat()));
    assert_eq!(b, c);
    let json: serde_json::Value = serde_json::from_str(&b).unwrap();
    assert_eq!(json["planted_set"].as_array().unwrap().len(), 4);
}

#[test]
fn solve_round_check_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&hypis(d, &[&["generate"][..], &MODEL, &["--out", "inst.json"]].concat()));
    let summary = ok(&hypis(
        d,
        &["solve", "--instance", "inst.json", "--out", "sol.bin", "--progress", "prog.csv", "--sdpa", "p.sdpa"],
    ));
    let summary: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(summary["converged"], true);
    assert!(summary["objective"].as_f64().unwrap() >= 6.0 * (1.0 - 1e-4));
    assert_eq!(&fs::read(d.join("sol.bin")).unwrap()[..8], b"HYPISOL1");
    let prog = fs::read_to_string(d.join("prog.csv")).unwrap();
    assert!(prog.starts_with("iter,objective,max_violation,min_eig\n"));
    assert!(prog.lines().count() > 1);
    assert!(d.join("p.sdpa").exists());

    let report = ok(&hypis(d, &["round", "--instance", "inst.json", "--solution", "sol.bin"]));
    let report: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert_eq!(report["planted_found"], true);
    assert!(report["best_size"].as_u64().unwrap() >= 4);

    let check = ok(&hypis(
        d,
        &["check", "--instance", "inst.json", "--solution", "sol.bin", "--grid-n-max", "8", "--grid-out", "grid.csv"],
    ));
    let check: serde_json::Value = serde_json::from_str(&check).unwrap();
    assert_eq!(check["pass"], true);
    assert_eq!(check["feasibility"]["pass"], true);
    let grid = fs::read_to_string(d.join("grid.csv")).unwrap();
    assert!(grid.lines().count() > 1);
}

#[test]
fn check_fails_on_infeasible_solution() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(&hypis(d, &[&["generate"][..], &MODEL, &["--out", "inst.json"]].concat()));
    // A solution of another instance breaks this one's edge pins.
    let other = ["--n", "9", "--k", "4", "--r", "2", "--p", "1.0", "--seed", "6"];
    ok(&hypis(d, &[&["solve"][..], &other, &["--out", "sol.bin"]].concat()));
    let out = hypis(d, &["check", "--instance", "inst.json", "--solution", "sol.bin"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
    assert_eq!(report["feasibility"]["pass"], false);
}

#[test]
fn errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypis(dir.path(), &["generate", "--n", "6", "--k", "4", "--r", "2", "--p", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("k = 4"));
    let out = hypis(dir.path(), &["round", "--instance", "missing.json", "--solution", "missing.bin"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_config_file_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(d.join("solver.toml"), "[solver]\nmax_iter = 3\n").unwrap();
    let args = [&["solve"][..], &MODEL, &["--cold", "--config", "solver.toml", "--out", "a.bin"]].concat();
    let out = hypis(d, &args);
    assert_eq!(out.status.code(), Some(1));
    let s: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s["iterations"], 3);
    assert_eq!(s["converged"], false);

    // The flag wins over the file.
    let args = [&args[..], &["--max-iter", "20000"]].concat();
    let s: serde_json::Value = serde_json::from_str(&ok(&hypis(d, &args))).unwrap();
    assert_eq!(s["converged"], true);
}

#[test]
fn experiment_flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("sweep.toml"),
        r#"
trials = 5
mode = "large_is"
output_dir = "from_file"

[grid]
n = [8]
k = [3]
r = [2]
p = [0.5]
"#,
    )
    .unwrap();
    let run = |out: &str| {
        ok(&hypis(
            d,
            &["experiment", "--config", "sweep.toml", "--p", "0.6,1.0", "--trials", "2", "--seed", "4", "--mode", "exact", "--out", out],
        ))
    };
    run("a");
    run("b");
    assert!(!d.join("from_file").exists());

    let read = |dir: &str| {
        let mut rd = csv::Reader::from_path(d.join(dir).join("results.csv")).unwrap();
        let header = rd.headers().unwrap().clone();
        let wall = header.iter().position(|h| h == "wall_ms").unwrap();
        let rows: Vec<Vec<String>> = rd
            .records()
            .map(|r| {
                let r = r.unwrap();
                r.iter().enumerate().filter(|&(i, _)| i != wall).map(|(_, f)| f.to_string()).collect()
            })
            .collect();
        (header, rows)
    };
    let (header, a) = read("a");
    let (_, b) = read("b");
    assert_eq!(a, b);
    assert_eq!(a.len(), 4);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    let seeds: Vec<&str> = a.iter().map(|r| r[col("seed")].as_str()).collect();
    assert_eq!(seeds, ["4", "5", "4", "5"]);
    assert!(a.iter().all(|r| r[col("mode")] == "exact_recovery"));
    let ps: Vec<&str> = a.iter().map(|r| r[col("p")].as_str()).collect();
    assert_eq!(ps, ["0.6", "0.6", "1.0", "1.0"]);
    assert!(d.join("a/summary.json").exists());
}

#[test]
fn bad_thread_env_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hypis"))
        .current_dir(dir.path())
        .env_remove("HYPIS_THREADS")
        .env("TOOL_THREADS", "many")
        .args(["experiment", "--n", "6", "--k", "2", "--r", "2", "--p", "1.0", "--trials", "1", "--mode", "large", "--out", "o"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("TOOL_THREADS"));
}
