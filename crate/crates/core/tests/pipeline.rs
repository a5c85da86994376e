use std::fs;

use hypis::experiment::{instance_file_name, run_experiment, ExperimentConfig, Mode};
use hypis::hypergraph::{generate_planted, InsideStrategy, ModelParams, PlantedInstance};
use hypis::oracle::{max_independent_set, OracleLimits};
use hypis::{Error, VertexSet};

fn config(dir: &std::path::Path, extra: &str) -> ExperimentConfig {
    let text = format!(
        r#"
        trials = 5
        mode = "large_is"
        output_dir = {:?}
        {extra}
        [grid]
        n = [8]
        k = [3]
        r = [2]
        p = [0.4, 0.7, 1.0]
        "#,
        dir.display().to_string()
    );
    ExperimentConfig::from_toml(&text).unwrap()
}

#[test]
fn rows_cover_the_grid_and_revalidate() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&config(dir.path(), "")).unwrap();
    assert_eq!(out.rows.len(), 15);
    assert_eq!(out.summary.rows, 15);
    assert_eq!(out.summary.points.len(), 3);
    assert_eq!(out.summary.trends.len(), 1);

    let csv = fs::read_to_string(&out.csv_path).unwrap();
    let mut rd = csv::Reader::from_reader(csv.as_bytes());
    let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(&header[..4], ["point", "seed", "n", "k"]);
    assert_eq!(header.last().map(String::as_str), Some("wall_ms"));
    assert_eq!(rd.records().count(), 15);

    for row in &out.rows {
        let path = dir.path().join("instances").join(instance_file_name(row.point, row.seed));
        let inst = PlantedInstance::from_json(&fs::read_to_string(path).unwrap()).unwrap();
        let best = VertexSet::from_vertices(row.best_set.split_whitespace().map(|v| v.parse().unwrap()));
        assert_eq!(best.len(), row.best_size);
        assert!(inst.hypergraph().is_independent(best).unwrap());
    }
}

#[test]
fn unwritable_output_fails_before_solving() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, b"").unwrap();
    let err = run_experiment(&config(&blocker.join("out"), "")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }), "{err}");
}

#[test]
fn auto_k_is_clamped() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(dir.path(), "");
    cfg.grid.k = vec!["auto".parse().unwrap()];
    cfg.mode = Mode::ExactRecovery;
    assert!(cfg.points().unwrap().iter().all(|p| p.k == 4));
}

#[test]
fn oracle_sees_the_planted_witness() {
    let params = ModelParams::new(14, 6, 3, 0.9).with_inside(InsideStrategy::Uniform(0.3));
    for seed in 0..3 {
        let inst = generate_planted(params, seed).unwrap();
        let s = max_independent_set(inst.hypergraph(), &OracleLimits::for_uniformity(3)).unwrap();
        assert!(s.len() >= 6);
        assert!(inst.hypergraph().is_independent(s).unwrap());
    }
}
