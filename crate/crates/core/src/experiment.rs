//! Generate → solve → round → verify pipelines over parameter grids.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{boundary_mass_identity, check_total_bound, count_bounds, grothendieck_rhs};
use crate::error::{Error, Result};
use crate::hypergraph::{generate_planted, AdversaryStrategy, InsideStrategy, ModelParams, PlantedInstance};
use crate::rounding::{k_threshold_exact, k_threshold_large, round, RoundingMode, RoundingOptions};
use crate::sdp::{build_problem, planted_reference_solution, verify_feasibility, SdpSolution};
use crate::solver::{solve, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    ExactRecovery,
    LargeIs,
    LemmaChecks,
}

impl Mode {
    pub fn rounding(self) -> RoundingMode {
        match self {
            Mode::LargeIs => RoundingMode::LargeIs,
            Mode::ExactRecovery | Mode::LemmaChecks => RoundingMode::ExactRecovery,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::ExactRecovery => "exact_recovery",
            Mode::LargeIs => "large_is",
            Mode::LemmaChecks => "lemma_checks",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact_recovery" | "exact" => Ok(Mode::ExactRecovery),
            "large_is" | "large" => Ok(Mode::LargeIs),
            "lemma_checks" | "lemmas" => Ok(Mode::LemmaChecks),
            _ => Err(Error::param(format!("unknown mode {s:?}"))),
        }
    }
}

/// A planted size or `"auto"` (threshold formula clamped to `n/2`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum KSpec {
    Fixed(usize),
    Auto(AutoTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoTag {
    Auto,
}

impl KSpec {
    pub const AUTO: KSpec = KSpec::Auto(AutoTag::Auto);
}

impl std::str::FromStr for KSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            Ok(KSpec::AUTO)
        } else {
            s.parse()
                .map(KSpec::Fixed)
                .map_err(|_| Error::param(format!("bad k {s:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: Vec<usize>,
    pub k: Vec<KSpec>,
    pub r: Vec<usize>,
    pub p: Vec<f64>,
    #[serde(default = "default_eps")]
    pub eps: Vec<f64>,
}

fn default_eps() -> Vec<f64> {
    vec![0.5]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Strategies {
    #[serde(default = "none_inside")]
    pub inside: InsideStrategy,
    #[serde(default = "none_adversary")]
    pub adversary: AdversaryStrategy,
}

fn none_inside() -> InsideStrategy {
    InsideStrategy::None
}

fn none_adversary() -> AdversaryStrategy {
    AdversaryStrategy::None
}

impl Default for Strategies {
    fn default() -> Self {
        Strategies {
            inside: InsideStrategy::None,
            adversary: AdversaryStrategy::None,
        }
    }
}

/// Experiment description, loadable from TOML.
///
/// ```toml
/// trials = 5
/// first_seed = 0
/// mode = "exact_recovery"
/// output_dir = "out"
///
/// [grid]
/// n = [16]
/// k = [4, 6, "auto"]
/// r = [2]
/// p = [0.5, 0.9]
///
/// [strategies]
/// adversary = "random_monotone(0.3)"
///
/// [solver]
/// tol_feas = 1e-5
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub grid: Grid,
    pub trials: usize,
    #[serde(default)]
    pub first_seed: u64,
    #[serde(default)]
    pub strategies: Strategies,
    #[serde(default)]
    pub solver: SolverConfig,
    pub mode: Mode,
    pub output_dir: PathBuf,
    /// Worker threads; `None` uses rayon's default.
    #[serde(default)]
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.n.is_empty() || g.k.is_empty() || g.r.is_empty() || g.p.is_empty() || g.eps.is_empty() {
            return Err(Error::param("every grid axis needs at least one value"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.threads == Some(0) {
            return Err(Error::param("threads must be at least 1"));
        }
        self.solver.validate()?;
        for pt in self.points()? {
            pt.params().validate()?;
        }
        Ok(())
    }

    /// Grid points in `n, k, r, p, ε` order with `auto` resolved.
    pub fn points(&self) -> Result<Vec<Point>> {
        let mut out = Vec::new();
        for &n in &self.grid.n {
            for &k in &self.grid.k {
                for &r in &self.grid.r {
                    for &p in &self.grid.p {
                        for &eps in &self.grid.eps {
                            let k = resolve_k(k, n, r, p, eps, self.mode)?;
                            out.push(Point {
                                index: out.len(),
                                n,
                                k,
                                r,
                                p,
                                eps,
                                inside: self.strategies.inside,
                                adversary: self.strategies.adversary,
                                mode: self.mode,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Threshold formula for `k`, clamped to `[1, n/2]`.
pub fn resolve_k(spec: KSpec, n: usize, r: usize, p: f64, eps: f64, mode: Mode) -> Result<usize> {
    match spec {
        KSpec::Fixed(k) => Ok(k),
        KSpec::Auto(_) => {
            let raw = match mode {
                Mode::LargeIs => k_threshold_large(n, r, p, eps)?,
                Mode::ExactRecovery | Mode::LemmaChecks => k_threshold_exact(n, r, p)?,
            };
            let cap = n / 2;
            if raw > cap as f64 {
                log::warn!(
                    "threshold k = {raw:.1} exceeds n/2 = {cap} for (n={n}, r={r}, p={p}); clamping"
                );
            }
            Ok((raw.ceil() as usize).clamp(1, cap.max(1)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub index: usize,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub p: f64,
    pub eps: f64,
    pub inside: InsideStrategy,
    pub adversary: AdversaryStrategy,
    pub mode: Mode,
}

impl Point {
    pub fn params(&self) -> ModelParams {
        ModelParams::new(self.n, self.k, self.r, self.p)
            .with_inside(self.inside)
            .with_adversary(self.adversary)
    }
}

/// One CSV row. Column order is the field order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub point: usize,
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub p: f64,
    pub eps: f64,
    pub inside: String,
    pub adversary: String,
    pub mode: String,
    pub num_edges: usize,
    pub sdp_objective: f64,
    pub max_violation: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Empty unless the solver gave up.
    pub solver_error: String,
    pub best_size: usize,
    /// The planted set appears in Algorithm 1's list.
    pub recovered_exactly: bool,
    pub num_candidates: usize,
    /// Space-separated vertices of the largest candidate.
    pub best_set: String,
    pub boundary_mass: f64,
    pub boundary_mass_gap: Option<f64>,
    pub total_bound_pass: Option<bool>,
    pub count_bounds_pass: Option<bool>,
    pub grothendieck_rhs: Option<f64>,
    pub wall_ms: f64,
}

/// Columns that carry timing and are excluded from determinism comparisons.
pub const TIMING_COLUMNS: &[&str] = &["wall_ms"];

/// Output of one pipeline run.
#[derive(Debug, Clone)]
pub struct SingleRun {
    pub row: ResultRow,
    pub instance: PlantedInstance,
    pub solution: SdpSolution,
}

pub fn run_single(point: &Point, seed: u64, solver: &SolverConfig) -> Result<SingleRun> {
    let start = Instant::now();
    let inst = generate_planted(point.params(), seed)?;
    let h = inst.hypergraph();
    let prob = build_problem(h)?;
    let warm = planted_reference_solution(&inst)?;
    let (sol, solver_error) = match solve(&prob, solver, Some(&warm)) {
        Ok(s) => (s, String::new()),
        Err(Error::NonConvergence { partial, .. }) => (*partial, "nonconvergence".to_string()),
        Err(e) => return Err(e),
    };
    let report = verify_feasibility(&prob, &sol, solver.tol_feas)?;
    let opts = RoundingOptions {
        planted: Some(inst.planted_set()),
        ..RoundingOptions::default()
    };
    let rec = round(h, &sol, point.mode.rounding(), &opts)?;
    let total = check_total_bound(&sol, &inst, solver.tol_feas, solver_error.is_empty())?;

    let lemmas = point.mode == Mode::LemmaChecks;
    let gap = if lemmas && point.p > 0.0 {
        Some(boundary_mass_identity(&sol, &inst)?.gap)
    } else {
        None
    };
    let row = ResultRow {
        point: point.index,
        seed,
        n: point.n,
        k: point.k,
        r: point.r,
        p: point.p,
        eps: point.eps,
        inside: point.inside.to_string(),
        adversary: point.adversary.to_string(),
        mode: point.mode.as_str().to_string(),
        num_edges: h.num_edges(),
        sdp_objective: sol.objective(),
        max_violation: report.max_violation,
        iterations: sol.meta.iterations.unwrap_or(0),
        converged: sol.meta.converged,
        solver_error,
        best_size: rec.best_size,
        recovered_exactly: rec.planted_found == Some(true),
        num_candidates: rec.candidates.len(),
        best_set: rec
            .best
            .map(|b| b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .unwrap_or_default(),
        boundary_mass: total.mass_boundary,
        boundary_mass_gap: gap,
        total_bound_pass: if lemmas { total.pass } else { None },
        count_bounds_pass: if lemmas {
            Some(count_bounds(point.n, point.k, point.r)?.all_hold())
        } else {
            None
        },
        grothendieck_rhs: if lemmas && point.p > 0.0 {
            Some(grothendieck_rhs(point.n, point.k, point.r, point.p)?)
        } else {
            None
        },
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(SingleRun {
        row,
        instance: inst,
        solution: sol,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub point: Point,
    pub trials: usize,
    pub recovered: usize,
    pub recovery_rate: f64,
    pub mean_best_size: f64,
    pub mean_objective: f64,
    pub nonconverged: usize,
}

/// Recovery rate as a function of `p` with everything else fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub eps: f64,
    /// `(p, rate)` ascending in `p`.
    pub rates: Vec<(f64, f64)>,
    pub non_decreasing_in_p: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mode: Mode,
    pub rows: usize,
    pub points: Vec<PointSummary>,
    pub trends: Vec<Trend>,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

pub fn instance_file_name(point: usize, seed: u64) -> String {
    format!("point{point:03}_seed{seed}.json")
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn rows_to_csv(rows: &[ResultRow]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Format(e.to_string()))
}

/// Runs every `(point, seed)` pair and writes `results.csv`, `summary.json`
/// and one instance JSON per run under `output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let dir = &cfg.output_dir;
    let inst_dir = dir.join("instances");
    fs::create_dir_all(&inst_dir).map_err(|e| Error::io(&inst_dir, e))?;
    let csv_path = dir.join("results.csv");
    let summary_path = dir.join("summary.json");
    // Fail on an unwritable directory before any solve.
    write(&csv_path, b"")?;

    let points = cfg.points()?;
    let tasks: Vec<(Point, u64)> = points
        .iter()
        .flat_map(|pt| (0..cfg.trials as u64).map(move |t| (*pt, cfg.first_seed + t)))
        .collect();
    let work = || -> Result<Vec<SingleRun>> {
        tasks
            .par_iter()
            .map(|(pt, seed)| run_single(pt, *seed, &cfg.solver))
            .collect()
    };
    let mut runs = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::param(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    runs.sort_by_key(|r| (r.row.point, r.row.seed));

    for run in &runs {
        let path = inst_dir.join(instance_file_name(run.row.point, run.row.seed));
        write(&path, run.instance.to_json().as_bytes())?;
    }
    let rows: Vec<ResultRow> = runs.into_iter().map(|r| r.row).collect();
    write(&csv_path, &rows_to_csv(&rows)?)?;
    let summary = summarize(cfg.mode, &points, &rows);
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    write(&summary_path, json.as_bytes())?;
    Ok(ExperimentOutput {
        rows,
        summary,
        csv_path,
        summary_path,
    })
}

pub fn summarize(mode: Mode, points: &[Point], rows: &[ResultRow]) -> Summary {
    let per_point: Vec<PointSummary> = points
        .iter()
        .map(|pt| {
            let mine: Vec<&ResultRow> = rows.iter().filter(|r| r.point == pt.index).collect();
            let t = mine.len().max(1) as f64;
            let recovered = mine.iter().filter(|r| r.recovered_exactly).count();
            PointSummary {
                point: *pt,
                trials: mine.len(),
                recovered,
                recovery_rate: recovered as f64 / t,
                mean_best_size: mine.iter().map(|r| r.best_size as f64).sum::<f64>() / t,
                mean_objective: mine.iter().map(|r| r.sdp_objective).sum::<f64>() / t,
                nonconverged: mine.iter().filter(|r| !r.solver_error.is_empty()).count(),
            }
        })
        .collect();

    let mut groups: BTreeMap<(usize, usize, usize, u64), Vec<(f64, f64)>> = BTreeMap::new();
    for s in &per_point {
        let pt = &s.point;
        groups
            .entry((pt.n, pt.k, pt.r, pt.eps.to_bits()))
            .or_default()
            .push((pt.p, s.recovery_rate));
    }
    let trends = groups
        .into_iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|((n, k, r, eps), mut rates)| {
            rates.sort_by(|a, b| a.0.total_cmp(&b.0));
            Trend {
                n,
                k,
                r,
                eps: f64::from_bits(eps),
                non_decreasing_in_p: rates.windows(2).all(|w| w[1].1 >= w[0].1),
                rates,
            }
        })
        .collect();
    Summary {
        mode,
        rows: rows.len(),
        points: per_point,
        trends,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parses() {
        let cfg = ExperimentConfig::from_toml(
            r#"
            trials = 2
            mode = "large_is"
            output_dir = "x"
            [grid]
            n = [10]
            k = [3, "auto"]
            r = [2]
            p = [0.5, 1.0]
            [strategies]
            adversary = "degree_boost(1)"
            [solver]
            max_iter = 50
            "#,
        )
        .unwrap();
        assert_eq!(cfg.grid.k, vec![KSpec::Fixed(3), KSpec::AUTO]);
        assert_eq!(cfg.solver.max_iter, 50);
        assert_eq!(cfg.solver.tol_feas, 1e-5);
        let pts = cfg.points().unwrap();
        assert_eq!(pts.len(), 4);
        // the formula is astronomically above n/2 at this scale
        assert_eq!(pts[2].k, 5);
        assert!(ExperimentConfig::from_toml("trials = 1").is_err());
    }

    #[test]
    fn exact_recovery_row() {
        let pt = Point {
            index: 0,
            n: 10,
            k: 5,
            r: 2,
            p: 1.0,
            eps: 0.5,
            inside: InsideStrategy::None,
            adversary: AdversaryStrategy::None,
            mode: Mode::ExactRecovery,
        };
        let a = run_single(&pt, 4, &SolverConfig::default()).unwrap();
        assert!(a.row.recovered_exactly);
        let b = run_single(&pt, 4, &SolverConfig::default()).unwrap();
        let strip = |r: &ResultRow| ResultRow { wall_ms: 0.0, ..r.clone() };
        assert_eq!(strip(&a.row), strip(&b.row));
    }

    #[test]
    fn lemma_rows_carry_checks() {
        let pt = Point {
            index: 0,
            n: 8,
            k: 3,
            r: 2,
            p: 0.8,
            eps: 0.5,
            inside: InsideStrategy::None,
            adversary: AdversaryStrategy::None,
            mode: Mode::LemmaChecks,
        };
        let run = run_single(&pt, 1, &SolverConfig::default()).unwrap();
        assert!(run.row.boundary_mass_gap.is_some());
        assert!(run.row.total_bound_pass.is_some());
        assert_eq!(run.row.count_bounds_pass, Some(true));
    }
}
