use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use toml::{Table, Value};

use hypis::analysis::{boundary_mass_identity, check_total_bound, count_bounds, count_bounds_grid, grothendieck_rhs, write_grid_csv};
use hypis::container::{read_solution, write_solution};
use hypis::experiment::{run_experiment, ExperimentConfig, Mode};
use hypis::hypergraph::{generate_planted, AdversaryStrategy, InsideStrategy, ModelParams, PlantedInstance};
use hypis::rounding::{round, RoundingMode, RoundingOptions};
use hypis::sdp::{build_problem, export_sdpa, planted_reference_solution, verify_feasibility, SdpSolution};
use hypis::solver::{solve, SolverConfig};
use hypis::{Error, Result};

#[derive(Parser)]
#[command(name = "hypis", version, about = "Planted independent sets in semi-random hypergraphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a planted instance and write it as JSON.
    Generate(GenerateArgs),
    /// Solve the relaxation for an instance.
    Solve(SolveArgs),
    /// Run Algorithm 1 on a solved instance.
    Round(RoundArgs),
    /// Feasibility report and lemma checks for a solution.
    Check(CheckArgs),
    /// Run a parameter grid and write CSV + summary.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "none")]
    inside: String,
    #[arg(long, default_value = "none")]
    adversary: String,
}

impl ModelArgs {
    fn params(&self) -> Result<ModelParams> {
        let need = |name: &str| Error::param(format!("--{name} is required"));
        let params = ModelParams::new(
            self.n.ok_or_else(|| need("n"))?,
            self.k.ok_or_else(|| need("k"))?,
            self.r.ok_or_else(|| need("r"))?,
            self.p.ok_or_else(|| need("p"))?,
        )
        .with_inside(self.inside.parse::<InsideStrategy>()?)
        .with_adversary(self.adversary.parse::<AdversaryStrategy>()?);
        params.validate()?;
        Ok(params)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolverArgs {
    /// TOML file with solver settings, either top level or under `[solver]`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    tol_feas: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

impl SolverArgs {
    fn load(&self) -> Result<SolverConfig> {
        let mut table = match &self.config {
            Some(path) => {
                let mut t = parse_toml(&read_text(path)?)?;
                match t.remove("solver") {
                    Some(Value::Table(s)) => s,
                    Some(_) => return Err(Error::Format("[solver] must be a table".into())),
                    None => t,
                }
            }
            None => Table::new(),
        };
        if let Some(t) = self.tol_feas {
            table.insert("tol_feas".into(), Value::Float(t));
        }
        if let Some(m) = self.max_iter {
            table.insert("max_iter".into(), Value::Integer(m as i64));
        }
        let cfg: SolverConfig = table.try_into().map_err(|e| Error::Format(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON; otherwise the model flags generate one.
    #[arg(long, conflicts_with_all = ["n", "k", "r", "p"])]
    instance: Option<PathBuf>,
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    solver: SolverArgs,
    /// Start from the solver's own initial point instead of the planted reference.
    #[arg(long)]
    cold: bool,
    /// Solution container.
    #[arg(long)]
    out: PathBuf,
    /// Progress CSV (iteration, objective, max violation, min eigenvalue).
    #[arg(long)]
    progress: Option<PathBuf>,
    /// Also export the problem in SDPA sparse format.
    #[arg(long)]
    sdpa: Option<PathBuf>,
}

#[derive(Args)]
struct RoundArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    /// `exact_recovery` or `large_is`.
    #[arg(long, default_value = "exact_recovery")]
    mode: String,
    #[arg(long)]
    tol_round: Option<f64>,
    /// Report JSON; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[arg(long, default_value_t = 1e-5)]
    tol_feas: f64,
    /// Write the count-bound grid up to this `n` to `--grid-out`.
    #[arg(long, requires = "grid_out")]
    grid_n_max: Option<usize>,
    #[arg(long)]
    grid_out: Option<PathBuf>,
    /// Report JSON; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment TOML. Explicit flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Planted sizes, or `auto`.
    #[arg(long, value_delimiter = ',')]
    k: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    r: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    eps: Vec<f64>,
    #[arg(long)]
    trials: Option<usize>,
    /// First seed; trial `t` uses `seed + t`.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    inside: Option<String>,
    #[arg(long)]
    adversary: Option<String>,
    #[arg(long)]
    tol_feas: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut root = match &self.config {
            Some(path) => parse_toml(&read_text(path)?)?,
            None => Table::new(),
        };
        let grid = sub_table(&mut root, "grid")?;
        let list = |v: Vec<Value>| Value::Array(v);
        if !self.n.is_empty() {
            grid.insert("n".into(), list(self.n.iter().map(|&x| Value::Integer(x as i64)).collect()));
        }
        if !self.k.is_empty() {
            let ks = self
                .k
                .iter()
                .map(|s| match s.parse::<i64>() {
                    Ok(k) => Value::Integer(k),
                    Err(_) => Value::String(s.clone()),
                })
                .collect();
            grid.insert("k".into(), list(ks));
        }
        if !self.r.is_empty() {
            grid.insert("r".into(), list(self.r.iter().map(|&x| Value::Integer(x as i64)).collect()));
        }
        if !self.p.is_empty() {
            grid.insert("p".into(), list(self.p.iter().map(|&x| Value::Float(x)).collect()));
        }
        if !self.eps.is_empty() {
            grid.insert("eps".into(), list(self.eps.iter().map(|&x| Value::Float(x)).collect()));
        }
        let strategies = sub_table(&mut root, "strategies")?;
        if let Some(s) = &self.inside {
            strategies.insert("inside".into(), Value::String(s.clone()));
        }
        if let Some(s) = &self.adversary {
            strategies.insert("adversary".into(), Value::String(s.clone()));
        }
        let solver = sub_table(&mut root, "solver")?;
        if let Some(t) = self.tol_feas {
            solver.insert("tol_feas".into(), Value::Float(t));
        }
        if let Some(m) = self.max_iter {
            solver.insert("max_iter".into(), Value::Integer(m as i64));
        }
        if let Some(t) = self.trials {
            root.insert("trials".into(), Value::Integer(t as i64));
        }
        if let Some(s) = self.seed {
            let s = i64::try_from(s).map_err(|_| Error::param("--seed too large"))?;
            root.insert("first_seed".into(), Value::Integer(s));
        }
        if let Some(m) = &self.mode {
            let m: Mode = m.parse()?;
            root.insert("mode".into(), Value::String(m.as_str().into()));
        }
        if let Some(o) = &self.out {
            root.insert("output_dir".into(), Value::String(o.display().to_string()));
        }
        if !root.contains_key("threads") {
            if let Some(t) = threads_from_env()? {
                root.insert("threads".into(), Value::Integer(t as i64));
            }
        }
        root.try_into().map_err(|e: toml::de::Error| Error::Format(e.to_string()))
    }
}

fn sub_table<'a>(root: &'a mut Table, key: &str) -> Result<&'a mut Table> {
    match root.entry(key).or_insert_with(|| Value::Table(Table::new())) {
        Value::Table(t) => Ok(t),
        _ => Err(Error::Format(format!("{key} must be a table"))),
    }
}

fn threads_from_env() -> Result<Option<usize>> {
    for var in ["HYPIS_THREADS", "TOOL_THREADS"] {
        if let Ok(v) = std::env::var(var) {
            let t = v
                .trim()
                .parse()
                .map_err(|_| Error::param(format!("{var}={v:?} is not a thread count")))?;
            return Ok(Some(t));
        }
    }
    Ok(None)
}

fn parse_toml(text: &str) -> Result<Table> {
    text.parse::<Table>().map_err(|e| Error::Format(e.to_string()))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Error::io(path, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<PlantedInstance> {
    PlantedInstance::from_json(&read_text(path)?)
}

fn load_solution(path: &Path) -> Result<SdpSolution> {
    read_solution(io::BufReader::new(File::open(path).map_err(|e| Error::io(path, e))?))
}

fn generate(args: GenerateArgs) -> Result<bool> {
    let inst = generate_planted(args.model.params()?, args.model.seed)?;
    emit(args.out.as_deref(), &inst.to_json())?;
    Ok(true)
}

fn solve_cmd(args: SolveArgs) -> Result<bool> {
    let inst = match &args.instance {
        Some(path) => load_instance(path)?,
        None => generate_planted(args.model.params()?, args.model.seed)?,
    };
    let mut cfg = args.solver.load()?;
    cfg.record_trace |= args.progress.is_some();
    let prob = build_problem(inst.hypergraph())?;
    if let Some(path) = &args.sdpa {
        let mut w = create(path)?;
        export_sdpa(&prob, &mut w)?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    let warm = if args.cold { None } else { Some(planted_reference_solution(&inst)?) };
    let sol = match solve(&prob, &cfg, warm.as_ref()) {
        Ok(s) => s,
        Err(Error::NonConvergence { partial, iterations, max_violation, .. }) => {
            log::warn!("no convergence after {iterations} iterations (max violation {max_violation:e}); writing partial solution");
            *partial
        }
        Err(e) => return Err(e),
    };
    let converged = sol.meta.converged;
    let mut w = create(&args.out)?;
    write_solution(&sol, &mut w)?;
    w.flush().map_err(|e| Error::io(&args.out, e))?;
    if let Some(path) = &args.progress {
        let mut w = create(path)?;
        let mut line = |s: String| writeln!(w, "{s}").map_err(|e| Error::io(path, e));
        line("iter,objective,max_violation,min_eig".into())?;
        for row in &sol.meta.trace {
            line(format!("{},{},{},{}", row.iter, row.objective, row.max_violation, row.min_eig))?;
        }
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    let report = verify_feasibility(&prob, &sol, cfg.tol_feas)?;
    println!(
        "{}",
        serde_json::json!({
            "objective": sol.objective(),
            "iterations": sol.meta.iterations,
            "converged": converged,
            "max_violation": report.max_violation,
            "dim": sol.dim(),
        })
    );
    Ok(converged)
}

fn round_cmd(args: RoundArgs) -> Result<bool> {
    let inst = load_instance(&args.instance)?;
    let sol = load_solution(&args.solution)?;
    let mode = match args.mode.as_str() {
        "exact_recovery" | "exact" => RoundingMode::ExactRecovery,
        "large_is" | "large" => RoundingMode::LargeIs,
        other => return Err(Error::param(format!("unknown rounding mode {other:?}"))),
    };
    let mut opts = RoundingOptions {
        planted: Some(inst.planted_set()),
        ..RoundingOptions::default()
    };
    if let Some(t) = args.tol_round {
        opts.tol_round = t;
    }
    let report = round(inst.hypergraph(), &sol, mode, &opts)?;
    emit(args.out.as_deref(), &report.to_json())?;
    Ok(true)
}

fn check_cmd(args: CheckArgs) -> Result<bool> {
    let inst = load_instance(&args.instance)?;
    let sol = load_solution(&args.solution)?;
    let prob = build_problem(inst.hypergraph())?;
    let feas = verify_feasibility(&prob, &sol, args.tol_feas)?;
    let params = inst.params();
    let total = check_total_bound(&sol, &inst, args.tol_feas, sol.meta.converged)?;
    let counts = count_bounds(params.n, params.k, params.r)?;
    let (identity, rhs) = if params.p > 0.0 {
        (
            Some(boundary_mass_identity(&sol, &inst)?),
            Some(grothendieck_rhs(params.n, params.k, params.r, params.p)?),
        )
    } else {
        (None, None)
    };
    let identity_ok = identity.map_or(true, |id| id.gap <= 1e-4 * id.lhs.max(1.0));
    let pass = feas.pass && identity_ok && total.pass != Some(false) && counts.all_hold();
    if let (Some(n_max), Some(path)) = (args.grid_n_max, &args.grid_out) {
        let mut w = create(path)?;
        write_grid_csv(&count_bounds_grid(n_max, 2..=4)?, &mut w)?;
        w.flush().map_err(|e| Error::io(path, e))?;
    }
    let feasibility: serde_json::Value = serde_json::from_str(&feas.to_json())?;
    let out = serde_json::json!({
        "pass": pass,
        "feasibility": feasibility,
        "boundary_mass_identity": identity,
        "total_bound": total,
        "grothendieck_rhs": rhs,
        "count_bounds": counts,
    });
    emit(args.out.as_deref(), &serde_json::to_string_pretty(&out)?)?;
    Ok(pass)
}

fn experiment(args: ExperimentArgs) -> Result<bool> {
    let cfg = args.config()?;
    let out = run_experiment(&cfg)?;
    let recovered: usize = out.summary.points.iter().map(|p| p.recovered).sum();
    eprintln!(
        "{} rows, {} recovered exactly; wrote {} and {}",
        out.rows.len(),
        recovered,
        out.csv_path.display(),
        out.summary_path.display()
    );
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Generate(a) => generate(a),
        Cmd::Solve(a) => solve_cmd(a),
        Cmd::Round(a) => round_cmd(a),
        Cmd::Check(a) => check_cmd(a),
        Cmd::Experiment(a) => experiment(a),
    };
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
