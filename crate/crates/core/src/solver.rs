//! First-order solver for the relaxation.
//!
//! The Gram matrix is parametrised by a vector `v` holding one value per
//! free union class and one per free off-class cell, so union ties and pins
//! hold by construction. Indices whose diagonal is forced to zero are dropped
//! (a PSD matrix with a zero diagonal entry has a zero row). The remaining
//! problem `max c·v s.t. G v + b ≥ 0, L(v) ⪰ 0` is split as
//!
//! ```text
//! v ← argmin −c·v + ρ/2 ‖L(v) − Z + U‖²   over G v + b ≥ 0
//! X̂ ← α L(v) + (1 − α) Z
//! Z ← Π_psd(X̂ + U)
//! U ← U + X̂ − Z
//! ```
//!
//! The first step is a weighted projection onto the inequality rows, solved
//! by Hildreth's dual coordinate ascent with multipliers carried across
//! iterations.

use std::collections::HashSet;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sdp::{verify_feasibility, Pin, ProgressRow, SdpProblem, SdpSolution, SolveMeta, Term};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Target for the largest constraint violation.
    pub tol_feas: f64,
    /// Relative objective change between checks that counts as settled.
    pub tol_obj: f64,
    /// Over-relaxation factor `α ∈ (0, 2)`.
    pub step: f64,
    /// Initial penalty weight `ρ`.
    pub penalty: f64,
    /// Seeds a small random perturbation of the cold start. With `seed = 0`
    /// the cold start is exactly the orthonormal solution.
    pub seed: u64,
    pub check_every: usize,
    /// Rebalance `ρ` from the primal/dual residual ratio.
    pub adaptive_penalty: bool,
    /// Keep the per-check progress rows in the returned metadata.
    pub record_trace: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iter: 20_000,
            tol_feas: 1e-5,
            tol_obj: 1e-7,
            step: 1.6,
            penalty: 1.0,
            seed: 0,
            check_every: 10,
            adaptive_penalty: true,
            record_trace: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol_feas > 0.0 && self.tol_obj > 0.0) {
            return Err(Error::param("tolerances must be positive"));
        }
        if self.max_iter == 0 || self.check_every == 0 {
            return Err(Error::param("max_iter and check_every must be at least 1"));
        }
        if !(self.step > 0.0 && self.step < 2.0) {
            return Err(Error::param(format!("step {} outside (0, 2)", self.step)));
        }
        if !(self.penalty > 0.0 && self.penalty.is_finite()) {
            return Err(Error::param(format!("penalty {} must be positive", self.penalty)));
        }
        Ok(())
    }
}

/// Nearest PSD matrix in Frobenius norm.
pub fn project_psd(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::param("matrix is not square"));
    }
    let n = m.nrows();
    let scale = m.amax().max(1.0);
    for i in 0..n {
        for j in i + 1..n {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::param(format!("matrix is not symmetric at ({i}, {j})")));
            }
        }
    }
    project_psd_unchecked(m.clone())
}

fn project_psd_unchecked(m: DMatrix<f64>) -> Result<DMatrix<f64>> {
    crate::linalg::clip_negative(&m)
}

const FIXED: u32 = u32::MAX;

struct SparseRow {
    vars: Vec<u32>,
    coef: Vec<f64>,
    constant: f64,
    /// `coef / weight`, the row's direction in the weighted metric.
    scaled: Vec<f64>,
    /// `Σ coef² / weight`.
    norm: f64,
}

impl SparseRow {
    fn eval(&self, v: &[f64]) -> f64 {
        self.vars
            .iter()
            .zip(&self.coef)
            .fold(self.constant, |acc, (&i, &c)| acc + c * v[i as usize])
    }
}

/// Reduced parametrisation of the Gram matrix.
struct Layout {
    d: usize,
    live: Vec<usize>,
    nvars: usize,
    /// Row-major `m × m`; `FIXED` marks cells held at `base`.
    cell_var: Vec<u32>,
    base: DMatrix<f64>,
    weight: Vec<f64>,
    cost: Vec<f64>,
    rows: Vec<SparseRow>,
    /// One global cell per variable, used to read warm starts.
    source: Vec<(usize, usize)>,
}

impl Layout {
    fn new(prob: &SdpProblem) -> Result<Self> {
        let d = prob.dim();
        // Zero closure: a cell next to a zero row is zero, so its class is too.
        let mut zero: Vec<bool> = (0..d).map(|c| prob.pin(c) == Pin::Zero).collect();
        loop {
            let mut changed = false;
            for i in 0..d {
                if !zero[i] {
                    continue;
                }
                for j in 0..d {
                    if let Some(k) = prob.class_of(i, j) {
                        if !zero[k] {
                            if prob.pin(k) == Pin::One {
                                return Err(Error::Invariant(format!(
                                    "singleton {} is forced to zero",
                                    prob.subset(k)
                                )));
                            }
                            zero[k] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let live: Vec<usize> = (0..d).filter(|&i| !zero[i]).collect();
        let m = live.len();
        let mut class_var = vec![FIXED; d];
        let mut nvars = 0u32;
        let mut source = Vec::new();
        for &k in &live {
            if prob.pin(k) == Pin::Free {
                class_var[k] = nvars;
                source.push((k, k));
                nvars += 1;
            }
        }
        let mut cell_var = vec![FIXED; m * m];
        let mut base = DMatrix::zeros(m, m);
        let mut local_of = vec![usize::MAX; d];
        for (a, &i) in live.iter().enumerate() {
            local_of[i] = a;
        }
        for a in 0..m {
            for b in a..m {
                let (i, j) = (live[a], live[b]);
                let var = match prob.class_of(i, j) {
                    Some(k) if zero[k] => FIXED,
                    Some(k) => match prob.pin(k) {
                        Pin::One => {
                            base[(a, b)] = 1.0;
                            base[(b, a)] = 1.0;
                            FIXED
                        }
                        Pin::Zero => FIXED,
                        Pin::Free => class_var[k],
                    },
                    None => {
                        source.push((i, j));
                        nvars += 1;
                        nvars - 1
                    }
                };
                cell_var[a * m + b] = var;
                cell_var[b * m + a] = var;
            }
        }
        let nvars = nvars as usize;
        let mut weight = vec![0.0; nvars];
        for &var in &cell_var {
            if var != FIXED {
                weight[var as usize] += 1.0;
            }
        }
        let mut cost = vec![0.0; nvars];
        let mut offset = 0.0;
        for &k in prob.objective_cells() {
            if zero[k] {
                continue;
            }
            match prob.pin(k) {
                Pin::Free => cost[class_var[k] as usize] += 1.0,
                Pin::One => offset += 1.0,
                Pin::Zero => {}
            }
        }
        debug_assert_eq!(offset, 0.0);

        let cell_of = |i: usize, j: usize| -> Option<u32> {
            let (a, b) = (local_of[i], local_of[j]);
            if a == usize::MAX || b == usize::MAX {
                None
            } else {
                Some(cell_var[a * m + b])
            }
        };
        let mut rows = Vec::new();
        let mut seen = HashSet::new();
        for row in prob.rows() {
            let mut constant = row.constant;
            let mut terms: Vec<(u32, f64)> = Vec::new();
            for &(t, c) in &row.terms {
                let (var, fixed) = match t {
                    Term::Class(k) if zero[k] => (FIXED, 0.0),
                    Term::Class(k) => match prob.pin(k) {
                        Pin::One => (FIXED, 1.0),
                        Pin::Zero => (FIXED, 0.0),
                        Pin::Free => (class_var[k], 0.0),
                    },
                    Term::Cell(i, j) => match cell_of(i, j) {
                        None => (FIXED, 0.0),
                        Some(FIXED) => (FIXED, base[(local_of[i], local_of[j])]),
                        Some(var) => (var, 0.0),
                    },
                };
                if var == FIXED {
                    constant += c * fixed;
                } else if let Some(e) = terms.iter_mut().find(|e| e.0 == var) {
                    e.1 += c;
                } else {
                    terms.push((var, c));
                }
            }
            terms.retain(|e| e.1 != 0.0);
            if terms.is_empty() {
                if constant < -1e-12 {
                    return Err(Error::Invariant("relaxation has an unsatisfiable row".into()));
                }
                continue;
            }
            terms.sort_by_key(|e| e.0);
            let key: (Vec<(u32, u64)>, u64) = (
                terms.iter().map(|&(v, c)| (v, c.to_bits())).collect(),
                constant.to_bits(),
            );
            if !seen.insert(key) {
                continue;
            }
            let vars: Vec<u32> = terms.iter().map(|e| e.0).collect();
            let coef: Vec<f64> = terms.iter().map(|e| e.1).collect();
            let scaled: Vec<f64> = vars
                .iter()
                .zip(&coef)
                .map(|(&v, &c)| c / weight[v as usize])
                .collect();
            let norm = coef.iter().zip(&scaled).map(|(c, s)| c * s).sum();
            rows.push(SparseRow {
                vars,
                coef,
                constant,
                scaled,
                norm,
            });
        }

        Ok(Layout {
            d,
            live,
            nvars,
            cell_var,
            base,
            weight,
            cost,
            rows,
            source,
        })
    }

    fn m(&self) -> usize {
        self.live.len()
    }

    fn assemble(&self, v: &[f64]) -> DMatrix<f64> {
        let m = self.m();
        let mut x = self.base.clone();
        for (idx, &var) in self.cell_var.iter().enumerate() {
            if var != FIXED {
                // column-major storage, symmetric layout
                x[(idx % m, idx / m)] = v[var as usize];
            }
        }
        x
    }

    /// Per-variable mean of `w` over the variable's cells.
    fn average(&self, w: &DMatrix<f64>) -> Vec<f64> {
        let m = self.m();
        let mut sum = vec![0.0; self.nvars];
        for (idx, &var) in self.cell_var.iter().enumerate() {
            if var != FIXED {
                sum[var as usize] += w[(idx % m, idx / m)];
            }
        }
        sum.iter().zip(&self.weight).map(|(s, w)| s / w).collect()
    }

    fn objective(&self, v: &[f64]) -> f64 {
        self.cost.iter().zip(v).map(|(c, x)| c * x).sum()
    }

    fn row_violation(&self, v: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| -r.eval(v))
            .fold(0.0, f64::max)
    }

    /// Weighted projection of `target` onto the rows; `lambda` is warm-started.
    fn project_rows(&self, target: &[f64], lambda: &mut [f64], eps: f64, sweeps: usize) -> Vec<f64> {
        let mut v = target.to_vec();
        for (row, &l) in self.rows.iter().zip(lambda.iter()) {
            if l != 0.0 {
                for (&i, &s) in row.vars.iter().zip(&row.scaled) {
                    v[i as usize] += l * s;
                }
            }
        }
        for _ in 0..sweeps {
            let mut worst: f64 = 0.0;
            let mut moved: f64 = 0.0;
            for (row, l) in self.rows.iter().zip(lambda.iter_mut()) {
                let s = row.eval(&v);
                let delta = (-s / row.norm).max(-*l);
                if delta != 0.0 {
                    *l += delta;
                    for (&i, &sc) in row.vars.iter().zip(&row.scaled) {
                        v[i as usize] += delta * sc;
                    }
                }
                worst = worst.max(-s);
                moved = moved.max(delta.abs() * row.norm.sqrt());
            }
            if worst <= eps && moved <= eps {
                break;
            }
        }
        v
    }

    fn read(&self, sol: &SdpSolution) -> Vec<f64> {
        self.source.iter().map(|&(i, j)| sol.gram()[(i, j)]).collect()
    }

    fn embed(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut g = DMatrix::zeros(self.d, self.d);
        for (a, &i) in self.live.iter().enumerate() {
            for (b, &j) in self.live.iter().enumerate() {
                g[(i, j)] = x[(a, b)];
            }
        }
        g
    }

    /// Largest violation of `L(v)`: rows plus the negative part of `λ_min`.
    fn violation(&self, v: &[f64], x: &DMatrix<f64>) -> Result<(f64, f64)> {
        let min_eig = crate::linalg::min_eigenvalue(x)?;
        Ok((self.row_violation(v).max(-min_eig), min_eig))
    }
}

/// Maximises the objective of `prob`. Starts from `warm` when given,
/// otherwise from the orthonormal solution.
///
/// The returned Gram matrix is the best iterate (by objective) whose
/// violation was within `tol_feas` at a check; `meta.converged` reports
/// whether the objective also settled.
pub fn solve(prob: &SdpProblem, cfg: &SolverConfig, warm: Option<&SdpSolution>) -> Result<SdpSolution> {
    cfg.validate()?;
    let lay = Layout::new(prob)?;
    let m = lay.m();
    let to_solution = |v: &[f64], meta: SolveMeta| -> Result<SdpSolution> {
        SdpSolution::new(prob.n(), prob.r(), lay.embed(&lay.assemble(v)), meta)
    };

    let mut v = match warm {
        Some(w) => {
            if w.dim() != prob.dim() || w.r() != prob.r() {
                return Err(Error::param("warm start does not match the problem"));
            }
            lay.read(w)
        }
        None => {
            let mut v0 = vec![0.0; lay.nvars];
            if cfg.seed != 0 {
                use rand::{Rng, SeedableRng};
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
                for x in v0.iter_mut() {
                    *x = rng.gen_range(0.0..1e-3);
                }
            }
            v0
        }
    };
    if lay.nvars == 0 || m == 0 {
        let x = lay.assemble(&v);
        let (viol, min_eig) = lay.violation(&v, &x)?;
        let meta = SolveMeta {
            iterations: Some(0),
            converged: viol <= cfg.tol_feas,
            max_violation: viol,
            objective: lay.objective(&v),
            penalty: cfg.penalty,
            trace: vec![ProgressRow {
                iter: 0,
                objective: lay.objective(&v),
                max_violation: viol,
                min_eig,
            }],
            ..SolveMeta::default()
        };
        return to_solution(&v, meta);
    }

    let eps = cfg.tol_feas * 1e-2;
    let sweeps = 200;
    let mut lambda = vec![0.0; lay.rows.len()];
    let mut rho = cfg.penalty;
    let mut x = lay.assemble(&v);
    let mut z = x.clone();
    let mut u = DMatrix::zeros(m, m);
    let mut trace = Vec::new();

    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    let (viol0, eig0) = lay.violation(&v, &x)?;
    let obj0 = lay.objective(&v);
    trace.push(ProgressRow {
        iter: 0,
        objective: obj0,
        max_violation: viol0,
        min_eig: eig0,
    });
    if viol0 <= cfg.tol_feas {
        best = Some((obj0, v.clone(), viol0));
    }

    let mut last_obj = obj0;
    let mut converged = false;
    let mut iterations = 0;
    let (mut primal, mut dual) = (f64::INFINITY, f64::INFINITY);
    let mut last_viol = viol0;
    let adapt_every = 100;

    for it in 1..=cfg.max_iter {
        iterations = it;
        let t = lay.average(&(&z - &u));
        let target: Vec<f64> = t
            .iter()
            .zip(&lay.cost)
            .zip(&lay.weight)
            .map(|((t, c), w)| t + c / (rho * w))
            .collect();
        v = lay.project_rows(&target, &mut lambda, eps, sweeps);
        x = lay.assemble(&v);
        let xh = &x * cfg.step + &z * (1.0 - cfg.step);
        let z_old = std::mem::replace(&mut z, project_psd_unchecked(&xh + &u)?);
        u += &xh - &z;

        if it % adapt_every == 0 || it % cfg.check_every == 0 {
            primal = (&x - &z).norm();
            dual = rho * (&z - &z_old).norm();
        }
        if cfg.adaptive_penalty && it % adapt_every == 0 {
            const MU: f64 = 10.0;
            const TAU: f64 = 2.0;
            if primal > MU * dual {
                rho *= TAU;
                u /= TAU;
            } else if dual > MU * primal {
                rho /= TAU;
                u *= TAU;
            }
        }

        if it % cfg.check_every == 0 || it == cfg.max_iter {
            let (viol, min_eig) = lay.violation(&v, &x)?;
            let obj = lay.objective(&v);
            last_viol = viol;
            trace.push(ProgressRow {
                iter: it,
                objective: obj,
                max_violation: viol,
                min_eig,
            });
            if viol <= cfg.tol_feas {
                if best.as_ref().is_none_or(|b| obj > b.0) {
                    best = Some((obj, v.clone(), viol));
                }
                let settled = (obj - last_obj).abs() <= cfg.tol_obj * obj.abs().max(1.0);
                if settled && it >= 2 * cfg.check_every {
                    converged = true;
                    last_obj = obj;
                    break;
                }
            }
            last_obj = obj;
        }
    }

    log::debug!(
        "solver stopped after {iterations} iterations (converged {converged}, violation {last_viol:e}, ρ {rho})"
    );
    let mut meta = SolveMeta {
        iterations: Some(iterations),
        converged,
        primal_residual: primal,
        dual_residual: dual,
        max_violation: last_viol,
        objective: last_obj,
        penalty: rho,
        trace: if cfg.record_trace { trace } else { Vec::new() },
    };
    match best {
        Some((obj, vb, viol)) => {
            meta.objective = obj;
            meta.max_violation = viol;
            to_solution(&vb, meta)
        }
        None if last_viol <= 10.0 * cfg.tol_feas => to_solution(&v, meta),
        None => {
            let partial = to_solution(&v, meta)?;
            let report = verify_feasibility(prob, &partial, cfg.tol_feas)?;
            Err(Error::NonConvergence {
                iterations,
                max_violation: last_viol,
                partial: Box::new(partial),
                report: Box::new(report),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate_planted, Hypergraph, ModelParams};
    use crate::sdp::{build_problem, build_problem_with, planted_reference_solution, BuildOptions};
    use approx::assert_abs_diff_eq;

    /// Cyclic Jacobi eigenvalue iteration, independent of the library routine.
    fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
        let n = a.nrows();
        let mut a = a.clone();
        let mut v = DMatrix::<f64>::identity(n, n);
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)] * a[(i, j)])
                .sum();
            if off < 1e-26 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[(p, q)].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * a[(p, q)]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[(k, p)], a[(k, q)]);
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        ((0..n).map(|i| a[(i, i)]).collect(), v)
    }

    #[test]
    fn psd_projection_small_cases() {
        let id = DMatrix::<f64>::identity(4, 4);
        assert_abs_diff_eq!(project_psd(&id).unwrap(), id, epsilon = 1e-14);
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0]));
        let p = project_psd(&d).unwrap();
        assert_abs_diff_eq!(p, DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]), epsilon = 1e-14);
        let asym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(project_psd(&asym).is_err());
    }

    #[test]
    fn psd_projection_matches_jacobi_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
        let n = 50;
        let mut a = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x: f64 = rng.gen_range(-1.0..1.0);
                a[(i, j)] = x;
                a[(j, i)] = x;
            }
        }
        let p = project_psd(&a).unwrap();
        let (vals, vecs) = jacobi_eigen(&a);
        let clipped = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            vals.iter().map(|&x| x.max(0.0)),
        ));
        let oracle = &vecs * clipped * vecs.transpose();
        let min = crate::linalg::min_eigenvalue(&p).unwrap();
        assert!(min >= -1e-10, "{min}");
        assert!((&p - &a).norm() <= (&oracle - &a).norm() + 1e-9);
        assert!((&p - &oracle).norm() < 1e-8);
    }

    #[test]
    fn triangle_objective_is_zero() {
        let h = Hypergraph::from_lists(3, 2, &[&[0, 1], &[0, 2], &[1, 2]]).unwrap();
        let prob = build_problem(&h).unwrap();
        let sol = solve(&prob, &SolverConfig::default(), None).unwrap();
        assert_eq!(sol.objective(), 0.0);
    }

    #[test]
    fn edgeless_triple_reaches_one_per_pair() {
        let h = Hypergraph::new(3, 2, []).unwrap();
        let prob = build_problem(&h).unwrap();
        let sol = solve(&prob, &SolverConfig::default(), None).unwrap();
        assert!((sol.objective() - 3.0).abs() < 1e-3, "{}", sol.objective());
        let rep = verify_feasibility(&prob, &sol, 1e-5).unwrap();
        assert!(rep.pass, "{}", rep.to_json());
    }

    #[test]
    fn warm_start_dominance_and_determinism() {
        let inst = generate_planted(ModelParams::new(10, 5, 2, 0.9), 3).unwrap();
        let prob = build_problem(inst.hypergraph()).unwrap();
        let warm = planted_reference_solution(&inst).unwrap();
        let cfg = SolverConfig::default();
        let a = solve(&prob, &cfg, Some(&warm)).unwrap();
        assert!(a.objective() >= 10.0 - 10.0 * cfg.tol_feas, "{}", a.objective());
        let rep = verify_feasibility(&prob, &a, 1e-4).unwrap();
        assert!(rep.pass, "{}", rep.to_json());
        let b = solve(&prob, &cfg, Some(&warm)).unwrap();
        assert_eq!(a.gram(), b.gram());
    }

    #[test]
    fn loose_pinning_reaches_same_optimum() {
        let h = Hypergraph::from_lists(5, 2, &[&[0, 1], &[1, 2], &[3, 4]]).unwrap();
        let strict = build_problem(&h).unwrap();
        let loose = build_problem_with(&h, BuildOptions { strict_pinning: false }).unwrap();
        let cfg = SolverConfig::default();
        let a = solve(&strict, &cfg, None).unwrap();
        let b = solve(&loose, &cfg, None).unwrap();
        assert!((a.objective() - b.objective()).abs() < 1e-3);
    }

    #[test]
    fn config_validation() {
        let bad = SolverConfig {
            step: 2.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            tol_feas: 0.0,
            ..SolverConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
