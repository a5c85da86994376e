use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::problem::{Pin, SdpProblem, Term};
use super::solution::SdpSolution;

/// Largest violation inside one constraint family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct FamilyViolation {
    pub max: f64,
    /// Cell, class or row where `max` was attained.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<String>,
}

impl FamilyViolation {
    fn offer(&mut self, v: f64, at: impl FnOnce() -> String) {
        if v > self.max {
            self.max = v;
            self.at = Some(at());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ViolationReport {
    /// `‖x_i‖² = 1`.
    pub unit_diagonal: FamilyViolation,
    /// Pinned-zero classes.
    pub pinned_zero: FamilyViolation,
    /// Spread between a cell and the diagonal entry of its union class.
    pub union_tie: FamilyViolation,
    pub monotone: FamilyViolation,
    pub union_bound: FamilyViolation,
    /// Negative part of the smallest eigenvalue.
    pub psd: FamilyViolation,
    pub symmetry: FamilyViolation,
    pub min_eigenvalue: f64,
    pub max_violation: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ViolationReport {
    pub fn families(&self) -> [(&'static str, &FamilyViolation); 7] {
        [
            ("unit_diagonal", &self.unit_diagonal),
            ("pinned_zero", &self.pinned_zero),
            ("union_tie", &self.union_tie),
            ("monotone", &self.monotone),
            ("union_bound", &self.union_bound),
            ("psd", &self.psd),
            ("symmetry", &self.symmetry),
        ]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Smallest eigenvalue of `m` restricted to rows that are not identically zero.
/// Returns 0 for an all-zero matrix and NaN if the decomposition fails.
pub fn min_eigenvalue_on_support(m: &DMatrix<f64>) -> f64 {
    let support: Vec<usize> = (0..m.nrows())
        .filter(|&i| m.row(i).iter().any(|&x| x != 0.0))
        .collect();
    if support.is_empty() {
        return 0.0;
    }
    let sub = m.select_rows(&support).select_columns(&support);
    let min = crate::linalg::min_eigenvalue(&((&sub + sub.transpose()) * 0.5)).unwrap_or(f64::NAN);
    if support.len() < m.nrows() {
        min.min(0.0)
    } else {
        min
    }
}

pub fn verify_feasibility(prob: &SdpProblem, sol: &SdpSolution, tol: f64) -> Result<ViolationReport> {
    if prob.dim() != sol.dim() || prob.r() != sol.r() || prob.n() != sol.n() {
        return Err(Error::param(format!(
            "problem (n={}, r={}, D={}) and solution (n={}, r={}, D={}) disagree",
            prob.n(),
            prob.r(),
            prob.dim(),
            sol.n(),
            sol.r(),
            sol.dim()
        )));
    }
    let m = sol.gram();
    let d = prob.dim();
    let name = |i: usize| prob.subset(i).to_string();
    let mut rep = ViolationReport {
        tol,
        ..ViolationReport::default()
    };

    for c in 0..d {
        let v = m[(c, c)];
        match prob.pin(c) {
            Pin::One => rep.unit_diagonal.offer((v - 1.0).abs(), || name(c)),
            Pin::Zero => rep.pinned_zero.offer(v.abs(), || name(c)),
            Pin::Free => {}
        }
    }

    for i in 0..d {
        for j in i + 1..d {
            rep.symmetry
                .offer((m[(i, j)] - m[(j, i)]).abs(), || format!("({}, {})", name(i), name(j)));
            if let Some(k) = prob.class_of(i, j) {
                let spread = (m[(i, j)] - m[(k, k)]).abs().max((m[(j, i)] - m[(k, k)]).abs());
                rep.union_tie
                    .offer(spread, || format!("({}, {}) vs {}", name(i), name(j), name(k)));
            }
        }
    }

    let read = |t: Term| match t {
        Term::Class(k) => m[(k, k)],
        Term::Cell(i, j) => m[(i, j)],
    };
    for (r, row) in prob.monotone_rows().iter().enumerate() {
        rep.monotone.offer(-row.eval(read), || format!("monotone row {r}"));
    }
    for (r, row) in prob.union_bound_rows().iter().enumerate() {
        rep.union_bound
            .offer(-row.eval(read), || format!("union-bound row {r}"));
    }

    let min_eig = min_eigenvalue_on_support(m);
    if !min_eig.is_finite() {
        return Err(Error::Numerical("non-finite eigenvalue".into()));
    }
    rep.min_eigenvalue = min_eig;
    rep.psd.offer(-min_eig, || format!("λ_min = {min_eig:e}"));

    rep.max_violation = rep
        .families()
        .iter()
        .map(|(_, f)| f.max)
        .fold(0.0, f64::max);
    rep.pass = rep.max_violation <= tol;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate_planted, Hypergraph, ModelParams};
    use crate::sdp::{build_problem, orthonormal_solution, planted_reference_solution};

    #[test]
    fn references_pass() {
        let inst = generate_planted(ModelParams::new(8, 4, 2, 0.6), 11).unwrap();
        let prob = build_problem(inst.hypergraph()).unwrap();
        let a = verify_feasibility(&prob, &planted_reference_solution(&inst).unwrap(), 1e-9).unwrap();
        assert!(a.pass, "{}", a.to_json());
        let b = verify_feasibility(&prob, &orthonormal_solution(8, 2).unwrap(), 1e-9).unwrap();
        assert!(b.pass);
        assert_eq!(b.max_violation, 0.0);
    }

    #[test]
    fn perturbed_unit_diagonal() {
        let inst = generate_planted(ModelParams::new(8, 4, 2, 0.6), 2).unwrap();
        let prob = build_problem(inst.hypergraph()).unwrap();
        let mut sol = planted_reference_solution(&inst).unwrap();
        let v = inst.planted_set().iter().next().unwrap();
        sol.gram_mut()[(v, v)] = 0.5;
        let rep = verify_feasibility(&prob, &sol, 1e-9).unwrap();
        assert_eq!(rep.unit_diagonal.max, 0.5);
        assert!(!rep.pass);
    }

    #[test]
    fn mismatch_is_an_error() {
        let h = Hypergraph::new(5, 2, []).unwrap();
        let prob = build_problem(&h).unwrap();
        assert!(verify_feasibility(&prob, &orthonormal_solution(6, 2).unwrap(), 1e-9).is_err());
    }

    #[test]
    fn support_eigenvalue() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 0)] = 2.0;
        m[(2, 2)] = 1.0;
        assert_eq!(min_eigenvalue_on_support(&m), 0.0);
        m[(0, 2)] = 3.0;
        m[(2, 0)] = 3.0;
        assert!(min_eigenvalue_on_support(&m) < -1.0);
        assert_eq!(min_eigenvalue_on_support(&DMatrix::zeros(3, 3)), 0.0);
    }
}
