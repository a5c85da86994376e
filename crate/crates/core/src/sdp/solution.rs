use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::PlantedInstance;
use crate::subset::{binomial, VertexSet};
use crate::subset_index::SubsetIndex;

/// One line of solver progress.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProgressRow {
    pub iter: usize,
    pub objective: f64,
    pub max_violation: f64,
    pub min_eig: f64,
}

/// Provenance of a Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SolveMeta {
    /// `None` for closed-form solutions.
    pub iterations: Option<usize>,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub max_violation: f64,
    pub objective: f64,
    pub penalty: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<ProgressRow>,
}

/// Gram matrix `M[i][j] = ⟨x_I, x_J⟩` over the relaxation's subset index.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    index: SubsetIndex,
    r: usize,
    gram: DMatrix<f64>,
    pub meta: SolveMeta,
}

impl SdpSolution {
    pub fn new(n: usize, r: usize, gram: DMatrix<f64>, meta: SolveMeta) -> Result<Self> {
        let index = SubsetIndex::for_relaxation(n, r)?;
        if gram.nrows() != index.dim() || gram.ncols() != index.dim() {
            return Err(Error::param(format!(
                "Gram matrix is {}×{}, expected {d}×{d}",
                gram.nrows(),
                gram.ncols(),
                d = index.dim()
            )));
        }
        Ok(SdpSolution {
            index,
            r,
            gram,
            meta,
        })
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn index(&self) -> &SubsetIndex {
        &self.index
    }

    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn gram_mut(&mut self) -> &mut DMatrix<f64> {
        &mut self.gram
    }

    /// `⟨x_I, x_J⟩`.
    pub fn inner(&self, a: VertexSet, b: VertexSet) -> Result<f64> {
        Ok(self.gram[(self.index.rank(a)?, self.index.rank(b)?)])
    }

    #[inline]
    pub(crate) fn inner_unchecked(&self, a: VertexSet, b: VertexSet) -> f64 {
        self.gram[(self.index.rank_unchecked(a), self.index.rank_unchecked(b))]
    }

    /// `‖x_I‖²`.
    pub fn norm_sq(&self, a: VertexSet) -> Result<f64> {
        self.inner(a, a)
    }

    /// `Σ_{|I| = r} ‖x_I‖²`.
    pub fn objective(&self) -> f64 {
        self.index.level(self.r).map(|i| self.gram[(i, i)]).sum()
    }
}

/// Solution that clusters every subset of `S` on one unit vector `ê`,
/// gives each vertex of `V∖S` its own orthonormal vector and zeroes
/// everything else. Objective `C(k, r)`.
pub fn planted_reference_solution(inst: &PlantedInstance) -> Result<SdpSolution> {
    let s = inst.planted_set();
    if !inst.hypergraph().is_independent(s)? {
        return Err(Error::param("planted set is not independent"));
    }
    let (n, r) = (inst.params().n, inst.params().r);
    let index = SubsetIndex::for_relaxation(n, r)?;
    let subsets = index.subsets();
    let d = index.dim();
    let inside: Vec<usize> = (0..d).filter(|&i| subsets[i].is_subset(s)).collect();
    let mut gram = DMatrix::zeros(d, d);
    for &i in &inside {
        for &j in &inside {
            gram[(i, j)] = 1.0;
        }
    }
    for v in inst.complement().iter() {
        gram[(v, v)] = 1.0;
    }
    let meta = SolveMeta {
        objective: binomial(s.len(), r) as f64,
        ..SolveMeta::default()
    };
    SdpSolution::new(n, r, gram, meta)
}

/// Orthonormal singleton vectors, every other vector zero. Feasible for any
/// hypergraph, objective 0.
pub fn orthonormal_solution(n: usize, r: usize) -> Result<SdpSolution> {
    let index = SubsetIndex::for_relaxation(n, r)?;
    let d = index.dim();
    let mut gram = DMatrix::zeros(d, d);
    for v in 0..n {
        gram[(v, v)] = 1.0;
    }
    SdpSolution::new(n, r, gram, SolveMeta::default())
}

/// Objective mass split over `C(S, r)`, `∂(S)` and `C(V∖S, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSplit {
    pub inside: f64,
    pub boundary: f64,
    pub rest: f64,
}

impl MassSplit {
    pub fn total(&self) -> f64 {
        self.inside + self.boundary + self.rest
    }
}

pub fn mass_split(sol: &SdpSolution, s: VertexSet) -> Result<MassSplit> {
    if s.max().is_some_and(|m| m >= sol.n()) {
        return Err(Error::param(format!("set {s} is not inside the vertex set")));
    }
    let comp = VertexSet::full(sol.n()).difference(s);
    let mut split = MassSplit {
        inside: 0.0,
        boundary: 0.0,
        rest: 0.0,
    };
    for i in sol.index.level(sol.r) {
        let set = sol.index.unrank(i)?;
        let mass = sol.gram[(i, i)];
        if set.is_subset(s) {
            split.inside += mass;
        } else if set.is_subset(comp) {
            split.rest += mass;
        } else {
            split.boundary += mass;
        }
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate_planted, ModelParams};

    #[test]
    fn reference_objective_and_cross_products() {
        let inst = generate_planted(ModelParams::new(12, 5, 2, 0.7), 4).unwrap();
        let sol = planted_reference_solution(&inst).unwrap();
        assert_eq!(sol.objective(), 10.0);
        let s = inst.planted_set();
        for u in s.iter() {
            for v in inst.complement().iter() {
                let val = sol
                    .inner(VertexSet::singleton(u), VertexSet::singleton(v))
                    .unwrap();
                assert_eq!(val, 0.0);
            }
        }
        let split = mass_split(&sol, s).unwrap();
        assert_eq!((split.inside, split.boundary, split.rest), (10.0, 0.0, 0.0));
    }

    #[test]
    fn orthonormal_is_trivial() {
        let sol = orthonormal_solution(6, 2).unwrap();
        assert_eq!(sol.objective(), 0.0);
        let split = mass_split(&sol, VertexSet::from_vertices([0, 1])).unwrap();
        assert_eq!(split.total(), 0.0);
        assert_eq!(crate::linalg::min_eigenvalue(sol.gram()).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(SdpSolution::new(5, 2, DMatrix::zeros(3, 3), SolveMeta::default()).is_err());
    }
}
