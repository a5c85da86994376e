use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::subset::{combinations, VertexSet};
use crate::subset_index::SubsetIndex;

/// Value constraint attached to a union class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Pin {
    Free,
    /// `‖x_i‖² = 1` for singletons.
    One,
    /// `‖x_K‖² = 0` for edges (and, with strict pinning, every superset of an edge).
    Zero,
}

/// A scalar read off the Gram matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    /// The value shared by every cell `(I, J)` with `I ∪ J = K`, read at `(K, K)`.
    Class(usize),
    /// An off-diagonal cell `(i, j)`, `i < j`, whose union exceeds `r + 1`
    /// elements and therefore belongs to no class.
    Cell(usize, usize),
}

/// Linear inequality `Σ coef · term + constant ≥ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub terms: Vec<(Term, f64)>,
    pub constant: f64,
}

impl Row {
    /// Evaluates the row given a reader for terms.
    pub fn eval(&self, mut read: impl FnMut(Term) -> f64) -> f64 {
        self.terms
            .iter()
            .fold(self.constant, |acc, &(t, c)| acc + c * read(t))
    }
}

/// Options for [`build_problem_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Pin every class containing an edge, not only the edge classes.
    pub strict_pinning: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            strict_pinning: true,
        }
    }
}

/// The relaxation compiled for one hypergraph.
///
/// The Gram matrix is indexed by nonempty subsets of size `≤ r + 1`
/// (see [`SubsetIndex`]). Cells `(I, J)` with `|I ∪ J| ≤ r + 1` share the
/// value of the class `I ∪ J`; the remaining cells are free.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    index: SubsetIndex,
    r: usize,
    masks: Vec<VertexSet>,
    pins: Vec<Pin>,
    monotone_rows: Vec<Row>,
    union_bound_rows: Vec<Row>,
    objective: Vec<usize>,
    strict_pinning: bool,
}

impl SdpProblem {
    pub fn index(&self) -> &SubsetIndex {
        &self.index
    }

    pub fn dim(&self) -> usize {
        self.index.dim()
    }

    pub fn n(&self) -> usize {
        self.index.n()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn strict_pinning(&self) -> bool {
        self.strict_pinning
    }

    /// Subset addressed by matrix index `i`.
    pub fn subset(&self, i: usize) -> VertexSet {
        self.masks[i]
    }

    pub fn subsets(&self) -> &[VertexSet] {
        &self.masks
    }

    /// Class of cell `(i, j)`, or `None` when the union exceeds `r + 1` elements.
    #[inline]
    pub fn class_of(&self, i: usize, j: usize) -> Option<usize> {
        let u = self.masks[i].union(self.masks[j]);
        (u.len() <= self.r + 1).then(|| self.index.rank_unchecked(u))
    }

    pub fn pin(&self, class: usize) -> Pin {
        self.pins[class]
    }

    pub fn pins(&self) -> &[Pin] {
        &self.pins
    }

    pub fn pinned_one(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&c| self.pins[c] == Pin::One)
    }

    pub fn pinned_zero(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&c| self.pins[c] == Pin::Zero)
    }

    /// Covering-pair rows `⟨x_u, x_I⟩ ≥ ⟨x_u, x_J⟩`, `|J| = |I| + 1`, after
    /// collapsing cells to their classes and removing duplicates.
    pub fn monotone_rows(&self) -> &[Row] {
        &self.monotone_rows
    }

    /// `1 − ‖x_{u,v_1..v_r}‖² ≤ Σ_i (1 − ‖x_{u,v_i}‖²)` for every `(r+1)`-set
    /// and every choice of the distinguished element `u`.
    pub fn union_bound_rows(&self) -> &[Row] {
        &self.union_bound_rows
    }

    pub fn rows(&self) -> impl Iterator<Item = &Row> {
        self.monotone_rows.iter().chain(&self.union_bound_rows)
    }

    /// Classes of all `r`-subsets; the objective is the sum of their norms.
    pub fn objective_cells(&self) -> &[usize] {
        &self.objective
    }
}

/// Compiles the relaxation for `h` with strict pinning.
pub fn build_problem(h: &Hypergraph) -> Result<SdpProblem> {
    build_problem_with(h, BuildOptions::default())
}

pub fn build_problem_with(h: &Hypergraph, opts: BuildOptions) -> Result<SdpProblem> {
    let (n, r) = (h.n(), h.r());
    if n < r + 1 {
        return Err(Error::param(format!(
            "n = {n} cannot host subsets of size r+1 = {}",
            r + 1
        )));
    }
    let index = SubsetIndex::for_relaxation(n, r)?;
    let masks = index.subsets();

    let pins: Vec<Pin> = masks
        .iter()
        .map(|&k| match k.len() {
            1 => Pin::One,
            l if l == r && h.contains_edge(k) => Pin::Zero,
            l if l > r
                && opts.strict_pinning
                && combinations(k, r).any(|e| h.contains_edge(e)) =>
            {
                Pin::Zero
            }
            _ => Pin::Free,
        })
        .collect();

    // ⟨x_u, x_X⟩ as a term.
    let term = |u: usize, x: VertexSet| -> Term {
        let joined = x.with(u);
        if joined.len() <= r + 1 {
            Term::Class(index.rank_unchecked(joined))
        } else {
            Term::Cell(u, index.rank_unchecked(x))
        }
    };

    let mut seen = HashSet::new();
    let mut monotone_rows = Vec::new();
    for big in 2..=r + 1 {
        for j in combinations(VertexSet::full(n), big) {
            for w in j.iter() {
                let i = j.without(w);
                for u in 0..n {
                    let left = term(u, i);
                    let right = term(u, j);
                    if left != right && seen.insert((left, right)) {
                        monotone_rows.push(Row {
                            terms: vec![(left, 1.0), (right, -1.0)],
                            constant: 0.0,
                        });
                    }
                }
            }
        }
    }

    let mut union_bound_rows = Vec::new();
    for k in combinations(VertexSet::full(n), r + 1) {
        let kc = index.rank_unchecked(k);
        for u in k.iter() {
            let mut terms = vec![(Term::Class(kc), 1.0)];
            for v in k.without(u).iter() {
                let pair = VertexSet::from_vertices([u, v]);
                terms.push((Term::Class(index.rank_unchecked(pair)), -1.0));
            }
            union_bound_rows.push(Row {
                terms,
                constant: (r - 1) as f64,
            });
        }
    }

    let objective = index.level(r).collect();
    Ok(SdpProblem {
        index,
        r,
        masks,
        pins,
        monotone_rows,
        union_bound_rows,
        objective,
        strict_pinning: opts.strict_pinning,
    })
}
