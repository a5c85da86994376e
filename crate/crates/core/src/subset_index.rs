//! Dense addressing of the relaxation's vector variables.
//!
//! Subsets of size `1..=max_size` are laid out level by level (ascending
//! size); within a level they are ordered colexicographically, so that
//! `rank({a_1 < … < a_l}) = offset(l) + Σ_i C(a_i, i)`.

use crate::error::{Error, Result};
use crate::subset::{binomial, combinations, VertexSet, MAX_VERTICES};

/// Bijection between nonempty subsets of size `≤ max_size` and `0..dim()`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetIndex {
    n: usize,
    max_size: usize,
    /// `level_offsets[l] = Σ_{j=1}^{l−1} C(n, j)` for `l ∈ 1..=max_size+1`;
    /// entry `max_size + 1` is the dimension.
    level_offsets: Vec<usize>,
    /// `choose[a][i] = C(a, i)` for `a < n`, `i ≤ max_size`.
    choose: Vec<Vec<usize>>,
}

impl SubsetIndex {
    pub fn new(n: usize, max_size: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::param(format!("vertex count {n} outside 1..={MAX_VERTICES}")));
        }
        if max_size == 0 || max_size > n {
            return Err(Error::param(format!(
                "max subset size {max_size} outside 1..={n}"
            )));
        }
        let mut level_offsets = vec![0usize; max_size + 2];
        for l in 1..=max_size {
            level_offsets[l + 1] = level_offsets[l] + binomial(n, l) as usize;
        }
        let choose = (0..n)
            .map(|a| (0..=max_size).map(|i| binomial(a, i) as usize).collect())
            .collect();
        Ok(SubsetIndex {
            n,
            max_size,
            level_offsets,
            choose,
        })
    }

    /// Index for the relaxation over an `r`-uniform hypergraph: sizes `1..=r+1`.
    pub fn for_relaxation(n: usize, r: usize) -> Result<Self> {
        if n < r + 1 {
            return Err(Error::param(format!(
                "n = {n} cannot host subsets of size r+1 = {}",
                r + 1
            )));
        }
        Self::new(n, r + 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn dim(&self) -> usize {
        self.level_offsets[self.max_size + 1]
    }

    pub fn level_offsets(&self) -> &[usize] {
        &self.level_offsets
    }

    /// Index range occupied by subsets of size `l`.
    pub fn level(&self, l: usize) -> std::ops::Range<usize> {
        assert!((1..=self.max_size).contains(&l));
        self.level_offsets[l]..self.level_offsets[l + 1]
    }

    pub fn rank(&self, set: VertexSet) -> Result<usize> {
        let l = set.len();
        if l == 0 || l > self.max_size {
            return Err(Error::param(format!(
                "subset size {l} outside 1..={}",
                self.max_size
            )));
        }
        if set.max().is_some_and(|m| m >= self.n) {
            return Err(Error::param(format!("subset {set} has a vertex ≥ n = {}", self.n)));
        }
        Ok(self.rank_unchecked(set))
    }

    /// Rank of a strictly ascending vertex list.
    pub fn rank_sorted(&self, vertices: &[usize]) -> Result<usize> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("subset must be strictly ascending"));
        }
        if let Some(&v) = vertices.iter().find(|&&v| v >= self.n) {
            return Err(Error::param(format!("vertex {v} ≥ n = {}", self.n)));
        }
        self.rank(VertexSet::from_vertices(vertices.iter().copied()))
    }

    /// Rank without range checks; `set` must be a valid member of the domain.
    #[inline]
    pub fn rank_unchecked(&self, set: VertexSet) -> usize {
        let mut idx = self.level_offsets[set.len()];
        for (i, a) in set.iter().enumerate() {
            idx += self.choose[a][i + 1];
        }
        idx
    }

    pub fn unrank(&self, index: usize) -> Result<VertexSet> {
        if index >= self.dim() {
            return Err(Error::param(format!(
                "index {index} ≥ dimension {}",
                self.dim()
            )));
        }
        let l = (1..=self.max_size)
            .find(|&l| index < self.level_offsets[l + 1])
            .expect("index below dimension");
        let mut rest = index - self.level_offsets[l];
        let mut set = VertexSet::EMPTY;
        let mut hi = self.n;
        for i in (1..=l).rev() {
            // Largest a < hi with C(a, i) ≤ rest.
            let mut a = hi - 1;
            while self.choose[a][i] > rest {
                a -= 1;
            }
            set = set.with(a);
            rest -= self.choose[a][i];
            hi = a;
        }
        Ok(set)
    }

    /// All subsets in index order.
    pub fn subsets(&self) -> Vec<VertexSet> {
        let full = VertexSet::full(self.n);
        (1..=self.max_size)
            .flat_map(|l| combinations(full, l))
            .collect()
    }
}

/// `D = Σ_{l=1}^{r+1} C(n, l)`.
pub fn dimension(n: usize, r: usize) -> usize {
    (1..=r + 1).map(|l| binomial(n, l) as usize).sum()
}
