//! Numerical checks of the structural lemmas behind the recovery guarantees.

use std::f64::consts::E;
use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::PlantedInstance;
use crate::rounding::f_const;
use crate::sdp::{mass_split, SdpSolution};
use crate::subset::{binomial, binomial_f64, combinations, VertexSet};

/// The random cross edges seen as a bipartite graph between small subsets
/// of `S` and small subsets of `V∖S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BipartiteView {
    pub r: usize,
    pub p: f64,
    pub planted: VertexSet,
    /// Nonempty subsets of `S` of size `≤ r − 1`.
    pub u1: Vec<VertexSet>,
    /// Nonempty subsets of `V∖S` of size `≤ r − 1`.
    pub u2: Vec<VertexSet>,
    /// `(e ∩ S, e ∖ S)` for every random cross edge `e`.
    pub edges: Vec<(VertexSet, VertexSet)>,
}

impl BipartiteView {
    /// Pairs `(I, J) ∈ U1 × U2` with `|I| + |J| = r`, i.e. the boundary split.
    pub fn eligible_pairs(&self) -> impl Iterator<Item = (VertexSet, VertexSet)> + '_ {
        self.u1.iter().flat_map(move |&i| {
            self.u2
                .iter()
                .filter(move |j| i.len() + j.len() == self.r)
                .map(move |&j| (i, j))
        })
    }

    /// `m' = Σ_{i=1}^{r−1} C(k, i) C(n−k, r−i)`.
    pub fn max_edges(&self) -> usize {
        self.eligible_pairs().count()
    }
}

fn small_subsets(universe: VertexSet, max: usize) -> Vec<VertexSet> {
    (1..=max).flat_map(|l| combinations(universe, l)).collect()
}

pub fn build_bipartite(inst: &PlantedInstance) -> Result<BipartiteView> {
    let s = inst.planted_set();
    let comp = inst.complement();
    let r = inst.params().r;
    let mut edges = Vec::with_capacity(inst.random_cross_edges().len());
    for &e in inst.random_cross_edges() {
        let (a, b) = (e.intersection(s), e.intersection(comp));
        if a.is_empty() || b.is_empty() {
            return Err(Error::Invariant(format!("random edge {e} does not cross the planted set")));
        }
        edges.push((a, b));
    }
    Ok(BipartiteView {
        r,
        p: inst.params().p,
        planted: s,
        u1: small_subsets(s, r - 1),
        u2: small_subsets(comp, r - 1),
        edges,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    /// `Σ_{e ∈ ∂(S)} ‖x_e‖²`.
    pub lhs: f64,
    /// `(1/2p) Σ B_{u1,u2} ⟨x_{u1}, x_{u2}⟩`.
    pub rhs: f64,
    pub gap: f64,
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::param("the identity needs p > 0"))
    }
}

/// Both sides of the rewriting of the boundary mass through the centered
/// matrix `B = p·(eligible) − A`. The right side reads off-diagonal Gram
/// cells, the left side diagonal ones.
pub fn boundary_mass_identity(sol: &SdpSolution, inst: &PlantedInstance) -> Result<IdentityReport> {
    let view = build_bipartite(inst)?;
    check_p(view.p)?;
    let lhs: f64 = crate::oracle::enumerate_boundary(sol.n(), sol.r(), view.planted)?
        .into_iter()
        .map(|e| sol.inner_unchecked(e, e))
        .sum();
    // B is symmetric, so the ordered double sum is twice the U1 × U2 sum.
    let eligible: f64 = view
        .eligible_pairs()
        .map(|(i, j)| view.p * sol.inner_unchecked(i, j))
        .sum();
    let adjacent: f64 = view.edges.iter().map(|&(i, j)| sol.inner_unchecked(i, j)).sum();
    let rhs = (2.0 * (eligible - adjacent)) / (2.0 * view.p);
    Ok(IdentityReport {
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactIdentity {
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub gap: BigRational,
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_f64(x).ok_or_else(|| Error::Numerical(format!("{x} is not finite")))
}

/// [`boundary_mass_identity`] over exact rationals: every Gram entry and
/// `p` are converted without rounding, so the gap is zero exactly when the
/// solution's union ties and edge pins hold exactly.
pub fn boundary_mass_identity_exact(sol: &SdpSolution, inst: &PlantedInstance) -> Result<ExactIdentity> {
    let view = build_bipartite(inst)?;
    check_p(view.p)?;
    let p = exact(view.p)?;
    let mut lhs = BigRational::zero();
    for e in crate::oracle::enumerate_boundary(sol.n(), sol.r(), view.planted)? {
        lhs += exact(sol.inner_unchecked(e, e))?;
    }
    let mut sum = BigRational::zero();
    for (i, j) in view.eligible_pairs() {
        sum += &p * exact(sol.inner_unchecked(i, j))?;
    }
    for &(i, j) in &view.edges {
        sum -= exact(sol.inner_unchecked(i, j))?;
    }
    let two = BigRational::from_integer(BigInt::from(2));
    let rhs = (&two * sum) / (&two * &p);
    let gap = (&lhs - &rhs).abs();
    Ok(ExactIdentity { lhs, rhs, gap })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TotalBound {
    pub mass_inside: f64,
    pub mass_boundary: f64,
    /// `C(k, r)`.
    pub target: f64,
    pub slack: f64,
    /// `None` for inputs not claimed optimal.
    pub pass: Option<bool>,
}

/// `mass_S + mass_∂ ≥ C(k, r) − 10·tol_feas·C(k, r)`, which an optimal
/// solution satisfies because the planted reference is feasible.
pub fn check_total_bound(
    sol: &SdpSolution,
    inst: &PlantedInstance,
    tol_feas: f64,
    optimal: bool,
) -> Result<TotalBound> {
    let split = mass_split(sol, inst.planted_set())?;
    let target = binomial_f64(inst.params().k, inst.params().r);
    let slack = 10.0 * tol_feas * target;
    Ok(TotalBound {
        mass_inside: split.inside,
        mass_boundary: split.boundary,
        target,
        slack,
        pass: optimal.then(|| split.inside + split.boundary >= target - slack),
    })
}

/// `f(r)/r^r · √(k/p) · n^{r−1}`, the bound on the boundary mass.
pub fn grothendieck_rhs(n: usize, k: usize, r: usize, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::param("p must be positive"));
    }
    let rf = r as f64;
    Ok(f_const(r)? / rf.powf(rf) * (k as f64 / p).sqrt() * (n as f64).powf(rf - 1.0))
}

/// Exact counts next to their closed-form bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountBounds {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub u1_plus_one: u64,
    pub u1_bound: f64,
    pub u2_plus_one: u64,
    pub u2_bound: f64,
    pub m_prime: u64,
    pub m_upper: f64,
    pub m_lower: f64,
    pub u1_ok: bool,
    pub u2_ok: bool,
    pub m_upper_ok: bool,
    pub m_lower_ok: bool,
}

impl CountBounds {
    pub fn all_hold(&self) -> bool {
        self.u1_ok && self.u2_ok && self.m_upper_ok && self.m_lower_ok
    }
}

pub fn count_bounds(n: usize, k: usize, r: usize) -> Result<CountBounds> {
    if r < 2 {
        return Err(Error::param(format!("uniformity {r} < 2")));
    }
    if 2 * k > n {
        return Err(Error::param(format!("k = {k} exceeds n/2 = {}", n as f64 / 2.0)));
    }
    let (nf, kf, rf) = (n as f64, k as f64, r as f64);
    let u1_plus_one = 1 + (1..r).map(|i| binomial(k, i)).sum::<u64>();
    let u2_plus_one = 1 + (1..r).map(|i| binomial(n - k, i)).sum::<u64>();
    let m_prime: u64 = (1..r).map(|i| binomial(k, i) * binomial(n - k, r - i)).sum();
    let u1_bound = rf * (2.0 * E * kf / rf).powf(rf - 1.0);
    let u2_bound = rf * (2.0 * E * nf / rf).powf(rf - 1.0);
    let m_upper = (4.0 * E).powf(rf - 2.0) * kf * nf.powf(rf - 1.0) / rf.powf(rf - 2.0);
    let m_lower = kf * (nf / (2.0 * rf)).powf(rf - 1.0);
    Ok(CountBounds {
        n,
        k,
        r,
        u1_plus_one,
        u1_bound,
        u2_plus_one,
        u2_bound,
        m_prime,
        m_upper,
        m_lower,
        u1_ok: u1_plus_one as f64 <= u1_bound,
        u2_ok: u2_plus_one as f64 <= u2_bound,
        m_upper_ok: m_prime as f64 <= m_upper,
        m_lower_ok: m_prime as f64 >= m_lower,
    })
}

/// [`count_bounds`] on every `(n, k, r)` with `r ≤ n ≤ n_max`,
/// `1 ≤ k ≤ n/2`, `r ∈ r_range`.
pub fn count_bounds_grid(n_max: usize, r_range: std::ops::RangeInclusive<usize>) -> Result<Vec<CountBounds>> {
    let points: Vec<(usize, usize, usize)> = r_range
        .flat_map(|r| (r..=n_max).flat_map(move |n| (1..=n / 2).map(move |k| (n, k, r))))
        .collect();
    points
        .into_par_iter()
        .map(|(n, k, r)| count_bounds(n, k, r))
        .collect()
}

pub fn write_grid_csv<W: Write>(rows: &[CountBounds], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Whether the triple is consistent with the orthogonality lemma: two
/// orthogonal vectors cannot both lie in the `R`-ball around `w` once
/// `R > 1/√2`.
pub fn orthogonal_ball_check(w: &[f64], y: &[f64], z: &[f64], radius: f64) -> Result<bool> {
    if !(radius > std::f64::consts::FRAC_1_SQRT_2) {
        return Err(Error::param(format!("radius {radius} must exceed 1/√2")));
    }
    if w.len() != y.len() || w.len() != z.len() {
        return Err(Error::param("vectors differ in length"));
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    if (dot(w, w).sqrt() - 1.0).abs() > 1e-10 {
        return Err(Error::param("w must be a unit vector"));
    }
    if dot(y, y).sqrt() > 1.0 + 1e-10 || dot(z, z).sqrt() > 1.0 + 1e-10 {
        return Err(Error::param("y and z must lie in the unit ball"));
    }
    let both = dot(w, y) >= radius && dot(y, z).abs() <= 1e-10 && dot(w, z) >= radius;
    Ok(!both)
}

/// For each `v ∈ V∖S` (ascending), whether some tuple `t` has `t ∪ {v} ∈ E`.
pub fn coverage_check(inst: &PlantedInstance, tuples: &[VertexSet]) -> Result<Vec<(usize, bool)>> {
    let s = inst.planted_set();
    let r = inst.params().r;
    for t in tuples {
        if !t.is_subset(s) || t.len() != r - 1 {
            return Err(Error::param(format!("tuple {t} is not an (r−1)-subset of S")));
        }
    }
    let h = inst.hypergraph();
    Ok(inst
        .complement()
        .iter()
        .map(|v| (v, tuples.iter().any(|t| h.contains_edge(t.with(v)))))
        .collect())
}

/// Mean `⟨x_u, x_v⟩` over `v ∈ S∖{u}` and mean `⟨x_u, x_I⟩` over
/// `I ∈ C(S∖{u}, r−1)`. Recorded side by side; no order is asserted.
pub fn root_expectations(sol: &SdpSolution, s: VertexSet, u: usize) -> Result<(f64, f64)> {
    if !s.contains(u) || s.max().is_some_and(|m| m >= sol.n()) {
        return Err(Error::param("root must belong to the set"));
    }
    let rest = s.without(u);
    if rest.len() < sol.r() - 1 || rest.is_empty() {
        return Err(Error::param("set too small"));
    }
    let x_u = VertexSet::singleton(u);
    let mean = |it: Vec<VertexSet>| {
        let len = it.len() as f64;
        it.into_iter().map(|i| sol.inner_unchecked(x_u, i)).sum::<f64>() / len
    };
    Ok((
        mean(combinations(rest, 1).collect()),
        mean(combinations(rest, sol.r() - 1).collect()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate_planted, ModelParams};
    use crate::sdp::{orthonormal_solution, planted_reference_solution};

    #[test]
    fn bipartite_sizes() {
        let inst = generate_planted(ModelParams::new(6, 2, 2, 1.0), 1).unwrap();
        let v = build_bipartite(&inst).unwrap();
        assert_eq!((v.u1.len(), v.u2.len(), v.edges.len()), (2, 4, 8));
        let inst = generate_planted(ModelParams::new(12, 4, 3, 1.0), 1).unwrap();
        let v = build_bipartite(&inst).unwrap();
        assert_eq!((v.u1.len(), v.u2.len(), v.max_edges()), (10, 36, 160));
        assert_eq!(v.edges.len(), 160);
    }

    #[test]
    fn reference_identities_vanish() {
        let inst = generate_planted(ModelParams::new(8, 3, 2, 0.5), 9).unwrap();
        for sol in [planted_reference_solution(&inst).unwrap(), orthonormal_solution(8, 2).unwrap()] {
            let id = boundary_mass_identity(&sol, &inst).unwrap();
            assert_eq!((id.lhs, id.rhs), (0.0, 0.0));
            assert!(boundary_mass_identity_exact(&sol, &inst).unwrap().gap.is_zero());
        }
        let zero_p = generate_planted(ModelParams::new(8, 3, 2, 0.0), 9).unwrap();
        let sol = orthonormal_solution(8, 2).unwrap();
        assert!(boundary_mass_identity(&sol, &zero_p).is_err());
    }

    #[test]
    fn count_examples() {
        let c = count_bounds(10, 4, 2).unwrap();
        assert_eq!(c.m_prime, 24);
        assert!((c.m_lower - 10.0).abs() < 1e-12 && (c.m_upper - 40.0).abs() < 1e-12);
        let c = count_bounds(12, 4, 3).unwrap();
        assert_eq!(c.m_prime, 160);
        assert!((c.m_lower - 16.0).abs() < 1e-12);
        assert!((c.m_upper - 2087.6).abs() < 0.1);
        assert!(count_bounds(10, 6, 2).is_err());
    }

    #[test]
    fn grothendieck_examples() {
        assert!((grothendieck_rhs(10, 4, 2, 1.0).unwrap() - 710.23).abs() < 0.01);
        let a = grothendieck_rhs(10, 4, 3, 0.5).unwrap();
        let b = grothendieck_rhs(20, 4, 3, 0.5).unwrap();
        assert!((b / a - 4.0).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_examples() {
        assert!(orthogonal_ball_check(&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], 0.75).unwrap());
        assert!(orthogonal_ball_check(&[1.0, 0.0], &[0.8, 0.6], &[-0.6, 0.8], 0.8).unwrap());
        assert!(orthogonal_ball_check(&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], 0.7).is_err());
    }

    #[test]
    fn coverage_extremes() {
        let inst = generate_planted(ModelParams::new(8, 3, 2, 1.0), 2).unwrap();
        assert!(coverage_check(&inst, &singles_of(&inst)).unwrap().iter().all(|c| c.1));
        let inst = generate_planted(ModelParams::new(8, 3, 2, 0.0), 2).unwrap();
        assert!(coverage_check(&inst, &singles_of(&inst)).unwrap().iter().all(|c| !c.1));
        let outside = VertexSet::singleton(inst.complement().iter().next().unwrap());
        assert!(coverage_check(&inst, &[outside]).is_err());
    }

    fn singles_of(inst: &PlantedInstance) -> Vec<VertexSet> {
        inst.planted_set().iter().map(VertexSet::singleton).collect()
    }

    #[test]
    fn total_bound_reference() {
        let inst = generate_planted(ModelParams::new(10, 5, 2, 0.9), 1).unwrap();
        let t = check_total_bound(&planted_reference_solution(&inst).unwrap(), &inst, 1e-5, true).unwrap();
        assert_eq!(t.pass, Some(true));
        assert_eq!(t.mass_inside, 10.0);
        let o = check_total_bound(&orthonormal_solution(10, 2).unwrap(), &inst, 1e-5, false).unwrap();
        assert_eq!(o.pass, None);
        assert!(o.mass_inside + o.mass_boundary < o.target);
    }
}
