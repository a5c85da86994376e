//! Balls around SDP vectors, Algorithm 1 and the parameter thresholds.

use std::f64::consts::E;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::sdp::SdpSolution;
use crate::subset::{combinations, VertexSet};

/// Default slack subtracted from ball thresholds.
pub const DEFAULT_TOL_ROUND: f64 = 1e-3;

/// `B_u(l, R, T)`: the `l`-subsets `I ⊆ T` with `⟨x_u, x_I⟩ ≥ R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub u: usize,
    pub l: usize,
    pub radius: f64,
    pub within: VertexSet,
    pub tol_round: f64,
}

impl BallSpec {
    pub fn new(u: usize, l: usize, radius: f64, within: VertexSet) -> Self {
        BallSpec {
            u,
            l,
            radius,
            within,
            tol_round: DEFAULT_TOL_ROUND,
        }
    }

    pub fn with_tol(mut self, tol_round: f64) -> Self {
        self.tol_round = tol_round;
        self
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if radius > 0.0 && radius < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("radius {radius} outside (0, 1)")))
    }
}

pub fn ball(sol: &SdpSolution, spec: &BallSpec) -> Result<Vec<VertexSet>> {
    let n = sol.n();
    if spec.l == 0 || spec.l > sol.r() + 1 {
        return Err(Error::param(format!(
            "tuple size {} outside 1..={}",
            spec.l,
            sol.r() + 1
        )));
    }
    check_radius(spec.radius)?;
    if !(spec.tol_round >= 0.0) {
        return Err(Error::param("tol_round must be nonnegative"));
    }
    if spec.u >= n || spec.within.max().is_some_and(|m| m >= n) {
        return Err(Error::param("ball root or candidate set out of range"));
    }
    let x_u = VertexSet::singleton(spec.u);
    let cut = spec.radius - spec.tol_round;
    Ok(combinations(spec.within, spec.l)
        .filter(|&i| sol.inner_unchecked(x_u, i) >= cut)
        .collect())
}

/// Extends `base` greedily along `order`, which must list every vertex once.
pub fn greedy_complete(h: &Hypergraph, base: VertexSet, order: &[usize]) -> Result<VertexSet> {
    if !h.is_independent(base)? {
        return Err(Error::param(format!("base {base} is not independent")));
    }
    let mut seen = VertexSet::EMPTY;
    for &v in order {
        if v >= h.n() || seen.contains(v) {
            return Err(Error::param("order must be a permutation of the vertices"));
        }
        seen = seen.with(v);
    }
    if seen != h.vertices() {
        return Err(Error::param("order must be a permutation of the vertices"));
    }
    Ok(greedy_unchecked(h, base, order))
}

fn greedy_unchecked(h: &Hypergraph, base: VertexSet, order: &[usize]) -> VertexSet {
    order.iter().fold(base, |acc, &v| {
        if !acc.contains(v) && h.can_extend(acc, v) {
            acc.with(v)
        } else {
            acc
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum GreedyOrder {
    #[default]
    Ascending,
    /// A seeded shuffle of the vertices.
    Shuffled(u64),
}

impl GreedyOrder {
    fn vertices(self, n: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..n).collect();
        if let GreedyOrder::Shuffled(seed) = self {
            order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        }
        order
    }
}

/// Which theorem's `(l, R)` pair to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundingMode {
    /// `(1, 1 − 1/(2r))`.
    LargeIs,
    /// `(r − 1, 3/4)`.
    ExactRecovery,
}

impl RoundingMode {
    pub fn params(self, r: usize) -> (usize, f64) {
        match self {
            RoundingMode::LargeIs => (1, 1.0 - 1.0 / (2.0 * r as f64)),
            RoundingMode::ExactRecovery => (r - 1, 0.75),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundingOptions {
    pub tol_round: f64,
    pub order: GreedyOrder,
    /// Known planted set, used only to fill `equals_planted`.
    pub planted: Option<VertexSet>,
}

impl Default for RoundingOptions {
    fn default() -> Self {
        RoundingOptions {
            tol_round: DEFAULT_TOL_ROUND,
            order: GreedyOrder::Ascending,
            planted: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootOutcome {
    pub root: usize,
    pub ball_size: usize,
    /// `S_u`, the vertices read off the ball's tuples.
    pub ball_vertices: VertexSet,
    /// `S'_u`, or `None` when `{u} ∪ S_u` was not independent.
    pub candidate: Option<VertexSet>,
    pub is_independent: bool,
    pub equals_planted: Option<bool>,
}

impl RootOutcome {
    pub fn size(&self) -> usize {
        self.candidate.map_or(0, VertexSet::len)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub set: VertexSet,
    /// Smallest root producing this set.
    pub first_root: usize,
    pub equals_planted: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub l: usize,
    pub radius: f64,
    pub roots: Vec<RootOutcome>,
    /// Distinct nonempty candidates in order of first root.
    pub candidates: Vec<Candidate>,
    pub best: Option<VertexSet>,
    pub best_size: usize,
    /// Whether the planted set occurs among the candidates.
    pub planted_found: Option<bool>,
    pub wall_ms: f64,
}

impl RecoveryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Algorithm 1: one candidate per root `u`, built from the ball
/// `B_u(l, R, V)` and completed greedily.
pub fn algorithm_one(
    h: &Hypergraph,
    sol: &SdpSolution,
    l: usize,
    radius: f64,
    opts: &RoundingOptions,
) -> Result<RecoveryReport> {
    if sol.n() != h.n() || sol.r() != h.r() {
        return Err(Error::param("solution does not match the hypergraph"));
    }
    check_radius(radius)?;
    let start = Instant::now();
    let order = opts.order.vertices(h.n());
    let all = h.vertices();
    let roots: Vec<RootOutcome> = (0..h.n())
        .into_par_iter()
        .map(|u| -> Result<RootOutcome> {
            let spec = BallSpec::new(u, l, radius, all).with_tol(opts.tol_round);
            let tuples = ball(sol, &spec)?;
            let s_u = tuples
                .iter()
                .fold(VertexSet::EMPTY, |acc, &t| acc.union(t));
            let seed = s_u.with(u);
            let candidate = h
                .is_independent_unchecked(seed)
                .then(|| greedy_unchecked(h, seed, &order));
            let is_independent = candidate.is_none_or(|c| h.is_independent_unchecked(c));
            Ok(RootOutcome {
                root: u,
                ball_size: tuples.len(),
                ball_vertices: s_u,
                candidate,
                is_independent,
                equals_planted: opts.planted.map(|s| candidate == Some(s)),
            })
        })
        .collect::<Result<_>>()?;

    let mut candidates: Vec<Candidate> = Vec::new();
    for o in &roots {
        if let Some(c) = o.candidate {
            if !o.is_independent {
                return Err(Error::Invariant(format!("candidate {c} is not independent")));
            }
            if !candidates.iter().any(|x| x.set == c) {
                candidates.push(Candidate {
                    set: c,
                    first_root: o.root,
                    equals_planted: opts.planted.map(|s| s == c),
                });
            }
        }
    }
    let best = candidates
        .iter()
        .fold(None::<&Candidate>, |b, c| match b {
            Some(b) if b.set.len() >= c.set.len() => Some(b),
            _ => Some(c),
        })
        .map(|c| c.set);
    Ok(RecoveryReport {
        l,
        radius,
        planted_found: opts
            .planted
            .map(|s| candidates.iter().any(|c| c.set == s)),
        best_size: best.map_or(0, VertexSet::len),
        best,
        roots,
        candidates,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Runs Algorithm 1 in `mode` and returns its report.
pub fn round(h: &Hypergraph, sol: &SdpSolution, mode: RoundingMode, opts: &RoundingOptions) -> Result<RecoveryReport> {
    let (l, radius) = mode.params(h.r());
    algorithm_one(h, sol, l, radius, opts)
}

/// The largest set in Algorithm 1's list under the large-set parameters.
pub fn largest_independent_set(h: &Hypergraph, sol: &SdpSolution, opts: &RoundingOptions) -> Result<VertexSet> {
    let rep = round(h, sol, RoundingMode::LargeIs, opts)?;
    Ok(rep.best.unwrap_or(VertexSet::EMPTY))
}

fn check_r(r: usize) -> Result<()> {
    if r < 2 {
        Err(Error::param(format!("uniformity {r} < 2")))
    } else {
        Ok(())
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("p = {p} outside (0, 1]")))
    }
}

/// `f(r) = r^{5/2} 2^{3r−2} e^{3r/2−2} / √3`.
pub fn f_const(r: usize) -> Result<f64> {
    check_r(r)?;
    let r = r as f64;
    Ok(r.powf(2.5) * 2f64.powf(3.0 * r - 2.0) * E.powf(1.5 * r - 2.0) / 3f64.sqrt())
}

/// `r 2^{2r+2} e^r / (3p)`, the size floor shared by all the lemmas.
pub fn k_threshold_base(r: usize, p: f64) -> Result<f64> {
    check_r(r)?;
    check_p(p)?;
    let rf = r as f64;
    Ok(rf * 2f64.powf(2.0 * rf + 2.0) * E.powf(rf) / (3.0 * p))
}

/// Planted size above which Algorithm 1 yields a set of size `(1 − ε)k`.
pub fn k_threshold_large(n: usize, r: usize, p: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::param(format!("ε = {eps} outside (0, 1)")));
    }
    let base = k_threshold_base(r, p)?;
    let rf = r as f64;
    let e = 1.0 / (rf - 0.5);
    let second = (2.0 * rf * f_const(r)?).powf(e) * (n as f64).powf((rf - 1.0) * e)
        / (eps.powf(e) * p.powf(1.0 / (2.0 * rf - 1.0)));
    Ok(base.max(second))
}

/// Planted size above which the planted set appears in Algorithm 1's list.
/// The logarithm is natural.
pub fn k_threshold_exact(n: usize, r: usize, p: f64) -> Result<f64> {
    let base = k_threshold_base(r, p)?;
    if n < 2 {
        return Err(Error::param("n must be at least 2"));
    }
    let rf = r as f64;
    let e = 1.0 / (rf - 0.5);
    let second = (8.0 * f_const(r)?).powf(e) * (n as f64).powf((rf - 1.0) * e)
        / p.powf(3.0 / (2.0 * rf - 1.0));
    let third = (rf - 1.0) * (16.0 * (n as f64).ln() / p).powf(1.0 / (rf - 1.0));
    Ok(base.max(second).max(third))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{generate_planted, ModelParams};
    use crate::sdp::planted_reference_solution;

    #[test]
    fn constants() {
        assert!((f_const(2).unwrap() - 142.046).abs() < 1e-2);
        assert!((f_const(3).unwrap() - 14034.3).abs() < 0.1);
        assert!(f_const(1).is_err());
        assert!((k_threshold_base(2, 0.5).unwrap() - 630.5).abs() < 0.1);
        let third = 16.0 * 1e6f64.ln();
        assert!((third - 221.05).abs() < 0.01);
        assert!(k_threshold_exact(1_000_000, 2, 1.0).unwrap() >= third);
    }

    #[test]
    fn reference_balls() {
        let inst = generate_planted(ModelParams::new(10, 4, 2, 0.7), 5).unwrap();
        let sol = planted_reference_solution(&inst).unwrap();
        let s = inst.planted_set();
        let u = s.iter().next().unwrap();
        let b = ball(&sol, &BallSpec::new(u, 1, 0.9, inst.hypergraph().vertices())).unwrap();
        assert_eq!(b, s.iter().map(VertexSet::singleton).collect::<Vec<_>>());
        let w = inst.complement().iter().next().unwrap();
        let b = ball(&sol, &BallSpec::new(w, 1, 0.75, inst.hypergraph().vertices())).unwrap();
        assert_eq!(b, vec![VertexSet::singleton(w)]);
        assert!(ball(&sol, &BallSpec::new(w, 4, 0.75, s)).is_err());
        assert!(ball(&sol, &BallSpec::new(w, 1, 1.0, s)).is_err());
    }

    #[test]
    fn greedy_examples() {
        let h = Hypergraph::new(5, 2, []).unwrap();
        let order: Vec<usize> = (0..5).collect();
        assert_eq!(greedy_complete(&h, VertexSet::EMPTY, &order).unwrap(), h.vertices());
        let h = Hypergraph::from_lists(6, 3, &[&[0, 1, 2]]).unwrap();
        let out = greedy_complete(&h, VertexSet::from_vertices([0, 1]), &(0..6).collect::<Vec<_>>()).unwrap();
        assert_eq!(out.to_vec(), vec![0, 1, 3, 4, 5]);
        assert_eq!(greedy_complete(&h, out, &(0..6).collect::<Vec<_>>()).unwrap(), out);
        assert!(greedy_complete(&h, VertexSet::from_vertices([0, 1, 2]), &order).is_err());
        assert!(greedy_complete(&h, VertexSet::EMPTY, &[0, 1]).is_err());
    }

    #[test]
    fn edgeless_roots_return_everything() {
        let h = Hypergraph::new(6, 2, []).unwrap();
        let sol = crate::sdp::orthonormal_solution(6, 2).unwrap();
        let rep = algorithm_one(&h, &sol, 1, 0.75, &RoundingOptions::default()).unwrap();
        assert!(rep.roots.iter().all(|o| o.candidate == Some(h.vertices())));
        assert_eq!(rep.candidates.len(), 1);
    }

    #[test]
    fn mode_parameters() {
        assert_eq!(RoundingMode::LargeIs.params(2), (1, 0.75));
        assert_eq!(RoundingMode::ExactRecovery.params(3), (2, 0.75));
    }
}
