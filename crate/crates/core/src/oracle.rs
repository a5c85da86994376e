//! Exhaustive ground truth for small hypergraphs.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::subset::{combinations, VertexSet};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleLimits {
    pub max_n_exact: usize,
    pub time_budget: Duration,
}

impl OracleLimits {
    /// 25 vertices for graphs, 30 for higher uniformity; one minute per query.
    pub fn for_uniformity(r: usize) -> Self {
        OracleLimits {
            max_n_exact: if r <= 2 { 25 } else { 30 },
            time_budget: Duration::from_secs(60),
        }
    }
}

/// Payload of [`Error::Timeout`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleTimeout {
    /// Largest independent set found before the budget ran out.
    pub best: VertexSet,
    /// `true` when `|best|` is only known to be a lower bound on the maximum;
    /// `false` when the size is optimal but the tie-break did not finish.
    pub lower_bound: bool,
    pub elapsed: Duration,
}

struct Search<'a> {
    h: &'a Hypergraph,
    deadline: Instant,
    start: Instant,
    nodes: u64,
    best: VertexSet,
    timed_out: bool,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes % 1024 == 0 && Instant::now() >= self.deadline {
            self.timed_out = true;
        }
        self.timed_out
    }

    /// Extends `chosen` with vertices of `cand` (each individually addable),
    /// stopping early once `stop_at` is reached.
    fn branch(&mut self, chosen: VertexSet, cand: VertexSet, stop_at: usize) {
        if self.tick() {
            return;
        }
        if chosen.len() > self.best.len() {
            self.best = chosen;
        }
        if self.best.len() >= stop_at || chosen.len() + cand.len() <= self.best.len() {
            return;
        }
        let pool = chosen.union(cand);
        let pick = cand
            .iter()
            .map(|v| {
                let deg = self.h.edges_at(v).filter(|e| e.is_subset(pool)).count();
                (deg, v)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        let Some((deg, v)) = pick else { return };
        if deg == 0 {
            // No edge survives inside the pool: take everything.
            if pool.len() > self.best.len() {
                self.best = pool;
            }
            return;
        }
        let with_v = chosen.with(v);
        let next: VertexSet = cand
            .without(v)
            .iter()
            .filter(|&w| self.h.can_extend(with_v, w))
            .collect();
        self.branch(with_v, next, stop_at);
        if self.timed_out {
            return;
        }
        self.branch(chosen, cand.without(v), stop_at);
    }
}

fn addable(h: &Hypergraph, chosen: VertexSet, pool: VertexSet) -> VertexSet {
    pool.difference(chosen)
        .iter()
        .filter(|&w| h.can_extend(chosen, w))
        .collect()
}

/// A maximum independent set; among all maximum sets the lexicographically
/// smallest one.
pub fn max_independent_set(h: &Hypergraph, limits: &OracleLimits) -> Result<VertexSet> {
    if h.n() > limits.max_n_exact {
        return Err(Error::param(format!(
            "n = {} exceeds the exact-search cap {}",
            h.n(),
            limits.max_n_exact
        )));
    }
    let start = Instant::now();
    let mut s = Search {
        h,
        deadline: start + limits.time_budget,
        start,
        nodes: 0,
        best: VertexSet::EMPTY,
        timed_out: false,
    };
    let all = h.vertices();
    s.branch(VertexSet::EMPTY, all, usize::MAX);
    if s.timed_out {
        return Err(Error::Timeout(OracleTimeout {
            best: s.best,
            lower_bound: true,
            elapsed: start.elapsed(),
        }));
    }
    let alpha = s.best.len();
    let any_max = s.best;

    // Commit vertices in ascending order whenever a maximum set survives.
    let mut chosen = VertexSet::EMPTY;
    let mut cand = all;
    for v in all.iter() {
        if chosen.len() == alpha {
            break;
        }
        if !cand.contains(v) {
            continue;
        }
        let with_v = chosen.with(v);
        let rest = addable(h, with_v, cand.without(v));
        s.best = VertexSet::EMPTY;
        s.branch(with_v, rest, alpha);
        if s.timed_out {
            return Err(Error::Timeout(OracleTimeout {
                best: any_max,
                lower_bound: false,
                elapsed: s.start.elapsed(),
            }));
        }
        if s.best.len() == alpha {
            chosen = with_v;
            cand = rest;
        } else {
            cand = cand.without(v);
        }
    }
    debug_assert_eq!(chosen.len(), alpha);
    Ok(chosen)
}

/// All `r`-subsets of `{0..n}` meeting both `s` and its complement, in
/// lexicographic order.
pub fn enumerate_boundary(n: usize, r: usize, s: VertexSet) -> Result<Vec<VertexSet>> {
    if s.max().is_some_and(|m| m >= n) {
        return Err(Error::param(format!("set {s} is not inside 0..{n}")));
    }
    let comp = VertexSet::full(n).difference(s);
    let mut out: Vec<VertexSet> = combinations(VertexSet::full(n), r)
        .filter(|e| !e.is_disjoint(s) && !e.is_disjoint(comp))
        .collect();
    out.sort();
    Ok(out)
}
