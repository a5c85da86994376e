//! Uniform hypergraphs and the semi-random planted independent set model.
//!
//! An instance is generated in four steps, each drawing from its own
//! labeled random stream so that changing one step never perturbs another:
//!
//! 1. a hidden set `S` of `k` vertices (a seeded permutation of `0..n`);
//! 2. every `r`-subset crossing `S` and `V∖S` becomes an edge with probability `p`;
//! 3. edges inside `V∖S` according to an [`InsideStrategy`];
//! 4. a monotone adversary adds edges anywhere except inside `S`
//!    ([`AdversaryStrategy`]).
//!
//! Edges keep their step of origin. If a later step proposes an edge that
//! already exists it is skipped, so the three groups always partition the
//! edge set.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::subset::{binomial, combinations, VertexSet, MAX_VERTICES};

/// An `r`-uniform hypergraph on vertices `0..n`.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    /// Sorted lexicographically, no duplicates.
    edges: Vec<VertexSet>,
    edge_set: HashSet<VertexSet>,
    incidence: Vec<Vec<usize>>,
}

impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.edges == other.edges
    }
}

impl Eq for Hypergraph {}

impl Hypergraph {
    /// Builds a hypergraph, silently dropping duplicate edges.
    pub fn new<I: IntoIterator<Item = VertexSet>>(n: usize, r: usize, edges: I) -> Result<Self> {
        if r < 2 {
            return Err(Error::param(format!("uniformity r = {r} must be at least 2")));
        }
        if n < r {
            return Err(Error::param(format!("need n ≥ r, got n = {n}, r = {r}")));
        }
        if n > MAX_VERTICES {
            return Err(Error::param(format!("n = {n} exceeds {MAX_VERTICES}")));
        }
        let mut list: Vec<VertexSet> = Vec::new();
        for e in edges {
            if e.len() != r {
                return Err(Error::param(format!("edge {e} does not have {r} vertices")));
            }
            if e.max().is_some_and(|m| m >= n) {
                return Err(Error::param(format!("edge {e} has a vertex ≥ n = {n}")));
            }
            list.push(e);
        }
        list.sort();
        list.dedup();
        let edge_set = list.iter().copied().collect();
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in list.iter().enumerate() {
            for v in e.iter() {
                incidence[v].push(i);
            }
        }
        Ok(Hypergraph {
            n,
            r,
            edges: list,
            edge_set,
            incidence,
        })
    }

    /// Convenience constructor from vertex lists.
    pub fn from_lists(n: usize, r: usize, edges: &[&[usize]]) -> Result<Self> {
        let mut sets = Vec::with_capacity(edges.len());
        for e in edges {
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::param(format!("vertex {v} ≥ n = {n}")));
            }
            let s = VertexSet::from_vertices(e.iter().copied());
            if s.len() != e.len() {
                return Err(Error::param(format!("edge {e:?} repeats a vertex")));
            }
            sets.push(s);
        }
        Self::new(n, r, sets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn edges(&self) -> &[VertexSet] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_edge(&self, e: VertexSet) -> bool {
        self.edge_set.contains(&e)
    }

    /// Edges incident to `v`.
    pub fn edges_at(&self, v: usize) -> impl Iterator<Item = VertexSet> + '_ {
        self.incidence[v].iter().map(|&i| self.edges[i])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    fn check_set(&self, t: VertexSet) -> Result<()> {
        match t.max() {
            Some(m) if m >= self.n => Err(Error::param(format!(
                "vertex {m} out of range for n = {}",
                self.n
            ))),
            _ => Ok(()),
        }
    }

    /// True iff no edge lies entirely inside `t`.
    pub fn is_independent(&self, t: VertexSet) -> Result<bool> {
        self.check_set(t)?;
        Ok(self.is_independent_unchecked(t))
    }

    pub(crate) fn is_independent_unchecked(&self, t: VertexSet) -> bool {
        if t.len() < self.r {
            return true;
        }
        !self.edges.iter().any(|e| e.is_subset(t))
    }

    /// Whether `t ∪ {v}` stays independent, given that `t` already is.
    pub fn can_extend(&self, t: VertexSet, v: usize) -> bool {
        let grown = t.with(v);
        !self.edges_at(v).any(|e| e.is_subset(grown))
    }

    /// Number of edges `e ∋ v` with `e ∖ {v} ⊆ t`.
    pub fn restricted_degree(&self, v: usize, t: VertexSet) -> Result<usize> {
        if v >= self.n {
            return Err(Error::param(format!("vertex {v} out of range")));
        }
        self.check_set(t)?;
        if t.contains(v) {
            return Err(Error::param(format!("vertex {v} must not belong to the restriction set")));
        }
        let allowed = t.with(v);
        Ok(self.edges_at(v).filter(|e| e.is_subset(allowed)).count())
    }
}

/// `|∂(S)| = C(n,r) − C(k,r) − C(n−k,r)`: the `r`-subsets meeting both `S` and `V∖S`.
pub fn boundary_size(n: usize, k: usize, r: usize) -> u64 {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    binomial(n, r) - binomial(k, r) - binomial(n - k, r)
}

/// Step 3 of the model: how edges inside `V∖S` are produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InsideStrategy {
    None,
    /// Each `r`-subset of `V∖S` independently with probability `q`.
    Uniform(f64),
    /// Pick an `m`-subset `M ⊆ V∖S`; add every `r`-subset of `V∖S` disjoint from `M`.
    PlantedCliqueConfuser(usize),
}

/// Step 4 of the model: the monotone adversary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AdversaryStrategy {
    None,
    /// Each eligible absent edge (in `∂(S)` or inside `V∖S`) with probability `q`.
    RandomMonotone(f64),
    /// Every crossing edge through the `t` lowest-degree vertices of `V∖S`.
    DegreeBoost(usize),
}

fn parse_call(s: &str) -> Option<(&str, Option<&str>)> {
    let s = s.trim();
    if let Some(open) = s.find('(') {
        let close = s.strip_suffix(')')?;
        Some((&s[..open], Some(&close[open + 1..])))
    } else if let Some((name, arg)) = s.split_once(':') {
        Some((name, Some(arg)))
    } else {
        Some((s, None))
    }
}

fn parse_prob(arg: Option<&str>, what: &str) -> Result<f64> {
    let q: f64 = arg
        .ok_or_else(|| Error::param(format!("{what} needs a probability argument")))?
        .trim()
        .parse()
        .map_err(|_| Error::param(format!("{what}: bad probability")))?;
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param(format!("{what}: probability {q} outside [0, 1]")));
    }
    Ok(q)
}

fn parse_count(arg: Option<&str>, what: &str) -> Result<usize> {
    arg.ok_or_else(|| Error::param(format!("{what} needs a count argument")))?
        .trim()
        .parse()
        .map_err(|_| Error::param(format!("{what}: bad count")))
}

impl fmt::Display for InsideStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InsideStrategy::None => write!(f, "none"),
            InsideStrategy::Uniform(q) => write!(f, "uniform({q})"),
            InsideStrategy::PlantedCliqueConfuser(m) => write!(f, "planted_clique_confuser({m})"),
        }
    }
}

impl FromStr for InsideStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = parse_call(s).ok_or_else(|| Error::param(format!("bad strategy {s:?}")))?;
        match name.trim() {
            "none" => Ok(InsideStrategy::None),
            "uniform" => Ok(InsideStrategy::Uniform(parse_prob(arg, "uniform")?)),
            "planted_clique_confuser" | "confuser" => Ok(InsideStrategy::PlantedCliqueConfuser(
                parse_count(arg, "planted_clique_confuser")?,
            )),
            other => Err(Error::param(format!("unknown inside strategy {other:?}"))),
        }
    }
}

impl fmt::Display for AdversaryStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdversaryStrategy::None => write!(f, "none"),
            AdversaryStrategy::RandomMonotone(q) => write!(f, "random_monotone({q})"),
            AdversaryStrategy::DegreeBoost(t) => write!(f, "degree_boost({t})"),
        }
    }
}

impl FromStr for AdversaryStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = parse_call(s).ok_or_else(|| Error::param(format!("bad strategy {s:?}")))?;
        match name.trim() {
            "none" => Ok(AdversaryStrategy::None),
            "random_monotone" => Ok(AdversaryStrategy::RandomMonotone(parse_prob(
                arg,
                "random_monotone",
            )?)),
            "degree_boost" => Ok(AdversaryStrategy::DegreeBoost(parse_count(arg, "degree_boost")?)),
            other => Err(Error::param(format!("unknown adversary strategy {other:?}"))),
        }
    }
}

macro_rules! serde_via_string {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_via_string!(InsideStrategy);
serde_via_string!(AdversaryStrategy);

/// Parameters of the planted model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub p: f64,
    pub inside: InsideStrategy,
    pub adversary: AdversaryStrategy,
}

impl ModelParams {
    /// Parameters with no inside edges and no adversary.
    pub fn new(n: usize, k: usize, r: usize, p: f64) -> Self {
        ModelParams {
            n,
            k,
            r,
            p,
            inside: InsideStrategy::None,
            adversary: AdversaryStrategy::None,
        }
    }

    pub fn with_inside(mut self, inside: InsideStrategy) -> Self {
        self.inside = inside;
        self
    }

    pub fn with_adversary(mut self, adversary: AdversaryStrategy) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ModelParams { n, k, r, p, .. } = *self;
        if r < 2 {
            return Err(Error::param(format!("r = {r} must be at least 2")));
        }
        if n < r || n > MAX_VERTICES {
            return Err(Error::param(format!("n = {n} outside {r}..={MAX_VERTICES}")));
        }
        if k < 1 || 2 * k > n {
            return Err(Error::param(format!("k = {k} must satisfy 1 ≤ k ≤ n/2 = {}", n / 2)));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("p = {p} outside [0, 1]")));
        }
        match self.inside {
            InsideStrategy::Uniform(q) if !(0.0..=1.0).contains(&q) => {
                return Err(Error::param(format!("inside probability {q} outside [0, 1]")))
            }
            InsideStrategy::PlantedCliqueConfuser(m) if m > n - k => {
                return Err(Error::param(format!("confuser size {m} exceeds |V∖S| = {}", n - k)))
            }
            _ => {}
        }
        self.validate_adversary(self.adversary)
    }

    fn validate_adversary(&self, adversary: AdversaryStrategy) -> Result<()> {
        match adversary {
            AdversaryStrategy::RandomMonotone(q) if !(0.0..=1.0).contains(&q) => Err(
                Error::param(format!("adversary probability {q} outside [0, 1]")),
            ),
            AdversaryStrategy::DegreeBoost(t) if t > self.n - self.k => Err(Error::param(format!(
                "degree_boost({t}) exceeds |V∖S| = {}",
                self.n - self.k
            ))),
            _ => Ok(()),
        }
    }
}

/// Labels of the independent random streams derived from one seed.
mod stream {
    pub const PERMUTATION: u64 = 1;
    pub const CROSS: u64 = 2;
    pub const INSIDE: u64 = 3;
    pub const ADVERSARY: u64 = 4;
}

fn rng_for(seed: u64, label: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label);
    rng
}

/// A generated instance with the provenance of every edge.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    hypergraph: Hypergraph,
    planted_set: VertexSet,
    random_cross_edges: Vec<VertexSet>,
    inside_edges: Vec<VertexSet>,
    adversarial_edges: Vec<VertexSet>,
    params: ModelParams,
    seed: u64,
}

impl PlantedInstance {
    pub fn hypergraph(&self) -> &Hypergraph {
        &self.hypergraph
    }

    pub fn planted_set(&self) -> VertexSet {
        self.planted_set
    }

    /// `V ∖ S`.
    pub fn complement(&self) -> VertexSet {
        VertexSet::full(self.params.n).difference(self.planted_set)
    }

    /// Edges sampled in step 2, before any adversarial action.
    pub fn random_cross_edges(&self) -> &[VertexSet] {
        &self.random_cross_edges
    }

    pub fn inside_edges(&self) -> &[VertexSet] {
        &self.inside_edges
    }

    pub fn adversarial_edges(&self) -> &[VertexSet] {
        &self.adversarial_edges
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Assembles an instance from explicit edge groups, checking every model invariant.
    pub fn from_parts(
        params: ModelParams,
        seed: u64,
        planted_set: VertexSet,
        random_cross: Vec<VertexSet>,
        inside: Vec<VertexSet>,
        adversarial: Vec<VertexSet>,
    ) -> Result<Self> {
        params.validate()?;
        let n = params.n;
        if planted_set.len() != params.k || planted_set.max().is_some_and(|m| m >= n) {
            return Err(Error::Invariant(format!(
                "planted set {planted_set} is not a {}-subset of 0..{n}",
                params.k
            )));
        }
        let complement = VertexSet::full(n).difference(planted_set);
        let crossing = |e: VertexSet| {
            !e.intersection(planted_set).is_empty() && !e.intersection(complement).is_empty()
        };
        for &e in &random_cross {
            if !crossing(e) {
                return Err(Error::Invariant(format!("random cross edge {e} does not cross S")));
            }
        }
        for &e in &inside {
            if !e.is_subset(complement) {
                return Err(Error::Invariant(format!("inside edge {e} leaves V∖S")));
            }
        }
        for &e in &adversarial {
            if e.is_subset(planted_set) {
                return Err(Error::Invariant(format!("adversarial edge {e} lies inside S")));
            }
        }
        let mut seen = HashSet::new();
        for &e in random_cross.iter().chain(&inside).chain(&adversarial) {
            if !seen.insert(e) {
                return Err(Error::Invariant(format!("edge {e} appears in more than one group")));
            }
        }
        let mut groups = [random_cross, inside, adversarial];
        for g in &mut groups {
            g.sort();
        }
        let hypergraph = Hypergraph::new(n, params.r, groups.iter().flatten().copied())?;
        if !hypergraph.is_independent_unchecked(planted_set) {
            return Err(Error::Invariant("planted set is not independent".into()));
        }
        let [random_cross_edges, inside_edges, adversarial_edges] = groups;
        Ok(PlantedInstance {
            hypergraph,
            planted_set,
            random_cross_edges,
            inside_edges,
            adversarial_edges,
            params,
            seed,
        })
    }
}

/// Samples an instance of the planted model. Deterministic in `(params, seed)`.
pub fn generate_planted(params: ModelParams, seed: u64) -> Result<PlantedInstance> {
    params.validate()?;
    let ModelParams { n, k, r, p, .. } = params;

    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng_for(seed, stream::PERMUTATION));
    let planted = VertexSet::from_vertices(perm[..k].iter().copied());
    let complement = VertexSet::full(n).difference(planted);

    let mut rng = rng_for(seed, stream::CROSS);
    let mut cross = Vec::new();
    for e in combinations(VertexSet::full(n), r) {
        if e.is_subset(planted) || e.is_subset(complement) {
            continue;
        }
        let u: f64 = rng.gen();
        if u < p {
            cross.push(e);
        }
    }

    let mut rng = rng_for(seed, stream::INSIDE);
    let inside: Vec<VertexSet> = match params.inside {
        InsideStrategy::None => Vec::new(),
        InsideStrategy::Uniform(q) => combinations(complement, r)
            .filter(|_| rng.gen::<f64>() < q)
            .collect(),
        InsideStrategy::PlantedCliqueConfuser(m) => {
            let mut rest = complement.to_vec();
            rest.shuffle(&mut rng);
            let hidden = VertexSet::from_vertices(rest[..m].iter().copied());
            combinations(complement.difference(hidden), r).collect()
        }
    };

    let base = PlantedInstance::from_parts(
        params.with_adversary(AdversaryStrategy::None),
        seed,
        planted,
        cross,
        inside,
        Vec::new(),
    )?;
    apply_adversary(&base, params.adversary, seed)
}

/// Lets a monotone adversary add edges outside `C(S, r)`.
///
/// The returned instance's edge set is a superset of the input's; the
/// random cross group is untouched and new edges go to the adversarial group.
pub fn apply_adversary(
    instance: &PlantedInstance,
    strategy: AdversaryStrategy,
    seed: u64,
) -> Result<PlantedInstance> {
    let params = instance.params.with_adversary(strategy);
    params.validate_adversary(strategy)?;
    let h = &instance.hypergraph;
    let (n, r) = (h.n(), h.r());
    let planted = instance.planted_set;
    let complement = instance.complement();

    let proposed: Vec<VertexSet> = match strategy {
        AdversaryStrategy::None => Vec::new(),
        AdversaryStrategy::RandomMonotone(q) => {
            let mut rng = rng_for(seed, stream::ADVERSARY);
            combinations(VertexSet::full(n), r)
                .filter(|&e| !e.is_subset(planted) && !h.contains_edge(e))
                .filter(|_| rng.gen::<f64>() < q)
                .collect()
        }
        AdversaryStrategy::DegreeBoost(t) => {
            let mut outside = complement.to_vec();
            outside.sort_by_key(|&v| (h.degree(v), v));
            let boosted = VertexSet::from_vertices(outside[..t].iter().copied());
            combinations(VertexSet::full(n), r)
                .filter(|&e| {
                    !e.is_disjoint(boosted)
                        && !e.is_disjoint(planted)
                        && !e.is_disjoint(complement)
                        && !h.contains_edge(e)
                })
                .collect()
        }
    };

    if let Some(bad) = proposed.iter().find(|e| e.is_subset(planted)) {
        return Err(Error::Invariant(format!("adversary proposed edge {bad} inside S")));
    }
    let mut adversarial = instance.adversarial_edges.clone();
    adversarial.extend(proposed);
    PlantedInstance::from_parts(
        params,
        instance.seed,
        planted,
        instance.random_cross_edges.clone(),
        instance.inside_edges.clone(),
        adversarial,
    )
}

/// Version tag of the instance file layout.
pub const INSTANCE_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct EdgeGroups {
    random_cross: Vec<VertexSet>,
    inside: Vec<VertexSet>,
    adversarial: Vec<VertexSet>,
}

#[derive(Serialize, Deserialize)]
struct Strategies {
    inside: InsideStrategy,
    adversary: AdversaryStrategy,
}

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    schema_version: u32,
    n: usize,
    k: usize,
    r: usize,
    p: f64,
    seed: u64,
    planted_set: VertexSet,
    edges: EdgeGroups,
    strategies: Strategies,
}

impl PlantedInstance {
    /// Canonical JSON encoding: fixed key order, edges sorted within each group.
    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            schema_version: INSTANCE_SCHEMA_VERSION,
            n: self.params.n,
            k: self.params.k,
            r: self.params.r,
            p: self.params.p,
            seed: self.seed,
            planted_set: self.planted_set,
            edges: EdgeGroups {
                random_cross: self.random_cross_edges.clone(),
                inside: self.inside_edges.clone(),
                adversarial: self.adversarial_edges.clone(),
            },
            strategies: Strategies {
                inside: self.params.inside,
                adversary: self.params.adversary,
            },
        };
        let mut s = serde_json::to_string(&file).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        if file.schema_version != INSTANCE_SCHEMA_VERSION {
            return Err(Error::Format(format!(
                "unsupported instance schema version {}",
                file.schema_version
            )));
        }
        let params = ModelParams {
            n: file.n,
            k: file.k,
            r: file.r,
            p: file.p,
            inside: file.strategies.inside,
            adversary: file.strategies.adversary,
        };
        PlantedInstance::from_parts(
            params,
            file.seed,
            file.planted_set,
            file.edges.random_cross,
            file.edges.inside,
            file.edges.adversarial,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        VertexSet::from_vertices(v.iter().copied())
    }

    #[test]
    fn independence() {
        let h = Hypergraph::from_lists(4, 3, &[&[0, 1, 2]]).unwrap();
        assert!(!h.is_independent(set(&[0, 1, 2])).unwrap());
        assert!(h.is_independent(set(&[0, 1])).unwrap());
        assert!(h.is_independent(set(&[0, 1, 3])).unwrap());
        assert!(h.is_independent(set(&[4])).is_err());
    }

    #[test]
    fn restricted_degrees() {
        let h = Hypergraph::from_lists(4, 3, &[&[0, 1, 2], &[0, 1, 3], &[1, 2, 3]]).unwrap();
        assert_eq!(h.restricted_degree(0, set(&[1, 2, 3])).unwrap(), 2);
        assert_eq!(h.restricted_degree(0, set(&[1, 2])).unwrap(), 1);
        assert!(h.restricted_degree(0, set(&[0, 1])).is_err());
        let empty = Hypergraph::new(5, 2, []).unwrap();
        assert_eq!(empty.restricted_degree(0, set(&[1, 2, 3])).unwrap(), 0);
    }

    #[test]
    fn construction_validates() {
        assert!(Hypergraph::new(3, 1, []).is_err());
        assert!(Hypergraph::new(2, 3, []).is_err());
        assert!(Hypergraph::from_lists(3, 2, &[&[0, 3]]).is_err());
        assert!(Hypergraph::from_lists(3, 2, &[&[0, 1, 2]]).is_err());
        let h = Hypergraph::from_lists(3, 2, &[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(h.num_edges(), 1);
    }

    #[test]
    fn boundary_sizes() {
        assert_eq!(boundary_size(2, 1, 2), 1);
        assert_eq!(boundary_size(4, 2, 2), 4);
        assert_eq!(boundary_size(5, 2, 3), 9);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(6, 4, 2, 0.5).validate().is_err());
        assert!(ModelParams::new(6, 0, 2, 0.5).validate().is_err());
        assert!(ModelParams::new(6, 3, 1, 0.5).validate().is_err());
        assert!(ModelParams::new(6, 3, 2, 1.5).validate().is_err());
        assert!(ModelParams::new(6, 3, 2, -0.1).validate().is_err());
        assert!(ModelParams::new(6, 3, 2, 0.5).validate().is_ok());
        assert!(generate_planted(ModelParams::new(6, 4, 2, 0.5), 0).is_err());
        let bad = ModelParams::new(8, 3, 2, 0.5).with_adversary(AdversaryStrategy::DegreeBoost(6));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn saturated_and_empty_cross() {
        for seed in 0..5 {
            let full = generate_planted(ModelParams::new(6, 3, 2, 1.0), seed).unwrap();
            assert_eq!(full.random_cross_edges().len(), 9);
            let none = generate_planted(ModelParams::new(6, 3, 2, 0.0), seed).unwrap();
            assert!(none.random_cross_edges().is_empty());
            assert!(none.hypergraph().edges().is_empty());
        }
    }

    #[test]
    fn strategy_strings() {
        for s in ["none", "uniform(0.25)", "planted_clique_confuser(3)"] {
            let parsed: InsideStrategy = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        for s in ["none", "random_monotone(0.3)", "degree_boost(2)"] {
            let parsed: AdversaryStrategy = s.parse().unwrap();
            assert_eq!(parsed.to_string(), s);
        }
        assert_eq!("uniform:0.5".parse::<InsideStrategy>().unwrap(), InsideStrategy::Uniform(0.5));
        assert!("uniform(2)".parse::<InsideStrategy>().is_err());
        assert!("sideways".parse::<AdversaryStrategy>().is_err());
    }

    #[test]
    fn identity_adversary() {
        let inst = generate_planted(ModelParams::new(10, 4, 3, 0.4), 3).unwrap();
        let same = apply_adversary(&inst, AdversaryStrategy::None, 99).unwrap();
        assert_eq!(same, inst);
    }

    #[test]
    fn saturated_boundary_only_grows_inside() {
        let inst = generate_planted(ModelParams::new(8, 3, 2, 1.0), 11).unwrap();
        let adv = apply_adversary(&inst, AdversaryStrategy::RandomMonotone(1.0), 11).unwrap();
        let comp = inst.complement();
        assert!(adv.adversarial_edges().iter().all(|e| e.is_subset(comp)));
        assert_eq!(adv.adversarial_edges().len(), 10); // C(5, 2)
    }

    #[test]
    fn degree_boost_saturates_chosen_vertices() {
        let inst = generate_planted(ModelParams::new(10, 4, 2, 0.3), 5).unwrap();
        let adv = apply_adversary(&inst, AdversaryStrategy::DegreeBoost(2), 5).unwrap();
        let h = adv.hypergraph();
        let s = adv.planted_set();
        let boosted: Vec<usize> = adv
            .complement()
            .iter()
            .filter(|&v| h.restricted_degree(v, s).unwrap() == 4)
            .collect();
        assert!(boosted.len() >= 2);
        assert!(h.is_independent(s).unwrap());
    }

    #[test]
    fn confuser_makes_complement_dense() {
        let params = ModelParams::new(12, 4, 2, 0.0).with_inside(InsideStrategy::PlantedCliqueConfuser(3));
        let inst = generate_planted(params, 1).unwrap();
        // C(8 - 3, 2) edges avoid the hidden 3-subset
        assert_eq!(inst.inside_edges().len(), 10);
    }

    #[test]
    fn json_is_canonical() {
        let params = ModelParams::new(9, 3, 3, 0.5)
            .with_inside(InsideStrategy::Uniform(0.2))
            .with_adversary(AdversaryStrategy::RandomMonotone(0.1));
        let inst = generate_planted(params, 77).unwrap();
        let text = inst.to_json();
        assert!(text.starts_with("{\"schema_version\":1,\"n\":9,\"k\":3,\"r\":3,\"p\":0.5,\"seed\":77,"));
        let back = PlantedInstance::from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn json_rejects_broken_invariants() {
        let inst = generate_planted(ModelParams::new(6, 3, 2, 1.0), 2).unwrap();
        let s = inst.planted_set().to_vec();
        let inside_s = format!("[[{},{}]]", s[0], s[1]);
        let text = inst
            .to_json()
            .replace("\"adversarial\":[]", &format!("\"adversarial\":{inside_s}"));
        assert!(PlantedInstance::from_json(&text).is_err());
    }
}
