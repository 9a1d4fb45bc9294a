//! Shallow minors: the star-contraction sequence for bipartite-like graphs,
//! exact and greedy grad (`∇_r`) computations, clique counting and the
//! resulting density bound checks.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{degeneracy_order, Graph, VertexSet};

/// Vertex limit of [`grad_exact`].
pub const GRAD_EXACT_LIMIT: usize = 10;
/// Largest `2^degeneracy * n` [`count_cliques`] will enumerate.
pub const CLIQUE_BUDGET: u64 = 1 << 32;

pub type Rational = Ratio<u64>;

fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionStep {
    pub y_vertex: usize,
    pub x_target: usize,
    /// Edges inside the x-side after this step.
    pub x_edges: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionTrace {
    pub steps: Vec<ContractionStep>,
    pub initial_x_edges: usize,
    /// The contracted graph over the surviving vertices; `final_ids[i]` is
    /// the original id of its vertex `i`.
    #[serde(skip)]
    pub final_graph: Graph,
    pub final_ids: Vec<usize>,
    pub x_side: VertexSet,
}

impl ContractionTrace {
    /// Surviving y-vertices.
    pub fn survivors(&self) -> Vec<usize> {
        self.final_ids.iter().copied().filter(|&v| !self.x_side.contains(v)).collect()
    }

    /// Neighborhood of an original vertex in the final graph, as original ids.
    pub fn final_neighbors(&self, v: usize) -> Vec<usize> {
        let i = self.final_ids.binary_search(&v).expect("vertex survived");
        self.final_graph.neighbors(i).iter().map(|&j| self.final_ids[j]).collect()
    }
}

/// Contracts y-vertices into x-vertices while some y-vertex sees two
/// non-adjacent x-vertices. Each step adds at least one x-side edge.
pub fn run_contraction_sequence(g: &Graph, x: &VertexSet) -> Result<ContractionTrace> {
    if x.iter().any(|v| v >= g.n()) {
        return Err(Error::contract("x contains a vertex outside the graph"));
    }
    for (u, v) in g.edges() {
        if !x.contains(u) && !x.contains(v) {
            return Err(Error::contract(format!("edge {u}-{v} lies inside the y-side")));
        }
    }
    let mut adj: Vec<BTreeSet<usize>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut alive = vec![true; g.n()];
    let mut x_edges = g.edges().filter(|&(u, v)| x.contains(u) && x.contains(v)).count();
    let initial_x_edges = x_edges;
    let mut steps = Vec::new();
    // A y-vertex's neighborhood never changes, and x-side edges are only
    // added, so once a y-vertex sees a clique it stays that way: one pass in
    // id order always contracts the lowest eligible y-vertex.
    for y in g.vertices().filter(|&v| !x.contains(v)) {
        let nbrs: Vec<usize> = adj[y].iter().copied().collect();
        let target = nbrs
            .iter()
            .copied()
            .find(|&u| nbrs.iter().any(|&w| w != u && !adj[u].contains(&w)));
        let Some(u) = target else { continue };
        for &w in &nbrs {
            adj[w].remove(&y);
            if w != u && adj[u].insert(w) {
                adj[w].insert(u);
                x_edges += 1;
            }
        }
        adj[y].clear();
        alive[y] = false;
        steps.push(ContractionStep {
            y_vertex: y,
            x_target: u,
            x_edges,
        });
    }
    let final_ids: Vec<usize> = g.vertices().filter(|&v| alive[v]).collect();
    let local = |v: usize| final_ids.binary_search(&v).unwrap();
    let edges: Vec<(usize, usize)> = final_ids
        .iter()
        .flat_map(|&v| adj[v].iter().filter(move |&&w| w > v).map(move |&w| (v, w)))
        .map(|(v, w)| (local(v), local(w)))
        .collect();
    Ok(ContractionTrace {
        steps,
        initial_x_edges,
        final_graph: Graph::from_edges(final_ids.len(), edges)?,
        final_ids,
        x_side: x.clone(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GradEstimate {
    pub rank: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub value: Rational,
    /// Branch sets of the minor realizing `value`.
    pub witness: Vec<VertexSet>,
    pub exact: bool,
}

impl GradEstimate {
    /// Checks that the witness is a packing of connected branch sets of
    /// radius at most `rank` whose minor has density `value`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut used = VertexSet::new();
        for b in &self.witness {
            if b.is_empty() || !used.is_disjoint(b) {
                return Err(Error::Invariant("branch sets must be nonempty and disjoint".into()));
            }
            used = used.union(b);
            if radius(g, b).is_none_or(|r| r > self.rank) {
                return Err(Error::Invariant("branch set too deep or disconnected".into()));
            }
        }
        let p = self.witness.len();
        let mut e = 0u64;
        for i in 0..p {
            let n_i = g.open_neighborhood(&self.witness[i]);
            for j in i + 1..p {
                if !n_i.is_disjoint(&self.witness[j]) {
                    e += 1;
                }
            }
        }
        if density(e, p as u64) != self.value {
            return Err(Error::Invariant("witness density differs from value".into()));
        }
        Ok(())
    }
}

fn density(e: u64, p: u64) -> Rational {
    if p == 0 {
        Rational::zero()
    } else {
        Rational::new(e, p)
    }
}

/// Radius of `g[set]`, or `None` if it is disconnected or empty.
fn radius(g: &Graph, set: &VertexSet) -> Option<usize> {
    let mut best = None;
    for c in set.iter() {
        let mut dist = std::collections::HashMap::from([(c, 0usize)]);
        let mut queue = std::collections::VecDeque::from([c]);
        let mut ecc = 0;
        while let Some(v) = queue.pop_front() {
            ecc = ecc.max(dist[&v]);
            for &w in g.neighbors(v) {
                if set.contains(w) && !dist.contains_key(&w) {
                    dist.insert(w, dist[&v] + 1);
                    queue.push_back(w);
                }
            }
        }
        if dist.len() < set.len() {
            return None;
        }
        best = Some(best.map_or(ecc, |b: usize| b.min(ecc)));
    }
    best
}

fn mask_radius(adj: &[u64], mask: u64) -> Option<usize> {
    let mut best: Option<usize> = None;
    let mut centers = mask;
    while centers != 0 {
        let c = centers.trailing_zeros() as usize;
        centers &= centers - 1;
        let mut seen = 1u64 << c;
        let mut frontier = seen;
        let mut ecc = 0;
        loop {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= adj[v];
            }
            next &= mask & !seen;
            if next == 0 {
                break;
            }
            seen |= next;
            frontier = next;
            ecc += 1;
        }
        if seen == mask {
            best = Some(best.map_or(ecc, |b| b.min(ecc)));
        }
    }
    best
}

/// Exact `∇_r(g)` by enumerating all packings of radius-`r` branch sets.
pub fn grad_exact(g: &Graph, r: usize) -> Result<GradEstimate> {
    let n = g.n();
    if n > GRAD_EXACT_LIMIT {
        return Err(Error::SizeLimit {
            what: "grad_exact (use grad_lower_bound for larger graphs)",
            size: n,
            limit: GRAD_EXACT_LIMIT,
        });
    }
    let adj = g.adjacency_masks();
    // Valid branch sets grouped by their lowest vertex.
    let mut by_low: Vec<Vec<(u64, u64)>> = vec![Vec::new(); n];
    for mask in 1u64..(1u64 << n) {
        if mask_radius(&adj, mask).is_some_and(|rad| rad <= r) {
            let mut nb = 0;
            let mut m = mask;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                m &= m - 1;
                nb |= adj[v];
            }
            by_low[mask.trailing_zeros() as usize].push((mask, nb & !mask));
        }
    }
    let mut search = GradSearch {
        by_low: &by_low,
        full: if n == 0 { 0 } else { (1u64 << n) - 1 },
        chosen: Vec::new(),
        best: (Rational::zero(), Vec::new()),
    };
    search.go(0, 0);
    let (value, masks) = search.best;
    Ok(GradEstimate {
        rank: r,
        value,
        witness: masks.iter().map(|&m| mask_set(m)).collect(),
        exact: true,
    })
}

fn mask_set(mut m: u64) -> VertexSet {
    let mut v = Vec::new();
    while m != 0 {
        v.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    VertexSet::from_sorted(v)
}

struct GradSearch<'a> {
    by_low: &'a [Vec<(u64, u64)>],
    full: u64,
    /// (branch mask, its open neighborhood)
    chosen: Vec<(u64, u64)>,
    best: (Rational, Vec<u64>),
}

impl GradSearch<'_> {
    fn go(&mut self, decided: u64, edges: u64) {
        let value = density(edges, self.chosen.len() as u64);
        if value > self.best.0 {
            self.best = (value, self.chosen.iter().map(|c| c.0).collect());
        }
        let free = self.full & !decided;
        if free == 0 {
            return;
        }
        let low = free.trailing_zeros() as usize;
        // Leave `low` out of every branch set.
        self.go(decided | (1 << low), edges);
        for &(mask, nb) in &self.by_low[low] {
            if mask & decided != 0 {
                continue;
            }
            let gained = self.chosen.iter().filter(|c| c.0 & nb != 0).count() as u64;
            self.chosen.push((mask, nb));
            self.go(decided | mask, edges + gained);
            self.chosen.pop();
        }
    }
}

/// Greedy lower bound on `∇_r(g)`: merge adjacent branch sets while that
/// raises the minor's density, then peel minimum-degree branch sets and keep
/// the densest intermediate minor.
pub fn grad_lower_bound(g: &Graph, r: usize) -> GradEstimate {
    let mut sets: Vec<Option<VertexSet>> = g.vertices().map(|v| Some(VertexSet::from_sorted(vec![v]))).collect();
    let mut madj: Vec<BTreeSet<usize>> = g.vertices().map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut p = g.n() as u64;
    let mut e = g.m() as u64;
    if r > 0 {
        loop {
            let mut merged = false;
            for a in 0..sets.len() {
                if sets[a].is_none() {
                    continue;
                }
                let cands: Vec<usize> = madj[a].iter().copied().filter(|&b| b > a).collect();
                for b in cands {
                    let common = madj[a].intersection(&madj[b]).count() as u64;
                    // (e - 1 - c) / (p - 1) > e / p  <=>  e > p (1 + c)
                    if e <= p * (1 + common) {
                        continue;
                    }
                    let union = sets[a].as_ref().unwrap().union(sets[b].as_ref().unwrap());
                    if radius(g, &union).is_none_or(|rad| rad > r) {
                        continue;
                    }
                    let nb: Vec<usize> = madj[b].iter().copied().collect();
                    for w in nb {
                        madj[w].remove(&b);
                        if w != a {
                            madj[w].insert(a);
                            madj[a].insert(w);
                        }
                    }
                    madj[a].remove(&b);
                    madj[b].clear();
                    sets[a] = Some(union);
                    sets[b] = None;
                    e -= 1 + common;
                    p -= 1;
                    merged = true;
                    break;
                }
            }
            if !merged {
                break;
            }
        }
    }
    // Min-degree peeling over the minor.
    let mut alive: Vec<bool> = sets.iter().map(Option::is_some).collect();
    let mut deg: Vec<usize> = madj.iter().map(BTreeSet::len).collect();
    let mut heap: BTreeSet<(usize, usize)> = (0..sets.len()).filter(|&i| alive[i]).map(|i| (deg[i], i)).collect();
    let mut best = (density(e, p), p);
    let mut order = Vec::new();
    while let Some((dv, v)) = heap.pop_first() {
        alive[v] = false;
        order.push(v);
        e -= dv as u64;
        p -= 1;
        for &w in &madj[v] {
            if alive[w] {
                heap.remove(&(deg[w], w));
                deg[w] -= 1;
                heap.insert((deg[w], w));
            }
        }
        let val = density(e, p);
        if val > best.0 {
            best = (val, p);
        }
    }
    // The best minor consists of the last `best.1` peeled branch sets.
    let keep: BTreeSet<usize> = order.iter().rev().take(best.1 as usize).copied().collect();
    GradEstimate {
        rank: r,
        value: best.0,
        witness: keep.into_iter().map(|i| sets[i].clone().unwrap()).collect(),
        exact: false,
    }
}

/// Number of nonempty complete subgraphs.
pub fn count_cliques(g: &Graph) -> Result<u64> {
    let (dg, order) = degeneracy_order(g);
    let work = 1u64.checked_shl(dg as u32).unwrap_or(u64::MAX).saturating_mul(g.n() as u64);
    if dg >= 63 || work > CLIQUE_BUDGET {
        return Err(Error::Budget {
            what: "count_cliques",
            limit: CLIQUE_BUDGET,
        });
    }
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let mut total = 0u64;
    for &v in &order {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect();
        let k = later.len();
        let mut local = vec![0u64; k];
        for i in 0..k {
            for j in 0..k {
                if i != j && g.has_edge(later[i], later[j]) {
                    local[i] |= 1 << j;
                }
            }
        }
        // Cliques of `g` whose earliest vertex is `v`: v plus any clique
        // (possibly empty) among its later neighbors.
        total += cliques_in(&local, (1u64 << k) - 1);
    }
    Ok(total)
}

/// Cliques, including the empty one, inside `cand`.
fn cliques_in(adj: &[u64], cand: u64) -> u64 {
    if cand == 0 {
        return 1;
    }
    let v = cand.trailing_zeros() as usize;
    let rest = cand & !(1 << v);
    cliques_in(adj, rest) + cliques_in(adj, rest & adj[v])
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub modulator_size: usize,
    #[serde(serialize_with = "ser_ratio")]
    pub nabla_bound: Rational,
    /// Components with more than `2 * nabla_bound` modulator neighbors.
    pub heavy_components: usize,
    pub heavy_ok: bool,
    pub distinct_neighborhoods: usize,
    pub neighborhoods_ok: bool,
}

/// Checks the two counting consequences of the contraction lemma for
/// connected pieces hanging off a modulator `s`.
pub fn check_corollary_bounds(
    g: &Graph,
    s: &VertexSet,
    components: &[VertexSet],
    nabla_bound: Rational,
) -> Result<CorollaryReport> {
    let mut used = s.clone();
    for c in components {
        if c.is_empty() || !used.is_disjoint(c) || !g.is_connected_set(c) {
            return Err(Error::contract(
                "components must be nonempty, connected and disjoint from each other and s",
            ));
        }
        used = used.union(c);
    }
    let k = s.len() as u64;
    let nbhds: Vec<VertexSet> = components.iter().map(|c| g.neighbors_in(c, s)).collect();
    let threshold = nabla_bound * 2;
    let heavy = nbhds.iter().filter(|n| Rational::from(n.len() as u64) > threshold).count();
    let heavy_ok = Rational::from(heavy as u64) <= threshold * k;
    let distinct = nbhds.iter().collect::<BTreeSet<_>>().len();
    let neighborhoods_ok = distinct_within(distinct as u64, nabla_bound, k);
    Ok(CorollaryReport {
        modulator_size: s.len(),
        nabla_bound,
        heavy_components: heavy,
        heavy_ok,
        distinct_neighborhoods: distinct,
        neighborhoods_ok,
    })
}

/// Exact test of `c <= (4^(p/q) + 2 p/q) * k`.
fn distinct_within(c: u64, nabla: Rational, k: u64) -> bool {
    let (p, q) = (*nabla.numer(), *nabla.denom());
    // lhs = c - 2 p k / q = (c q - 2 p k) / q must be at most 4^(p/q) k.
    let num = BigInt::from(c) * q - BigInt::from(2u64) * p * k;
    if num <= BigInt::zero() {
        return true;
    }
    if k == 0 {
        return false;
    }
    let qe = q.to_u32().expect("denominator fits u32");
    let pe = p.to_u32().expect("numerator fits u32");
    // (num / q)^q <= 4^p k^q  <=>  num^q <= 4^p (k q)^q
    num.pow(qe) <= BigInt::from(4u8).pow(pe) * (BigInt::from(k) * q).pow(qe)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn clique_neighborhood_needs_no_steps() {
        // y = 2 sees the adjacent pair 0-1.
        let g = Graph::from_edges(3, [(0, 1), (0, 2), (1, 2)]).unwrap();
        let tr = run_contraction_sequence(&g, &vs(&[0, 1])).unwrap();
        assert!(tr.steps.is_empty());
        assert_eq!(tr.survivors(), vec![2]);
    }

    #[test]
    fn star_center_contracts_into_a_leaf() {
        let g = star(3);
        let tr = run_contraction_sequence(&g, &vs(&[1, 2, 3])).unwrap();
        assert_eq!(tr.steps.len(), 1);
        assert_eq!(tr.steps[0], ContractionStep { y_vertex: 0, x_target: 1, x_edges: 2 });
        assert!(tr.steps[0].x_edges > tr.initial_x_edges);
        assert_eq!(tr.final_graph.m(), 2);
    }

    #[test]
    fn empty_x_side() {
        let tr = run_contraction_sequence(&Graph::new(3), &VertexSet::new()).unwrap();
        assert!(tr.steps.is_empty());
        assert_eq!(tr.final_graph.n(), 3);
        assert_eq!(tr.final_graph.m(), 0);
    }

    #[test]
    fn y_side_edges_are_rejected() {
        assert!(run_contraction_sequence(&path(3), &vs(&[0])).is_err());
    }

    #[test]
    fn grad_examples() {
        assert_eq!(grad_exact(&Graph::new(4), 2).unwrap().value, Rational::zero());
        let k4 = grad_exact(&complete(4), 0).unwrap();
        assert_eq!(k4.value, Rational::new(3, 2));
        k4.validate(&complete(4)).unwrap();
        let c6 = grad_exact(&cycle(6), 1).unwrap();
        assert!(c6.value >= Rational::from(1));
        c6.validate(&cycle(6)).unwrap();
        assert!(grad_exact(&path(11), 0).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        let g = grid(3, 3);
        let lb = grad_lower_bound(&g, 0);
        assert!(lb.value >= Rational::new(g.m() as u64, g.n() as u64));
        lb.validate(&g).unwrap();
        let mut k4e = complete(4);
        k4e = Graph::from_edges(4, k4e.edges().filter(|&e| e != (0, 1))).unwrap();
        assert!(grad_lower_bound(&k4e, 0).value >= Rational::new(5, 4));
        let c6 = grad_lower_bound(&cycle(6), 1);
        assert!(c6.value >= Rational::from(1));
        c6.validate(&cycle(6)).unwrap();
    }

    #[test]
    fn lower_bound_never_beats_exact() {
        for g in [petersen(), grid(2, 5), complete(5), cycle(9), star(7)] {
            for r in 0..=2 {
                let lb = grad_lower_bound(&g, r);
                lb.validate(&g).unwrap();
                assert!(lb.value <= grad_exact(&g, r).unwrap().value);
            }
        }
    }

    #[test]
    fn clique_counts() {
        assert_eq!(count_cliques(&complete(3)).unwrap(), 7);
        assert_eq!(count_cliques(&Graph::new(5)).unwrap(), 5);
        assert_eq!(count_cliques(&path(3)).unwrap(), 5);
        assert_eq!(count_cliques(&complete(5)).unwrap(), 31);
    }

    #[test]
    fn corollary_checks() {
        // Modulator {0}, three pendant pieces.
        let g = star(3);
        let comps = vec![vs(&[1]), vs(&[2]), vs(&[3])];
        let rep = check_corollary_bounds(&g, &vs(&[0]), &comps, Rational::new(1, 2)).unwrap();
        assert_eq!(rep.heavy_components, 0);
        assert!(rep.heavy_ok && rep.neighborhoods_ok);
        assert_eq!(rep.distinct_neighborhoods, 1);
        let empty = check_corollary_bounds(&Graph::new(2), &VertexSet::new(), &[vs(&[0]), vs(&[1])], Rational::zero())
            .unwrap();
        assert!(empty.heavy_ok);
        assert!(!empty.neighborhoods_ok || empty.distinct_neighborhoods == 0);
        assert!(check_corollary_bounds(&g, &vs(&[0]), &[vs(&[0, 1])], Rational::zero()).is_err());
    }

    #[test]
    fn fractional_exponent_comparison() {
        // 4^(1/2) + 2 * 1/2 = 3 per modulator vertex.
        assert!(distinct_within(3, Rational::new(1, 2), 1));
        assert!(!distinct_within(4, Rational::new(1, 2), 1));
        assert!(distinct_within(6, Rational::new(1, 2), 2));
        assert!(!distinct_within(7, Rational::new(1, 2), 2));
    }
}
