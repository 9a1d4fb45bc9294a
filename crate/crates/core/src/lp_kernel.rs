//! Polynomial kernel for Longest Path parameterized by a treedepth modulator.
//!
//! One round keeps, out of the components of `g - s`, the one with the longest
//! internal path plus, for every modulator vertex and every pair of modulator
//! vertices, the `k + 1` components offering the longest attached paths.
//! Adding a root of every kept component to the modulator lowers the residual
//! treedepth by one, so `d` rounds leave a graph bounded by a function of
//! `k = |s|` alone. Path lengths count edges.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::treedepth_check;
use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, Graph, VertexSet};

/// Cap on DFS steps spent profiling one component.
pub const PROFILE_STEP_BUDGET: u64 = 1 << 28;

/// Longest-path data of one component `U` of `g - s`, in host ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentProfile {
    pub component: VertexSet,
    /// Longest path inside `g[U]`.
    pub lp: usize,
    /// `x -> LP(x, U)`: longest path from `x` into `U`, for every `x` with a
    /// neighbor in `U`. Absent `x` have value 0.
    pub from: BTreeMap<usize, usize>,
    /// `(x, y) -> LP(x, y, U)` for `x < y`: longest `x`–`y` path whose inner
    /// vertices all lie in `U`. Absent pairs have no such path; the edge `xy`
    /// itself does not count.
    pub between: BTreeMap<(usize, usize), usize>,
}

impl ComponentProfile {
    pub fn lp_from(&self, x: usize) -> usize {
        self.from.get(&x).copied().unwrap_or(0)
    }

    pub fn lp_between(&self, x: usize, y: usize) -> Option<usize> {
        self.between.get(&(x.min(y), x.max(y))).copied()
    }
}

/// Exhaustive path search over `g[u]`. Every simple path `a .. b` inside `u`
/// extends to `x a .. b` and `x a .. b y` for modulator neighbors `x` of `a`
/// and `y` of `b`.
pub fn lp_component_profiles(g: &Graph, u: &VertexSet, s: &VertexSet) -> Result<ComponentProfile> {
    if !u.is_disjoint(s) {
        return Err(Error::contract("component intersects the modulator"));
    }
    let sub = induced_subgraph(g, u);
    let n = sub.graph.n();
    let attach: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            g.neighbors(sub.original[v])
                .iter()
                .copied()
                .filter(|&x| s.contains(x))
                .collect()
        })
        .collect();
    let mut lp = 0;
    let mut from: BTreeMap<usize, usize> = BTreeMap::new();
    let mut between: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut steps = 0u64;
    let mut on_path = vec![false; n];
    for a in 0..n {
        let mut stack: Vec<(usize, usize)> = vec![(a, 0)];
        on_path[a] = true;
        while let Some(&(b, _)) = stack.last() {
            let len = stack.len() - 1;
            // Record the path a .. b once, when first reached.
            if stack.last().unwrap().1 == 0 {
                steps += 1;
                if steps > PROFILE_STEP_BUDGET {
                    return Err(Error::Budget {
                        what: "lp_component_profiles",
                        limit: PROFILE_STEP_BUDGET,
                    });
                }
                lp = lp.max(len);
                for &x in &attach[a] {
                    let e = from.entry(x).or_insert(0);
                    *e = (*e).max(len + 1);
                    for &y in &attach[b] {
                        if x != y {
                            let e = between.entry((x.min(y), x.max(y))).or_insert(0);
                            *e = (*e).max(len + 2);
                        }
                    }
                }
            }
            let top = stack.last_mut().unwrap();
            let nbrs = sub.graph.neighbors(b);
            let mut next = None;
            while top.1 < nbrs.len() {
                let w = nbrs[top.1];
                top.1 += 1;
                if !on_path[w] {
                    next = Some(w);
                    break;
                }
            }
            match next {
                Some(w) => {
                    on_path[w] = true;
                    stack.push((w, 0));
                }
                None => {
                    on_path[b] = false;
                    stack.pop();
                }
            }
        }
    }
    Ok(ComponentProfile {
        component: u.clone(),
        lp,
        from,
        between,
    })
}

/// One reduction round, in the ids of the round's input graph.
#[derive(Clone, Debug, Serialize)]
pub struct LpReductionRound {
    /// Treedepth bound on `g - s` entering the round.
    pub d: usize,
    /// Modulator size entering the round.
    pub k: usize,
    pub components: usize,
    /// The kept family, ordered by minimum vertex.
    pub kept_components: Vec<VertexSet>,
    /// `roots[i]` is the root chosen for `kept_components[i]`.
    pub roots: Vec<usize>,
    pub new_modulator: VertexSet,
    pub n_before: usize,
    pub n_after: usize,
}

impl LpReductionRound {
    pub fn kept_bound(k: usize) -> usize {
        k * (k + 1) * (k + 1) / 2 + 1
    }

    pub fn modulator_bound(k: usize) -> usize {
        (k + 1).pow(3)
    }

    /// Cardinality bounds on the kept family and the new modulator.
    pub fn check_bounds(&self) -> Result<()> {
        if self.kept_components.len() > Self::kept_bound(self.k) {
            return Err(Error::Invariant(format!(
                "{} components kept, bound {}",
                self.kept_components.len(),
                Self::kept_bound(self.k)
            )));
        }
        if self.new_modulator.len() > Self::modulator_bound(self.k) {
            return Err(Error::Invariant(format!(
                "new modulator has {} vertices, bound {}",
                self.new_modulator.len(),
                Self::modulator_bound(self.k)
            )));
        }
        Ok(())
    }
}

/// Top `k + 1` candidates: larger value first, then smaller minimum vertex.
fn top(mut cands: Vec<(usize, usize, usize)>, k: usize) -> impl Iterator<Item = usize> {
    // (value, min vertex, component index)
    cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    cands.into_iter().take(k + 1).map(|c| c.2)
}

/// Kept components and their roots, before the graph is rebuilt.
fn select(g: &Graph, s: &VertexSet, d: usize) -> Result<(usize, Vec<VertexSet>, Vec<usize>)> {
    let comps = connected_components(g, s);
    let k = s.len();
    let profiles: Vec<ComponentProfile> = comps
        .par_iter()
        .map(|u| lp_component_profiles(g, u, s))
        .collect::<Result<_>>()?;
    let key = |i: usize| comps[i].as_slice()[0];
    let mut keep = std::collections::BTreeSet::new();
    if let Some(best) = top((0..comps.len()).map(|i| (profiles[i].lp, key(i), i)).collect(), 0).next() {
        keep.insert(best);
    }
    let mods = s.as_slice();
    for &x in mods {
        let cands = (0..comps.len())
            .filter_map(|i| profiles[i].from.get(&x).map(|&v| (v, key(i), i)))
            .collect();
        keep.extend(top(cands, k));
    }
    for (a, &x) in mods.iter().enumerate() {
        for &y in &mods[a + 1..] {
            let cands = (0..comps.len())
                .filter_map(|i| profiles[i].lp_between(x, y).map(|v| (v, key(i), i)))
                .collect();
            keep.extend(top(cands, k));
        }
    }
    let mut kept = Vec::new();
    let mut roots = Vec::new();
    for i in keep {
        let u = &comps[i];
        let sub = induced_subgraph(g, u);
        let td = treedepth_check(&sub.graph, d)
            .ok_or_else(|| Error::contract(format!("component at vertex {} has treedepth above {d}", key(i))))?;
        roots.push(sub.original[td.roots()[0]]);
        kept.push(u.clone());
    }
    Ok((comps.len(), kept, roots))
}

/// Reduces `g` with modulator `s` (`td(g - s) <= d`, `d >= 1`). Returns the
/// induced subgraph on `s` and the kept components, the round record (in
/// input ids) and the host id of each output vertex.
pub fn lp_reduce_round(g: &Graph, s: &VertexSet, d: usize) -> Result<(Graph, LpReductionRound, Vec<usize>)> {
    if d == 0 {
        return Err(Error::Argument("a reduction round needs d >= 1".into()));
    }
    if s.iter().any(|v| v >= g.n()) {
        return Err(Error::Argument("modulator vertex out of range".into()));
    }
    let (components, kept, roots) = select(g, s, d)?;
    let keep_set = kept.iter().fold(s.clone(), |acc, u| acc.union(u));
    let new_modulator = roots.iter().copied().fold(s.clone(), |mut acc, r| {
        acc.insert(r);
        acc
    });
    let sub = induced_subgraph(g, &keep_set);
    let round = LpReductionRound {
        d,
        k: s.len(),
        components,
        kept_components: kept,
        roots,
        new_modulator,
        n_before: g.n(),
        n_after: sub.graph.n(),
    };
    round.check_bounds()?;
    Ok((sub.graph, round, sub.original))
}

/// `g(0, k) = k`, `g(i, k) = g(i - 1, (k + 1)^3)`; `None` on overflow.
pub fn kernel_size_bound(d: usize, k: usize) -> Option<u128> {
    let mut k = k as u128;
    for _ in 0..d {
        k = (k + 1).checked_pow(3)?;
    }
    Some(k)
}

#[derive(Clone, Debug, Serialize)]
pub struct LpKernel {
    #[serde(skip)]
    pub graph: Graph,
    /// Final modulator in output ids; `graph - modulator` is edgeless after
    /// `d` rounds and empty when every round kept nothing.
    pub modulator: VertexSet,
    /// Input id of each output vertex.
    pub original: Vec<usize>,
    /// Rounds with all vertex sets in input ids.
    pub rounds: Vec<LpReductionRound>,
}

/// Runs rounds at depth `d, d - 1, .., 1`, each with the previous round's
/// enlarged modulator.
pub fn lp_kernelize(g: &Graph, s: &VertexSet, d: usize) -> Result<LpKernel> {
    if s.iter().any(|v| v >= g.n()) {
        return Err(Error::Argument("modulator vertex out of range".into()));
    }
    if d == 0 {
        let rest = VertexSet::full(g.n()).difference(s);
        if !rest.is_empty() {
            return Err(Error::contract("with d = 0 the modulator must be every vertex"));
        }
    }
    let mut graph = g.clone();
    let mut modulator = s.clone();
    let mut original: Vec<usize> = (0..g.n()).collect();
    let mut rounds = Vec::new();
    for depth in (1..=d).rev() {
        let (next, mut round, ids) = lp_reduce_round(&graph, &modulator, depth)?;
        let lift = |set: &VertexSet| -> VertexSet { set.iter().map(|v| original[v]).collect() };
        modulator = round.new_modulator.iter().map(|v| ids.binary_search(&v).unwrap()).collect();
        round.kept_components = round.kept_components.iter().map(lift).collect();
        round.roots = round.roots.iter().map(|&r| original[r]).collect();
        round.new_modulator = lift(&round.new_modulator);
        original = ids.iter().map(|&v| original[v]).collect();
        graph = next;
        rounds.push(round);
    }
    Ok(LpKernel {
        graph,
        modulator,
        original,
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::oracles::{brute_exact_st_path, brute_longest_path};

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn single_attached_vertex() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let p = lp_component_profiles(&g, &vs(&[1]), &vs(&[0])).unwrap();
        assert_eq!(p.lp, 0);
        assert_eq!(p.lp_from(0), 1);
    }

    #[test]
    fn detached_component() {
        let g = Graph::from_edges(4, [(1, 2), (2, 3)]).unwrap();
        let p = lp_component_profiles(&g, &vs(&[1, 2, 3]), &vs(&[0])).unwrap();
        assert_eq!(p.lp, 2);
        assert_eq!(p.lp_from(0), 0);
        assert!(p.between.is_empty());
    }

    #[test]
    fn triangle_between_two_modulator_vertices() {
        // x = 0, y = 1 both adjacent to 2 in triangle 2-3-4.
        let g = Graph::from_edges(5, [(0, 2), (1, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let p = lp_component_profiles(&g, &vs(&[2, 3, 4]), &vs(&[0, 1])).unwrap();
        assert_eq!(p.lp_between(0, 1), Some(2));
        assert!(brute_exact_st_path(&g, 0, 1, 2).unwrap());
        assert!(!brute_exact_st_path(&g, 0, 1, 3).unwrap());
        assert_eq!(p.lp_from(0), 3);
    }

    #[test]
    fn empty_modulator_keeps_the_best_component() {
        let g = disjoint_union(&path(3), &path(5));
        let (h, round, _) = lp_reduce_round(&g, &VertexSet::new(), 3).unwrap();
        assert_eq!(round.kept_components.len(), 1);
        assert_eq!(h.n(), 5);
    }

    #[test]
    fn few_components_are_all_kept() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 3), (3, 4)]).unwrap();
        let (h, _, _) = lp_reduce_round(&g, &vs(&[0]), 2).unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn identical_pendants() {
        // x = 0 with seven pendant paths 0-(2i+1)-(2i+2).
        let edges: Vec<_> = (0..7).flat_map(|i| [(0, 2 * i + 1), (2 * i + 1, 2 * i + 2)]).collect();
        let g = Graph::from_edges(15, edges).unwrap();
        let (h, round, _) = lp_reduce_round(&g, &vs(&[0]), 2).unwrap();
        assert!(round.kept_components.len() <= 3);
        assert_eq!(brute_longest_path(&g).unwrap(), brute_longest_path(&h).unwrap());
    }

    #[test]
    fn planted_pendant_edges() {
        // Modulator {0, 1}; thirty pendant edges, alternating the apex.
        let mut edges = vec![];
        for i in 0..30 {
            edges.push((i % 2, 2 + i));
        }
        let g = Graph::from_edges(32, edges).unwrap();
        let kernel = lp_kernelize(&g, &vs(&[0, 1]), 1).unwrap();
        assert!(kernel.rounds[0].new_modulator.len() <= 27);
        assert!(kernel.graph.n() as u128 <= kernel_size_bound(1, 2).unwrap());
        // Two stars with no common vertex: the longest path is leaf-apex-leaf.
        assert_eq!(brute_longest_path(&kernel.graph).unwrap(), 2);
    }

    #[test]
    fn depth_zero_is_identity() {
        let g = path(3);
        let kernel = lp_kernelize(&g, &VertexSet::full(3), 0).unwrap();
        assert_eq!(kernel.graph, g);
        assert!(lp_kernelize(&g, &vs(&[0]), 0).is_err());
    }

    #[test]
    fn deep_components_are_rejected() {
        assert!(lp_reduce_round(&path(8), &VertexSet::new(), 2).is_err());
    }

    #[test]
    fn size_bound_recurrence() {
        assert_eq!(kernel_size_bound(0, 5), Some(5));
        assert_eq!(kernel_size_bound(1, 2), Some(27));
        assert_eq!(kernel_size_bound(2, 1), Some(729));
        assert_eq!(kernel_size_bound(6, 9), None);
    }
}
