//! Protrusion decompositions: a core `Y_0` containing the modulator plus
//! clusters of components of `g - Y_0` grouped by their neighborhood in `Y_0`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::decomposition::dfs_path_decomposition;
use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, VertexSet};
use crate::modulator::verify_modulator;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cluster {
    pub vertices: VertexSet,
    pub boundary: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProtrusionDecomposition {
    pub y0: VertexSet,
    pub clusters: Vec<Cluster>,
    pub d: usize,
    pub t: usize,
}

impl ProtrusionDecomposition {
    /// Largest boundary the bag-marking sweep can leave behind.
    pub fn boundary_bound(d: usize, t: usize) -> usize {
        2 * ((1usize << d) - 1) + t
    }

    /// Checks the partition and boundary properties against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut seen = self.y0.clone();
        let mut boundaries = BTreeSet::new();
        for c in &self.clusters {
            if !seen.is_disjoint(&c.vertices) {
                return Err(Error::Invariant("clusters overlap".into()));
            }
            seen = seen.union(&c.vertices);
            if g.neighbors_in(&c.vertices, &self.y0) != c.boundary {
                return Err(Error::Invariant("cluster boundary is not N(cluster) in y0".into()));
            }
            if !boundaries.insert(c.boundary.clone()) {
                return Err(Error::Invariant("two clusters share a boundary".into()));
            }
            for comp in connected_components(g, &self.y0) {
                if !comp.is_disjoint(&c.vertices) && !comp.is_subset(&c.vertices) {
                    return Err(Error::Invariant("cluster splits a component".into()));
                }
            }
        }
        if seen != VertexSet::full(g.n()) {
            return Err(Error::Invariant("y0 and clusters do not cover V(g)".into()));
        }
        Ok(())
    }
}

/// Union-find over local indices with, per root, the set of modulator
/// neighbors of its component.
struct Sweep {
    parent: Vec<usize>,
    hits: Vec<BTreeSet<usize>>,
}

impl Sweep {
    fn new(k: usize) -> Self {
        Sweep {
            parent: (0..k).collect(),
            hits: vec![BTreeSet::new(); k],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges and returns the size of the merged neighbor set.
    fn union(&mut self, a: usize, b: usize) -> usize {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return self.hits[ra].len();
        }
        if self.hits[ra].len() < self.hits[rb].len() {
            std::mem::swap(&mut ra, &mut rb);
        }
        let moved = std::mem::take(&mut self.hits[rb]);
        self.hits[ra].extend(moved);
        self.parent[rb] = ra;
        self.hits[ra].len()
    }
}

fn check_pre(g: &Graph, s: &VertexSet, d: usize, t: usize) -> Result<()> {
    if t == 0 {
        return Err(Error::Argument("threshold t must be at least 1".into()));
    }
    if d == 0 || d >= 32 {
        return Err(Error::Argument(format!("invalid treedepth bound {d}")));
    }
    if s.iter().any(|v| v >= g.n()) {
        return Err(Error::contract("modulator contains a vertex outside the graph"));
    }
    if !verify_modulator(g, s, d) {
        return Err(Error::contract(format!("s is not a treedepth-{d} modulator")));
    }
    Ok(())
}

/// Bag-marking sweep. Returns `Y_0 = s` plus all marked bags.
pub fn mark_bags(g: &Graph, s: &VertexSet, d: usize, t: usize) -> Result<VertexSet> {
    check_pre(g, s, d, t)?;
    Ok(mark_bags_unchecked(g, s, t)?.0)
}

/// Returns `Y_0` and the marked bags (as they were when marked).
fn mark_bags_unchecked(g: &Graph, s: &VertexSet, t: usize) -> Result<(VertexSet, Vec<VertexSet>)> {
    let mut y0 = s.clone();
    let mut marked = Vec::new();
    for comp in connected_components(g, s) {
        if g.neighbors_in(&comp, s).len() < t {
            continue;
        }
        let pd = dfs_path_decomposition(g, &comp)?;
        let local: HashMap<usize, usize> = comp.iter().enumerate().map(|(i, v)| (v, i)).collect();
        let mut deleted = vec![false; comp.len()];
        let mut in_prefix = vec![false; comp.len()];
        let mut sweep = Sweep::new(comp.len());
        for bag in &pd.bags {
            let mut trigger = false;
            for v in bag.iter() {
                let lv = local[&v];
                if deleted[lv] || in_prefix[lv] {
                    continue;
                }
                in_prefix[lv] = true;
                for &w in g.neighbors(v) {
                    if s.contains(w) {
                        sweep.hits[lv].insert(w);
                    }
                }
                let mut size = sweep.hits[lv].len();
                for &w in g.neighbors(v) {
                    if let Some(&lw) = local.get(&w) {
                        if in_prefix[lw] && !deleted[lw] {
                            size = size.max(sweep.union(lv, lw));
                        }
                    }
                }
                if size >= t {
                    trigger = true;
                }
            }
            if !trigger {
                continue;
            }
            let live: VertexSet = bag.iter().filter(|&v| !deleted[local[&v]]).collect();
            for v in live.iter() {
                deleted[local[&v]] = true;
            }
            y0 = y0.union(&live);
            marked.push(live);
            // Rebuild the prefix structure without the deleted vertices.
            sweep = Sweep::new(comp.len());
            for v in comp.iter() {
                let lv = local[&v];
                if !in_prefix[lv] || deleted[lv] {
                    continue;
                }
                for &w in g.neighbors(v) {
                    if s.contains(w) {
                        sweep.hits[lv].insert(w);
                    }
                }
            }
            for v in comp.iter() {
                let lv = local[&v];
                if !in_prefix[lv] || deleted[lv] {
                    continue;
                }
                for &w in g.neighbors(v) {
                    if let Some(&lw) = local.get(&w) {
                        if lw < lv && in_prefix[lw] && !deleted[lw] {
                            sweep.union(lv, lw);
                        }
                    }
                }
            }
        }
    }
    Ok((y0, marked))
}

/// Groups the components of `g - y0` by their neighborhood in `y0`.
pub fn cluster_components(g: &Graph, y0: &VertexSet, d: usize, t: usize) -> ProtrusionDecomposition {
    let mut by_boundary: BTreeMap<VertexSet, VertexSet> = BTreeMap::new();
    for comp in connected_components(g, y0) {
        let boundary = g.neighbors_in(&comp, y0);
        let entry = by_boundary.entry(boundary).or_default();
        *entry = entry.union(&comp);
    }
    ProtrusionDecomposition {
        y0: y0.clone(),
        clusters: by_boundary
            .into_iter()
            .map(|(boundary, vertices)| Cluster { vertices, boundary })
            .collect(),
        d,
        t,
    }
}

/// Bag marking followed by clustering, with the residual-degree and boundary
/// bounds checked.
pub fn decompose(g: &Graph, s: &VertexSet, d: usize, t: usize) -> Result<ProtrusionDecomposition> {
    check_pre(g, s, d, t)?;
    let (y0, _) = mark_bags_unchecked(g, s, t)?;
    for comp in connected_components(g, &y0) {
        let k = g.neighbors_in(&comp, s).len();
        if k >= t {
            return Err(Error::Invariant(format!(
                "residual component has {k} modulator neighbors, threshold {t}"
            )));
        }
    }
    let pd = cluster_components(g, &y0, d, t);
    let bound = ProtrusionDecomposition::boundary_bound(d, t);
    if let Some(c) = pd.clusters.iter().find(|c| c.boundary.len() > bound) {
        return Err(Error::Invariant(format!(
            "cluster boundary of size {} exceeds {bound}",
            c.boundary.len()
        )));
    }
    Ok(pd)
}

/// Marked bags of the sweep, exposed for diagnostics and tests.
pub fn marked_bags(g: &Graph, s: &VertexSet, d: usize, t: usize) -> Result<Vec<VertexSet>> {
    check_pre(g, s, d, t)?;
    Ok(mark_bags_unchecked(g, s, t)?.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn vs(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn small_neighborhoods_mark_nothing() {
        let g = star(4);
        assert_eq!(mark_bags(&g, &vs(&[0]), 1, 2).unwrap(), vs(&[0]));
    }

    #[test]
    fn p3_with_two_apexes() {
        // x = 3, y = 4; path 0-1-2 whose endpoints see both.
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (0, 3), (0, 4), (2, 3), (2, 4)]).unwrap();
        let s = vs(&[3, 4]);
        let marks = marked_bags(&g, &s, 2, 2).unwrap();
        assert_eq!(marks.len(), 1);
        let y0 = mark_bags(&g, &s, 2, 2).unwrap();
        assert_eq!(y0, s.union(&marks[0]));
        for comp in connected_components(&g, &y0) {
            assert!(g.neighbors_in(&comp, &s).len() < 2);
        }
    }

    #[test]
    fn modulator_only_graph() {
        let g = complete(3);
        let pd = decompose(&g, &VertexSet::full(3), 1, 1).unwrap();
        assert!(pd.clusters.is_empty());
        pd.validate(&g).unwrap();
    }

    #[test]
    fn grid_with_corner() {
        let g = grid(4, 4);
        let s = vs(&[0]);
        // The rest of the grid is too deep for d = 3; use its exact treedepth.
        assert!(decompose(&g, &s, 3, 3).is_err());
        let d = crate::decomposition::treedepth_exact(&crate::graph::remove_vertices(&g, &s).graph)
            .unwrap()
            .height;
        let pd = decompose(&g, &s, d, 3).unwrap();
        pd.validate(&g).unwrap();
        assert_eq!(pd.y0, s);
    }

    #[test]
    fn apex_over_a_path() {
        let mut g = path(8);
        let a = g.add_vertex();
        for v in 0..8 {
            g.add_edge(a, v);
        }
        // td(P_8) = 4, so d = 3 is rejected.
        assert!(decompose(&g, &vs(&[a]), 3, 2).is_err());
        let pd = decompose(&g, &vs(&[a]), 4, 2).unwrap();
        assert_eq!(pd.y0, vs(&[a]));
        assert_eq!(pd.clusters.len(), 1);
        pd.validate(&g).unwrap();
    }

    #[test]
    fn clustering_examples() {
        let g = star(3);
        assert!(cluster_components(&g, &VertexSet::full(4), 1, 1).clusters.is_empty());
        let pd = cluster_components(&g, &vs(&[0]), 1, 1);
        assert_eq!(pd.clusters, vec![Cluster { vertices: vs(&[1, 2, 3]), boundary: vs(&[0]) }]);
        // Components {2} (sees a = 0) and {3} (sees a and b = 1).
        let h = Graph::from_edges(4, [(0, 2), (0, 3), (1, 3)]).unwrap();
        let pd = cluster_components(&h, &vs(&[0, 1]), 1, 1);
        assert_eq!(pd.clusters.len(), 2);
        assert_eq!(pd.clusters[0].boundary, vs(&[0]));
        assert_eq!(pd.clusters[1].boundary, vs(&[0, 1]));
    }

    #[test]
    fn bad_modulator_is_rejected() {
        assert!(matches!(mark_bags(&path(5), &VertexSet::new(), 1, 2), Err(Error::Contract(_))));
        assert!(matches!(mark_bags(&path(2), &VertexSet::new(), 1, 0), Err(Error::Argument(_))));
    }
}
