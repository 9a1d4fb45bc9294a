use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{connected_components, Graph, VertexSet};

use super::dfs::DfsForest;

/// Default vertex limit for [`treedepth_exact`].
pub const EXACT_LIMIT: usize = 20;

/// Rooted forest over the vertices of a graph whose ancestor closure contains
/// every edge. `height` counts vertices on the longest root-to-node path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreedepthDecomposition {
    pub parent: Vec<Option<usize>>,
    pub height: usize,
}

impl TreedepthDecomposition {
    pub fn from_parents(parent: Vec<Option<usize>>) -> Result<Self> {
        let n = parent.len();
        let mut depth = vec![0usize; n];
        for v in 0..n {
            if depth[v] == 0 {
                // Walk up until a vertex with known depth or a root.
                let mut chain = vec![v];
                let mut cur = v;
                while let Some(p) = parent[cur] {
                    if p >= n {
                        return Err(Error::InvalidDecomposition(format!("parent {p} out of range")));
                    }
                    if depth[p] != 0 {
                        break;
                    }
                    if chain.len() > n {
                        return Err(Error::InvalidDecomposition("parent relation has a cycle".into()));
                    }
                    chain.push(p);
                    cur = p;
                }
                let mut base = parent[cur].map_or(0, |p| depth[p]);
                for &u in chain.iter().rev() {
                    base += 1;
                    depth[u] = base;
                }
            }
        }
        Ok(TreedepthDecomposition {
            height: depth.iter().copied().max().unwrap_or(0),
            parent,
        })
    }

    /// Number of vertices from the root down to `v`, inclusive.
    pub fn depth(&self, v: usize) -> usize {
        let mut d = 1;
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            d += 1;
            cur = p;
        }
        d
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.parent.len()).filter(|&v| self.parent[v].is_none()).collect()
    }

    pub fn root_of(&self, v: usize) -> usize {
        let mut cur = v;
        while let Some(p) = self.parent[cur] {
            cur = p;
        }
        cur
    }

    pub fn is_ancestor(&self, a: usize, v: usize) -> bool {
        let mut cur = Some(v);
        while let Some(c) = cur {
            if c == a {
                return true;
            }
            cur = self.parent[c];
        }
        false
    }

    /// Checks the forest shape, the closure property and the stored height.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        if self.parent.len() != g.n() {
            return Err(Error::InvalidDecomposition(format!(
                "forest has {} vertices, graph has {}",
                self.parent.len(),
                g.n()
            )));
        }
        let rebuilt = Self::from_parents(self.parent.clone())?;
        if rebuilt.height != self.height {
            return Err(Error::InvalidDecomposition(format!(
                "stored height {} but forest height is {}",
                self.height, rebuilt.height
            )));
        }
        for (u, v) in g.edges() {
            if !self.is_ancestor(u, v) && !self.is_ancestor(v, u) {
                return Err(Error::InvalidDecomposition(format!(
                    "edge {u}-{v} not in the closure"
                )));
            }
        }
        Ok(())
    }
}

/// Optimal treedepth decomposition for graphs up to [`EXACT_LIMIT`] vertices.
pub fn treedepth_exact(g: &Graph) -> Result<TreedepthDecomposition> {
    treedepth_exact_with_limit(g, EXACT_LIMIT)
}

pub fn treedepth_exact_with_limit(g: &Graph, limit: usize) -> Result<TreedepthDecomposition> {
    if g.n() > limit {
        return Err(Error::SizeLimit {
            what: "treedepth_exact (use treedepth_check for a fixed bound)",
            size: g.n(),
            limit,
        });
    }
    let mut solver = TdSolver::new(g);
    let lower = if g.n() == 0 { 0 } else { 1 };
    for d in lower..=g.n() {
        if let Some(td) = solver.check(d) {
            return Ok(td);
        }
    }
    unreachable!("every graph has treedepth at most n")
}

/// A decomposition of height at most `d` if one exists.
pub fn treedepth_check(g: &Graph, d: usize) -> Option<TreedepthDecomposition> {
    TdSolver::new(g).check(d)
}

/// Treedepth of `g` restricted to `allowed`: convenience wrapper used when a
/// caller only needs the yes/no answer for a vertex subset.
pub fn treedepth_at_most(g: &Graph, allowed: &VertexSet, d: usize) -> bool {
    let sub = crate::graph::induced_subgraph(g, allowed);
    treedepth_check(&sub.graph, d).is_some()
}

#[derive(Clone, Debug)]
struct SubForest {
    /// (vertex, parent) pairs; the root has parent `None`.
    links: Vec<(usize, Option<usize>)>,
    height: usize,
}

/// Recursive root selection over connected vertex sets with memoization.
/// Pruning: a DFS tree deeper than `2^d - 1` refutes `td <= d`; a DFS tree of
/// depth at most `d` is itself a witness; `td <= d` forces at most
/// `(d - 1) * |C|` edges.
struct TdSolver<'g> {
    g: &'g Graph,
    infeasible: HashMap<Vec<usize>, usize>,
    feasible: HashMap<Vec<usize>, SubForest>,
}

impl<'g> TdSolver<'g> {
    fn new(g: &'g Graph) -> Self {
        TdSolver {
            g,
            infeasible: HashMap::new(),
            feasible: HashMap::new(),
        }
    }

    fn check(&mut self, d: usize) -> Option<TreedepthDecomposition> {
        let mut parent = vec![None; self.g.n()];
        for comp in connected_components(self.g, &VertexSet::new()) {
            let sub = self.solve(comp.as_slice(), d)?;
            for (v, p) in sub.links {
                parent[v] = p;
            }
        }
        Some(TreedepthDecomposition::from_parents(parent).expect("solver builds forests"))
    }

    fn solve(&mut self, comp: &[usize], d: usize) -> Option<SubForest> {
        match comp.len() {
            0 => {
                return Some(SubForest {
                    links: vec![],
                    height: 0,
                })
            }
            1 if d >= 1 => {
                return Some(SubForest {
                    links: vec![(comp[0], None)],
                    height: 1,
                })
            }
            _ => {}
        }
        if d <= 1 {
            return None;
        }
        if let Some(sub) = self.feasible.get(comp) {
            if sub.height <= d {
                return Some(sub.clone());
            }
        }
        if let Some(&bad) = self.infeasible.get(comp) {
            if d <= bad {
                return None;
            }
        }
        let result = self.solve_uncached(comp, d);
        match &result {
            Some(sub) => {
                let keep = self
                    .feasible
                    .get(comp)
                    .is_none_or(|old| sub.height < old.height);
                if keep {
                    self.feasible.insert(comp.to_vec(), sub.clone());
                }
            }
            None => {
                let e = self.infeasible.entry(comp.to_vec()).or_insert(0);
                *e = (*e).max(d);
            }
        }
        result
    }

    fn solve_uncached(&mut self, comp: &[usize], d: usize) -> Option<SubForest> {
        let g = self.g;
        let set = VertexSet::from_sorted(comp.to_vec());
        let edges: usize = comp
            .iter()
            .map(|&v| g.neighbors(v).iter().filter(|&&w| set.contains(w)).count())
            .sum::<usize>()
            / 2;
        if edges > (d - 1) * comp.len() {
            return None;
        }
        let dfs = DfsForest::build(g, &set);
        let depth = dfs.max_depth();
        if d < usize::BITS as usize && depth > (1usize << d) - 1 {
            return None;
        }
        if depth <= d {
            return Some(SubForest {
                links: comp.iter().map(|&v| (v, dfs.parent(v))).collect(),
                height: depth,
            });
        }
        let mut candidates: Vec<usize> = comp.to_vec();
        let deg_in = |v: usize| g.neighbors(v).iter().filter(|&&w| set.contains(w)).count();
        candidates.sort_by_key(|&v| (std::cmp::Reverse(deg_in(v)), v));
        'roots: for root in candidates {
            let mut links = vec![(root, None)];
            let mut height = 1;
            let rest: Vec<VertexSet> = sub_components(g, &set, root);
            for part in rest {
                let Some(sub) = self.solve(part.as_slice(), d - 1) else {
                    continue 'roots;
                };
                height = height.max(sub.height + 1);
                for (v, p) in sub.links {
                    links.push((v, Some(p.unwrap_or(root))));
                }
            }
            return Some(SubForest { links, height });
        }
        None
    }
}

/// Components of `g[set] - removed`.
fn sub_components(g: &Graph, set: &VertexSet, removed: usize) -> Vec<VertexSet> {
    let mut seen: HashMap<usize, bool> = set.iter().map(|v| (v, false)).collect();
    seen.insert(removed, true);
    let mut out = Vec::new();
    for s in set.iter() {
        if seen[&s] {
            continue;
        }
        seen.insert(s, true);
        let mut stack = vec![s];
        let mut comp = Vec::new();
        while let Some(v) = stack.pop() {
            comp.push(v);
            for &w in g.neighbors(v) {
                if let Some(flag) = seen.get_mut(&w) {
                    if !*flag {
                        *flag = true;
                        stack.push(w);
                    }
                }
            }
        }
        out.push(comp.into_iter().collect());
    }
    out
}
