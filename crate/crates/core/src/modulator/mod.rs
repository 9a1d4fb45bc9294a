//! Modulators to bounded treedepth.
//!
//! [`approx_td_modulator`] deletes long DFS root paths until every DFS tree is
//! shallower than `2^d`, then cleans up the residue exactly. Each deleted path
//! has `2^d` vertices and hence treedepth above `d`, so it meets every optimal
//! modulator; together with the optimal cleanup this gives a `2^d`
//! approximation.

mod dp;

use serde::Serialize;

use crate::decomposition::{
    dfs_path_decomposition, make_nice, treedepth_check, DfsForest, TreedepthDecomposition,
};
use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, remove_vertices, Graph, VertexSet};

/// Vertex limit of [`exact_td_modulator`].
pub const EXACT_MODULATOR_LIMIT: usize = 16;

#[derive(Clone, Debug, Serialize)]
pub struct ModulatorResult {
    pub modulator: VertexSet,
    pub target_depth: usize,
    /// Decomposition of `g - modulator` over its own vertex numbering;
    /// `residual[i]` is the original id of local vertex `i`.
    pub certificate: TreedepthDecomposition,
    pub residual: Vec<usize>,
    /// Root paths removed by the long-path phase (empty for the exact solver).
    pub deleted_paths: Vec<Vec<usize>>,
}

impl ModulatorResult {
    /// Certificate parent of original vertex `v`: `None` if `v` is in the
    /// modulator, `Some(None)` for a root.
    pub fn certificate_parent(&self, v: usize) -> Option<Option<usize>> {
        let i = self.residual.binary_search(&v).ok()?;
        Some(self.certificate.parent[i].map(|p| self.residual[p]))
    }

    /// Re-checks the certificate against `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let rest = remove_vertices(g, &self.modulator);
        if rest.original != self.residual {
            return Err(Error::Invariant("certificate does not cover V(g) - modulator".into()));
        }
        self.certificate.validate(&rest.graph)?;
        if self.certificate.height > self.target_depth {
            return Err(Error::Invariant(format!(
                "certificate height {} exceeds {}",
                self.certificate.height, self.target_depth
            )));
        }
        Ok(())
    }
}

fn check_depth(d: usize) -> Result<()> {
    if d == 0 {
        return Err(Error::Argument("target treedepth must be at least 1".into()));
    }
    if d >= 32 {
        return Err(Error::Argument(format!("target treedepth {d} is too large")));
    }
    Ok(())
}

fn certify(g: &Graph, modulator: VertexSet, d: usize, deleted_paths: Vec<Vec<usize>>) -> Result<ModulatorResult> {
    let rest = remove_vertices(g, &modulator);
    let certificate = treedepth_check(&rest.graph, d)
        .ok_or_else(|| Error::Invariant("modulator leaves treedepth above target".into()))?;
    Ok(ModulatorResult {
        modulator,
        target_depth: d,
        certificate,
        residual: rest.original,
        deleted_paths,
    })
}

/// Modulator of size at most `2^d` times optimal.
pub fn approx_td_modulator(g: &Graph, d: usize) -> Result<ModulatorResult> {
    check_depth(d)?;
    let long = 1usize << d;
    let mut modulator = VertexSet::new();
    let mut remaining = VertexSet::full(g.n());
    let mut paths = Vec::new();
    loop {
        let forest = DfsForest::build(g, &remaining);
        let Some(deep) = forest.first_at_depth(long) else {
            break;
        };
        let path = forest.root_path(deep);
        debug_assert_eq!(path.len(), long);
        let p: VertexSet = path.iter().copied().collect();
        modulator = modulator.union(&p);
        remaining = remaining.difference(&p);
        paths.push(path);
    }

    for comp in connected_components(g, &modulator) {
        let sub = induced_subgraph(g, &comp);
        if treedepth_check(&sub.graph, d).is_some() {
            continue;
        }
        let local = cleanup(&sub.graph, d)?;
        modulator = modulator.union(&sub.set_to_original(&local));
    }
    certify(g, modulator, d, paths)
}

/// Optimal (or, for large components with `d >= 3`, feasible) modulator of a
/// connected graph whose DFS trees are shallower than `2^d`.
fn cleanup(g: &Graph, d: usize) -> Result<VertexSet> {
    if d <= 2 {
        let pd = dfs_path_decomposition(g, &VertexSet::full(g.n()))?;
        let nice = make_nice(g, &pd.to_tree(), &VertexSet::new())?;
        return Ok(dp::min_modulator_dp(g, &nice, d));
    }
    if g.n() <= EXACT_MODULATOR_LIMIT {
        return Ok(exact_td_modulator(g, d)?.modulator);
    }
    // Cut the DFS tree so that at most `d` levels remain below the cut.
    let forest = DfsForest::build(g, &VertexSet::full(g.n()));
    let cut = forest.max_depth().saturating_sub(d);
    Ok(g.vertices().filter(|&v| forest.depth(v) <= cut).collect())
}

/// Minimum modulator by enumerating vertex subsets in order of size.
pub fn exact_td_modulator(g: &Graph, d: usize) -> Result<ModulatorResult> {
    check_depth(d)?;
    if g.n() > EXACT_MODULATOR_LIMIT {
        return Err(Error::SizeLimit {
            what: "exact_td_modulator",
            size: g.n(),
            limit: EXACT_MODULATOR_LIMIT,
        });
    }
    let n = g.n();
    for size in 0..=n {
        let mut chosen = Vec::with_capacity(size);
        if let Some(s) = first_subset(g, d, 0, size, &mut chosen) {
            return certify(g, s, d, Vec::new());
        }
    }
    unreachable!("deleting every vertex always works")
}

fn first_subset(g: &Graph, d: usize, from: usize, left: usize, chosen: &mut Vec<usize>) -> Option<VertexSet> {
    if left == 0 {
        let s = VertexSet::from_sorted(chosen.clone());
        return verify_modulator(g, &s, d).then_some(s);
    }
    for v in from..=g.n() - left {
        chosen.push(v);
        let found = first_subset(g, d, v + 1, left - 1, chosen);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

pub fn verify_modulator(g: &Graph, s: &VertexSet, d: usize) -> bool {
    treedepth_check(&remove_vertices(g, s).graph, d).is_some()
}
