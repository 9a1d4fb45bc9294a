use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

use super::dfs::DfsForest;
use super::nice::TreeDecomposition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathDecomposition {
    pub bags: Vec<VertexSet>,
}

impl PathDecomposition {
    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(1).saturating_sub(1)
    }

    /// The same bags strung into a tree, bag `i` the child of bag `i + 1`.
    pub fn to_tree(&self) -> TreeDecomposition {
        let k = self.bags.len();
        TreeDecomposition {
            bags: self.bags.clone(),
            parent: (0..k).map(|i| if i + 1 < k { Some(i + 1) } else { None }).collect(),
        }
    }

    /// Checks coverage of `scope`, edge coverage within `scope` and that each
    /// vertex occupies a contiguous run of bags.
    pub fn validate(&self, g: &Graph, scope: &VertexSet) -> Result<()> {
        let mut first = std::collections::HashMap::new();
        let mut last = std::collections::HashMap::new();
        let mut count = std::collections::HashMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for v in bag.iter() {
                if !scope.contains(v) {
                    return Err(Error::InvalidDecomposition(format!("vertex {v} outside scope")));
                }
                first.entry(v).or_insert(i);
                last.insert(v, i);
                *count.entry(v).or_insert(0usize) += 1;
            }
        }
        for v in scope.iter() {
            let Some(&f) = first.get(&v) else {
                return Err(Error::InvalidDecomposition(format!("vertex {v} not covered")));
            };
            if last[&v] - f + 1 != count[&v] {
                return Err(Error::InvalidDecomposition(format!(
                    "bags containing {v} are not contiguous"
                )));
            }
        }
        for v in scope.iter() {
            for &w in g.neighbors(v) {
                if w > v && scope.contains(w) && !self.bags.iter().any(|b| b.contains(v) && b.contains(w)) {
                    return Err(Error::InvalidDecomposition(format!("edge {v}-{w} not covered")));
                }
            }
        }
        Ok(())
    }
}

/// Path decomposition of a connected vertex set from a DFS tree rooted at its
/// minimum vertex: one bag per leaf, holding the root-to-leaf path, with bags
/// ordered by the leaves' DFS numbers.
pub fn dfs_path_decomposition(g: &Graph, component: &VertexSet) -> Result<PathDecomposition> {
    let forest = DfsForest::build(g, component);
    if forest.roots().len() > 1 {
        return Err(Error::contract("dfs_path_decomposition needs a connected vertex set"));
    }
    let bags = forest
        .leaves()
        .into_iter()
        .map(|leaf| forest.root_path(leaf).into_iter().collect())
        .collect();
    Ok(PathDecomposition { bags })
}
