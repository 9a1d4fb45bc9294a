use crate::graph::{Graph, VertexSet};

/// Depth-first forest of `g[set]`. Roots are taken in ascending id order and
/// neighbors are explored in ascending order, so the forest is deterministic.
/// Every non-tree edge joins an ancestor and a descendant.
#[derive(Clone, Debug)]
pub struct DfsForest {
    set: VertexSet,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    preorder: Vec<usize>,
    has_child: Vec<bool>,
}

impl DfsForest {
    pub fn build(g: &Graph, set: &VertexSet) -> Self {
        let k = set.len();
        let local = |v: usize| set.as_slice().binary_search(&v).ok();
        let mut parent = vec![None; k];
        let mut depth = vec![0usize; k];
        let mut has_child = vec![false; k];
        let mut preorder = Vec::with_capacity(k);
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for start in 0..k {
            if depth[start] != 0 {
                continue;
            }
            depth[start] = 1;
            preorder.push(set.as_slice()[start]);
            stack.push((start, 0));
            while let Some(&mut (li, ref mut next)) = stack.last_mut() {
                let v = set.as_slice()[li];
                let nbrs = g.neighbors(v);
                let mut pushed = None;
                while *next < nbrs.len() {
                    let w = nbrs[*next];
                    *next += 1;
                    if let Some(lw) = local(w) {
                        if depth[lw] == 0 {
                            depth[lw] = depth[li] + 1;
                            parent[lw] = Some(v);
                            has_child[li] = true;
                            preorder.push(w);
                            pushed = Some(lw);
                            break;
                        }
                    }
                }
                match pushed {
                    Some(lw) => stack.push((lw, 0)),
                    None => {
                        stack.pop();
                    }
                }
            }
        }
        DfsForest {
            set: set.clone(),
            parent,
            depth,
            preorder,
            has_child,
        }
    }

    fn idx(&self, v: usize) -> usize {
        self.set
            .as_slice()
            .binary_search(&v)
            .unwrap_or_else(|_| panic!("vertex {v} not in DFS forest"))
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[self.idx(v)]
    }

    /// Vertices on the path from the root to `v`, inclusive.
    pub fn depth(&self, v: usize) -> usize {
        self.depth[self.idx(v)]
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn preorder(&self) -> &[usize] {
        &self.preorder
    }

    pub fn roots(&self) -> Vec<usize> {
        self.preorder
            .iter()
            .copied()
            .filter(|&v| self.parent(v).is_none())
            .collect()
    }

    /// Leaves in DFS (preorder) order.
    pub fn leaves(&self) -> Vec<usize> {
        self.preorder
            .iter()
            .copied()
            .filter(|&v| !self.has_child[self.idx(v)])
            .collect()
    }

    /// First vertex in preorder whose depth is at least `k`.
    pub fn first_at_depth(&self, k: usize) -> Option<usize> {
        self.preorder.iter().copied().find(|&v| self.depth(v) >= k)
    }

    /// Root-to-`v` path, root first.
    pub fn root_path(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut cur = v;
        while let Some(p) = self.parent(cur) {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    #[test]
    fn star_from_center() {
        let g = star(3);
        let f = DfsForest::build(&g, &VertexSet::full(4));
        assert_eq!(f.preorder(), &[0, 1, 2, 3]);
        assert_eq!(f.leaves(), vec![1, 2, 3]);
        assert_eq!(f.max_depth(), 2);
    }

    #[test]
    fn cycle_is_one_deep_path() {
        let g = cycle(6);
        let f = DfsForest::build(&g, &VertexSet::full(6));
        assert_eq!(f.max_depth(), 6);
        assert_eq!(f.root_path(5), vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(f.first_at_depth(4), Some(3));
    }

    #[test]
    fn respects_the_vertex_subset() {
        let g = path(5);
        let set: VertexSet = [0, 1, 3, 4].into_iter().collect();
        let f = DfsForest::build(&g, &set);
        assert_eq!(f.roots(), vec![0, 3]);
        assert_eq!(f.max_depth(), 2);
    }
}
