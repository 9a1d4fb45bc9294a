use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{induced_subgraph, Graph, VertexSet};

/// A graph with `t` distinguished vertices; `boundary[i]` carries label
/// `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawBoundaried", try_from = "RawBoundaried")]
pub struct BoundariedGraph {
    pub graph: Graph,
    pub boundary: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawBoundaried {
    n: usize,
    edges: Vec<(usize, usize)>,
    boundary: Vec<usize>,
}

impl From<BoundariedGraph> for RawBoundaried {
    fn from(b: BoundariedGraph) -> Self {
        RawBoundaried {
            n: b.graph.n(),
            edges: b.graph.edges().collect(),
            boundary: b.boundary,
        }
    }
}

impl TryFrom<RawBoundaried> for BoundariedGraph {
    type Error = Error;
    fn try_from(r: RawBoundaried) -> Result<Self> {
        BoundariedGraph::new(Graph::from_edges(r.n, r.edges)?, r.boundary)
    }
}

impl BoundariedGraph {
    pub fn new(graph: Graph, boundary: Vec<usize>) -> Result<Self> {
        let set: VertexSet = boundary.iter().copied().collect();
        if set.len() != boundary.len() || boundary.iter().any(|&v| v >= graph.n()) {
            return Err(Error::contract("boundary must list distinct vertices of the graph"));
        }
        Ok(BoundariedGraph { graph, boundary })
    }

    pub fn t(&self) -> usize {
        self.boundary.len()
    }

    /// Position (label - 1) of `v` in the boundary.
    pub fn label_of(&self, v: usize) -> Option<usize> {
        self.boundary.iter().position(|&b| b == v)
    }

    pub fn interior(&self) -> Vec<usize> {
        let b: VertexSet = self.boundary.iter().copied().collect();
        self.graph.vertices().filter(|&v| !b.contains(v)).collect()
    }

    pub fn interior_size(&self) -> usize {
        self.graph.n() - self.t()
    }

    pub fn has_boundary_edges(&self) -> bool {
        self.boundary
            .iter()
            .enumerate()
            .any(|(i, &u)| self.boundary[i + 1..].iter().any(|&v| self.graph.has_edge(u, v)))
    }
}

/// Glues `b` onto `a` by identifying equal labels. The vertices of `a` keep
/// their ids; `map[v]` is the id of `b`'s vertex `v` in the result.
pub fn glue_with_map(a: &BoundariedGraph, b: &BoundariedGraph) -> Result<(Graph, Vec<usize>)> {
    if a.t() != b.t() {
        return Err(Error::contract(format!(
            "cannot glue a {}-boundaried graph to a {}-boundaried graph",
            a.t(),
            b.t()
        )));
    }
    let mut map = vec![usize::MAX; b.graph.n()];
    for (i, &v) in b.boundary.iter().enumerate() {
        map[v] = a.boundary[i];
    }
    let mut next = a.graph.n();
    for slot in map.iter_mut().filter(|m| **m == usize::MAX) {
        *slot = next;
        next += 1;
    }
    let edges = a.graph.edges().chain(b.graph.edges().map(|(u, v)| (map[u], map[v])));
    Ok((Graph::from_edges(next, edges)?, map))
}

/// `a ⊕ b`: disjoint union with equal labels identified, parallel edges
/// merged.
pub fn glue(a: &BoundariedGraph, b: &BoundariedGraph) -> Result<Graph> {
    Ok(glue_with_map(a, b)?.0)
}

/// Gluing that keeps the shared boundary, so the result can be glued again.
pub fn glue_boundaried(a: &BoundariedGraph, b: &BoundariedGraph) -> Result<BoundariedGraph> {
    let (graph, _) = glue_with_map(a, b)?;
    Ok(BoundariedGraph {
        graph,
        boundary: a.boundary.clone(),
    })
}

/// The two sides of a separation, with the original id of each local vertex.
#[derive(Clone, Debug)]
pub struct Unglued {
    pub inside: BoundariedGraph,
    pub inside_ids: Vec<usize>,
    pub outside: BoundariedGraph,
    pub outside_ids: Vec<usize>,
}

/// Splits `g` along `boundary ⊆ w`: the inside is `g[w]`, the outside is
/// `g - (w \ boundary)`. Edges among boundary vertices appear on both sides.
pub fn unglue(g: &Graph, w: &VertexSet, boundary: &[usize]) -> Result<Unglued> {
    let bset: VertexSet = boundary.iter().copied().collect();
    if bset.len() != boundary.len() || !bset.is_subset(w) {
        return Err(Error::contract("boundary must be distinct vertices of w"));
    }
    let core = w.difference(&bset);
    if !g.neighbors_in(&core, &VertexSet::full(g.n())).is_subset(&bset) {
        return Err(Error::contract("boundary does not separate w from the rest"));
    }
    let inside = induced_subgraph(g, w);
    let outside = induced_subgraph(g, &VertexSet::full(g.n()).difference(&core));
    let relabel = |ind: &crate::graph::Induced| boundary.iter().map(|&v| ind.to_local(v).unwrap()).collect();
    Ok(Unglued {
        inside: BoundariedGraph {
            boundary: relabel(&inside),
            graph: inside.graph.clone(),
        },
        inside_ids: inside.original.clone(),
        outside: BoundariedGraph {
            boundary: relabel(&outside),
            graph: outside.graph.clone(),
        },
        outside_ids: outside.original,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn bg(n: usize, edges: &[(usize, usize)], boundary: &[usize]) -> BoundariedGraph {
        BoundariedGraph::new(Graph::from_edges(n, edges.iter().copied()).unwrap(), boundary.to_vec()).unwrap()
    }

    #[test]
    fn glue_examples() {
        let k1 = bg(1, &[], &[0]);
        let g = glue(&k1, &k1).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));

        let a = bg(2, &[(0, 1)], &[1]);
        let b = bg(2, &[(0, 1)], &[0]);
        let p3 = glue(&a, &b).unwrap();
        assert_eq!((p3.n(), p3.m()), (3, 2));

        let tri = bg(3, &[(0, 1), (1, 2), (0, 2)], &[0, 1]);
        let edge = bg(2, &[(0, 1)], &[0, 1]);
        let g = glue(&tri, &edge).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));

        assert!(glue(&k1, &edge).is_err());
    }

    #[test]
    fn unglue_examples() {
        let g = path(3);
        let all = unglue(&g, &VertexSet::full(3), &[]).unwrap();
        assert_eq!(all.inside.graph, g);
        assert_eq!(all.outside.graph.n(), 0);

        let parts = unglue(&g, &[0, 1].into_iter().collect(), &[1]).unwrap();
        assert_eq!(parts.inside.graph.m(), 1);
        assert_eq!(parts.outside_ids, vec![1, 2]);
        assert_eq!(parts.outside.graph.m(), 1);
        assert_eq!(glue(&parts.inside, &parts.outside).unwrap().m(), 2);

        assert!(unglue(&g, &[0, 1].into_iter().collect(), &[0]).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let b = bg(3, &[(0, 1), (1, 2)], &[2, 0]);
        let text = serde_json::to_string(&b).unwrap();
        let back: BoundariedGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, b);
    }
}
