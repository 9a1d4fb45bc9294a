//! Bottom-up protrusion replacement and the kernelization pipeline built on
//! it.
//!
//! A cluster `W` with boundary `B = N(W)` becomes the piece `g[W ∪ B]` minus
//! the edges inside `B` (those stay with the rest of the graph). The piece is
//! walked along a nice tree decomposition whose bags all contain `B`; every
//! forget and join node swaps the partial piece for its table representative
//! and accumulates the offset difference, so no intermediate graph grows
//! beyond two representatives plus a bag.

use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{dfs_path_decomposition, make_nice, treedepth_check, NodeKind, TreeDecomposition};
use crate::error::{Error, Result};
use crate::graph::{connected_components, induced_subgraph, Graph, VertexSet};
use crate::modulator::approx_td_modulator;
use crate::protrusion::decompose;

use super::boundaried::{glue_boundaried, BoundariedGraph};
use super::table::{signature, Problem, RepresentativeTable};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ClusterStatus {
    Replaced,
    /// The representative is not smaller than the cluster.
    AlreadyMinimal,
    /// Some partial piece has a signature the table does not contain.
    MissingKey { boundary_size: usize },
    /// A bag exceeds the table's boundary size.
    BagTooLarge { bag: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ClusterReport {
    pub boundary: VertexSet,
    pub before: usize,
    pub after: usize,
    pub delta: i64,
    #[serde(flatten)]
    pub status: ClusterStatus,
}

/// Representative of a whole cluster piece, boundary listed in ascending
/// order of the original boundary vertices.
struct Reduced {
    rep: BoundariedGraph,
    mu: i64,
}

enum Attempt {
    Done(Reduced),
    Stuck(ClusterStatus),
}

struct Partial {
    piece: BoundariedGraph,
    mu: i64,
}

fn lookup(problem: Problem, table: &RepresentativeTable, piece: &BoundariedGraph) -> Result<std::result::Result<Partial, ClusterStatus>> {
    let b = piece.t();
    if b > table.t {
        return Ok(Err(ClusterStatus::BagTooLarge { bag: b }));
    }
    let (key, offset) = match signature(problem, piece, table.d) {
        Ok(x) => x,
        // A segment beyond the length cap: the piece cannot be keyed.
        Err(Error::Invariant(_)) => return Ok(Err(ClusterStatus::MissingKey { boundary_size: b })),
        Err(e) => return Err(e),
    };
    Ok(match table.lookup(b, &key) {
        Some(entry) => Ok(Partial {
            piece: entry.representative.clone(),
            mu: offset - entry.delta_base,
        }),
        None => Err(ClusterStatus::MissingKey { boundary_size: b }),
    })
}

fn reduce_cluster(g: &Graph, cluster: &VertexSet, boundary: &VertexSet, table: &RepresentativeTable) -> Result<Attempt> {
    let problem = table.problem;
    let ind = induced_subgraph(g, &cluster.union(boundary));
    let bl = ind.set_to_local(boundary);
    let piece_graph = Graph::from_edges(
        ind.graph.n(),
        ind.graph.edges().filter(|&(u, v)| !(bl.contains(u) && bl.contains(v))),
    )?;
    let inner = ind.set_to_local(cluster);

    let mut bags = vec![bl.clone()];
    let mut parent = vec![None];
    for chain in elimination_bags(&piece_graph, &inner, table.d)? {
        let first = bags.len();
        let k = chain.len();
        for (i, bag) in chain.into_iter().enumerate() {
            bags.push(bag.union(&bl));
            parent.push(Some(if i + 1 < k { first + i + 1 } else { 0 }));
        }
    }
    let nice = make_nice(&piece_graph, &TreeDecomposition { bags, parent }, &bl)?;

    let mut states: Vec<Option<Partial>> = (0..nice.nodes.len()).map(|_| None).collect();
    for (i, node) in nice.nodes.iter().enumerate() {
        let bag = node.bag.as_slice();
        let state = match node.kind {
            NodeKind::Leaf => Partial {
                piece: BoundariedGraph {
                    graph: Graph::new(1),
                    boundary: vec![0],
                },
                mu: 0,
            },
            NodeKind::Introduce(v) => {
                let mut st = states[node.children[0]].take().expect("child state");
                let id = st.piece.graph.add_vertex();
                let pos = bag.binary_search(&v).unwrap();
                st.piece.boundary.insert(pos, id);
                st
            }
            NodeKind::Forget(v) => {
                let st = states[node.children[0]].take().expect("child state");
                let child_bag = nice.nodes[node.children[0]].bag.as_slice();
                let p = child_bag.binary_search(&v).unwrap();
                let mut piece = st.piece;
                let pv = piece.boundary[p];
                for (q, &w) in child_bag.iter().enumerate() {
                    if w != v && piece_graph.has_edge(v, w) {
                        piece.graph.add_edge(pv, piece.boundary[q]);
                    }
                }
                piece.boundary.remove(p);
                match lookup(problem, table, &piece)? {
                    Ok(rep) => Partial {
                        piece: rep.piece,
                        mu: st.mu + rep.mu,
                    },
                    Err(status) => return Ok(Attempt::Stuck(status)),
                }
            }
            NodeKind::Join => {
                let a = states[node.children[0]].take().expect("child state");
                let b = states[node.children[1]].take().expect("child state");
                let glued = glue_boundaried(&a.piece, &b.piece)?;
                match lookup(problem, table, &glued)? {
                    Ok(rep) => Partial {
                        piece: rep.piece,
                        mu: a.mu + b.mu + rep.mu,
                    },
                    Err(status) => return Ok(Attempt::Stuck(status)),
                }
            }
        };
        states[i] = Some(state);
    }
    let root = states[nice.root].take().map(|p| Reduced { rep: p.piece, mu: p.mu });
    Ok(Attempt::Done(root.unwrap_or_else(|| Reduced {
        rep: BoundariedGraph {
            graph: Graph::new(0),
            boundary: vec![],
        },
        mu: 0,
    })))
}

/// One chain of bags per tree of a shallow elimination forest of `g[inner]`:
/// the root-to-leaf paths, leaves in preorder. Falls back to DFS trees when
/// `g[inner]` is deeper than `d`.
fn elimination_bags(g: &Graph, inner: &VertexSet, d: usize) -> Result<Vec<Vec<VertexSet>>> {
    let sub = induced_subgraph(g, inner);
    let Some(td) = treedepth_check(&sub.graph, d) else {
        return connected_components(&sub.graph, &VertexSet::new())
            .iter()
            .map(|c| dfs_path_decomposition(&sub.graph, c).map(|pd| pd.bags.iter().map(|b| lift(&sub.original, b)).collect()))
            .collect();
    };
    let n = sub.graph.n();
    let mut children = vec![Vec::new(); n];
    for v in 0..n {
        if let Some(p) = td.parent[v] {
            children[p].push(v);
        }
    }
    let mut out = Vec::new();
    for root in td.roots() {
        let mut chain = Vec::new();
        let mut path = Vec::new();
        let mut stack = vec![(root, 0usize)];
        while let Some((v, depth)) = stack.pop() {
            path.truncate(depth);
            path.push(v);
            if children[v].is_empty() {
                chain.push(lift(&sub.original, &path.iter().copied().collect()));
            }
            for &c in children[v].iter().rev() {
                stack.push((c, depth + 1));
            }
        }
        out.push(chain);
    }
    Ok(out)
}

fn lift(original: &[usize], set: &VertexSet) -> VertexSet {
    set.iter().map(|v| original[v]).collect()
}

/// Outcome of replacing one vertex set.
#[derive(Clone, Debug)]
pub struct Replacement {
    /// `V(g) \ w` in ascending order, then the representative's inner
    /// vertices.
    pub graph: Graph,
    pub delta: i64,
    /// Original id of each vertex of `graph`, `None` for new vertices.
    pub original: Vec<Option<usize>>,
    pub report: ClusterReport,
}

fn check_table(problem: Problem, d: usize, table: &RepresentativeTable) -> Result<()> {
    if table.problem != problem || table.d != d {
        return Err(Error::Argument(format!(
            "table is for {} at depth {}, needed {} at depth {}",
            table.problem, table.d, problem, d
        )));
    }
    Ok(())
}

/// Replaces `w` (the vertices to be swapped out; its neighborhood is the
/// boundary) by its representative. The instance is left unchanged when the
/// table lacks a signature or the representative is not smaller. For Vertex
/// Cover, `OPT(g) = OPT(g') + delta`; for Longest Path `delta` is 0.
pub fn replace_protrusion(g: &Graph, w: &VertexSet, table: &RepresentativeTable) -> Result<Replacement> {
    let boundary = g.neighbors_in(w, &VertexSet::full(g.n()));
    let report = cluster_report(g, w, &boundary, table)?;
    let rest = VertexSet::full(g.n()).difference(w);
    let mut b = Builder::new(g, &rest);
    let delta = b.add_cluster(g, w, &boundary, &report.1);
    Ok(Replacement {
        graph: b.finish()?,
        delta,
        original: b.original,
        report: report.0,
    })
}

fn cluster_report(
    g: &Graph,
    cluster: &VertexSet,
    boundary: &VertexSet,
    table: &RepresentativeTable,
) -> Result<(ClusterReport, Option<Reduced>)> {
    let before = cluster.len();
    let (status, reduced) = match reduce_cluster(g, cluster, boundary, table)? {
        Attempt::Stuck(status) => (status, None),
        Attempt::Done(r) if r.rep.interior_size() < before => (ClusterStatus::Replaced, Some(r)),
        Attempt::Done(_) => (ClusterStatus::AlreadyMinimal, None),
    };
    let (after, delta) = reduced.as_ref().map_or((before, 0), |r| (r.rep.interior_size(), r.mu));
    Ok((
        ClusterReport {
            boundary: boundary.clone(),
            before,
            after,
            delta,
            status,
        },
        reduced,
    ))
}

/// Assembles the reduced graph: kept vertices first, then clusters in order.
struct Builder {
    original: Vec<Option<usize>>,
    local: std::collections::HashMap<usize, usize>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn new(g: &Graph, keep: &VertexSet) -> Self {
        let original: Vec<Option<usize>> = keep.iter().map(Some).collect();
        let local = keep.iter().enumerate().map(|(i, v)| (v, i)).collect::<std::collections::HashMap<_, _>>();
        let edges = g
            .edges()
            .filter_map(|(u, v)| Some((*local.get(&u)?, *local.get(&v)?)))
            .collect();
        Builder { original, local, edges }
    }

    fn add_cluster(&mut self, g: &Graph, cluster: &VertexSet, boundary: &VertexSet, reduced: &Option<Reduced>) -> i64 {
        match reduced {
            None => {
                for v in cluster.iter() {
                    self.local.insert(v, self.original.len());
                    self.original.push(Some(v));
                }
                for v in cluster.iter() {
                    for &w in g.neighbors(v) {
                        if w < v && cluster.contains(w) || !cluster.contains(w) {
                            self.edges.push((self.local[&v], self.local[&w]));
                        }
                    }
                }
                0
            }
            Some(r) => {
                let mut map = vec![usize::MAX; r.rep.graph.n()];
                for (i, &bv) in r.rep.boundary.iter().enumerate() {
                    map[bv] = self.local[&boundary.as_slice()[i]];
                }
                for slot in map.iter_mut().filter(|m| **m == usize::MAX) {
                    *slot = self.original.len();
                    self.original.push(None);
                }
                self.edges.extend(r.rep.graph.edges().map(|(u, v)| (map[u], map[v])));
                r.mu
            }
        }
    }

    fn finish(&self) -> Result<Graph> {
        Graph::from_edges(self.original.len(), self.edges.iter().copied())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelReport {
    pub problem: Problem,
    pub d: usize,
    pub t: usize,
    pub n_before: usize,
    pub m_before: usize,
    pub modulator_size: usize,
    pub y0_size: usize,
    pub clusters: Vec<ClusterReport>,
    pub unreduced: usize,
    pub n_after: usize,
    pub m_after: usize,
    pub delta: i64,
}

#[derive(Clone, Debug)]
pub struct KernelResult {
    pub graph: Graph,
    pub delta: i64,
    pub original: Vec<Option<usize>>,
    pub report: KernelReport,
}

/// Modulator, protrusion decomposition, then replacement of every cluster.
pub fn kernelize(g: &Graph, d: usize, t: usize, problem: Problem, table: &RepresentativeTable) -> Result<KernelResult> {
    check_table(problem, d, table)?;
    let modulator = approx_td_modulator(g, d)?;
    let pd = decompose(g, &modulator.modulator, d, t)?;
    let outcomes: Vec<(ClusterReport, Option<Reduced>)> = pd
        .clusters
        .par_iter()
        .map(|c| cluster_report(g, &c.vertices, &c.boundary, table))
        .collect::<Result<_>>()?;
    let mut b = Builder::new(g, &pd.y0);
    let mut delta = 0;
    for (c, (_, reduced)) in pd.clusters.iter().zip(&outcomes) {
        delta += b.add_cluster(g, &c.vertices, &c.boundary, reduced);
    }
    let graph = b.finish()?;
    let clusters: Vec<ClusterReport> = outcomes.into_iter().map(|o| o.0).collect();
    let report = KernelReport {
        problem,
        d,
        t,
        n_before: g.n(),
        m_before: g.m(),
        modulator_size: modulator.modulator.len(),
        y0_size: pd.y0.len(),
        unreduced: clusters
            .iter()
            .filter(|c| matches!(c.status, ClusterStatus::MissingKey { .. } | ClusterStatus::BagTooLarge { .. }))
            .count(),
        clusters,
        n_after: graph.n(),
        m_after: graph.m(),
        delta,
    };
    Ok(KernelResult {
        graph,
        delta,
        original: b.original,
        report,
    })
}
