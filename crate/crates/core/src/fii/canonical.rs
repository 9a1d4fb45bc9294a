//! Enumeration of small boundaried graphs up to isomorphisms that fix every
//! boundary label.
//!
//! A graph is stored as boundary vertices `0..b` followed by `k` inner
//! vertices. Its canonical code is the lexicographically least encoding over
//! all orderings of the inner vertices that keep them sorted by an invariant
//! (boundary neighborhood, inner degree).

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::decomposition::treedepth_check;
use crate::graph::Graph;

use super::boundaried::BoundariedGraph;

/// Which boundaried graphs an enumeration produces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceClass {
    /// No edges between boundary vertices; the inner vertices induce a
    /// graph of treedepth at most `d`. These are the pieces protrusion
    /// replacement cuts out.
    Pieces,
    /// Arbitrary boundary edges; the whole graph has treedepth at most `d`.
    Whole,
}

/// Compact description: boundary edge mask, then per inner vertex its
/// boundary mask and its adjacency to earlier inner vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Code {
    pub b: usize,
    pub boundary_edges: u64,
    pub rows: Vec<(u32, u32)>,
}

impl Code {
    pub fn inner(&self) -> usize {
        self.rows.len()
    }

    fn boundary_pairs(b: usize) -> Vec<(usize, usize)> {
        (0..b).flat_map(|i| (i + 1..b).map(move |j| (i, j))).collect()
    }

    pub fn to_boundaried(&self) -> BoundariedGraph {
        let b = self.b;
        let mut edges = Vec::new();
        for (bit, (i, j)) in Self::boundary_pairs(b).into_iter().enumerate() {
            if self.boundary_edges >> bit & 1 == 1 {
                edges.push((i, j));
            }
        }
        for (k, &(bm, im)) in self.rows.iter().enumerate() {
            for i in 0..b {
                if bm >> i & 1 == 1 {
                    edges.push((i, b + k));
                }
            }
            for j in 0..k {
                if im >> j & 1 == 1 {
                    edges.push((b + j, b + k));
                }
            }
        }
        BoundariedGraph {
            graph: Graph::from_edges(b + self.rows.len(), edges).expect("valid code"),
            boundary: (0..b).collect(),
        }
    }

    /// Inner graph as symmetric bitmasks.
    fn inner_masks(&self) -> Vec<u32> {
        let k = self.rows.len();
        let mut adj = vec![0u32; k];
        for (i, &(_, im)) in self.rows.iter().enumerate() {
            for j in 0..i {
                if im >> j & 1 == 1 {
                    adj[i] |= 1 << j;
                    adj[j] |= 1 << i;
                }
            }
        }
        adj
    }
}

/// Canonical code for the given boundary masks and symmetric inner adjacency.
fn canonical(b: usize, boundary_edges: u64, bmask: &[u32], adj: &[u32]) -> Code {
    let k = bmask.len();
    let inv = |v: usize| (bmask[v], adj[v].count_ones());
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| inv(v));
    // Runs of equal invariant may be permuted freely.
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=k {
        if i == k || inv(order[i]) != inv(order[start]) {
            groups.push((start, i));
            start = i;
        }
    }
    let encode = |ord: &[usize]| -> Vec<(u32, u32)> {
        let mut pos = vec![0usize; k];
        for (p, &v) in ord.iter().enumerate() {
            pos[v] = p;
        }
        ord.iter()
            .enumerate()
            .map(|(p, &v)| {
                let mut im = 0u32;
                let mut rest = adj[v];
                while rest != 0 {
                    let w = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    if pos[w] < p {
                        im |= 1 << pos[w];
                    }
                }
                (bmask[v], im)
            })
            .collect()
    };
    let mut best = encode(&order);
    permute_groups(&mut order, &groups, 0, &mut |ord| {
        let e = encode(ord);
        if e < best {
            best = e;
        }
    });
    Code {
        b,
        boundary_edges,
        rows: best,
    }
}

fn permute_groups(order: &mut Vec<usize>, groups: &[(usize, usize)], gi: usize, visit: &mut dyn FnMut(&[usize])) {
    if gi == groups.len() {
        visit(order);
        return;
    }
    let (lo, hi) = groups[gi];
    heap_permute(order, lo, hi - lo, groups, gi, visit);
}

fn heap_permute(
    order: &mut Vec<usize>,
    lo: usize,
    k: usize,
    groups: &[(usize, usize)],
    gi: usize,
    visit: &mut dyn FnMut(&[usize]),
) {
    if k <= 1 {
        permute_groups(order, groups, gi + 1, visit);
        return;
    }
    for i in 0..k - 1 {
        heap_permute(order, lo, k - 1, groups, gi, visit);
        if k.is_multiple_of(2) {
            order.swap(lo + i, lo + k - 1);
        } else {
            order.swap(lo, lo + k - 1);
        }
    }
    heap_permute(order, lo, k - 1, groups, gi, visit);
}

fn class_ok(code: &Code, d: usize, class: PieceClass) -> bool {
    let g = match class {
        PieceClass::Pieces => {
            let masks = code.inner_masks();
            let adj = &masks;
            let k = adj.len();
            let edges = (0..k).flat_map(|i| (0..i).filter(move |&j| adj[i] >> j & 1 == 1).map(move |j| (j, i)));
            Graph::from_edges(k, edges).expect("valid inner graph")
        }
        PieceClass::Whole => code.to_boundaried().graph,
    };
    treedepth_check(&g, d).is_some()
}

/// All canonical boundaried graphs with `b` boundary vertices and up to
/// `max_inner` inner vertices, grouped by inner vertex count. Every graph
/// with `k + 1` inner vertices arises from one with `k` by adding a vertex,
/// and both classes are closed under deleting inner vertices, so growing
/// level by level is complete.
pub fn enumerate_levels(b: usize, d: usize, max_inner: usize, class: PieceClass) -> Vec<Vec<Code>> {
    assert!(b <= 16 && max_inner <= 16, "enumeration bounds too large");
    let pairs = Code::boundary_pairs(b).len();
    let base_masks: Vec<u64> = match class {
        PieceClass::Pieces => vec![0],
        PieceClass::Whole => (0..1u64 << pairs).collect(),
    };
    let mut level: Vec<Code> = base_masks
        .into_iter()
        .map(|m| Code {
            b,
            boundary_edges: m,
            rows: Vec::new(),
        })
        .filter(|c| class_ok(c, d, class))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut levels = vec![level.clone()];
    for k in 0..max_inner {
        // With d = 1 in the piece class the inner graph stays edgeless.
        let inner_choices: u32 = if class == PieceClass::Pieces && d <= 1 { 1 } else { 1 << k };
        let next: BTreeSet<Code> = level
            .par_iter()
            .flat_map_iter(|code| {
                let adj = code.inner_masks();
                let bm: Vec<u32> = code.rows.iter().map(|r| r.0).collect();
                (0..1u32 << b).flat_map(move |new_b| {
                    let adj = adj.clone();
                    let bm = bm.clone();
                    (0..inner_choices).filter_map(move |new_i| {
                        let mut a = adj.clone();
                        for (j, aj) in a.iter_mut().enumerate() {
                            if new_i >> j & 1 == 1 {
                                *aj |= 1 << k;
                            }
                        }
                        a.push(new_i);
                        let mut masks = bm.clone();
                        masks.push(new_b);
                        let c = canonical(b, code.boundary_edges, &masks, &a);
                        class_ok(&c, d, class).then_some(c)
                    })
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        level = next.into_iter().collect();
        levels.push(level.clone());
    }
    levels
}

/// Canonical code of an arbitrary boundaried graph (boundary labels fixed).
pub fn canonical_code(h: &BoundariedGraph) -> Code {
    let b = h.t();
    let inner = h.interior();
    let pos = |v: usize| inner.binary_search(&v).ok();
    let mut boundary_edges = 0u64;
    for (bit, (i, j)) in Code::boundary_pairs(b).into_iter().enumerate() {
        if h.graph.has_edge(h.boundary[i], h.boundary[j]) {
            boundary_edges |= 1 << bit;
        }
    }
    let mut bmask = vec![0u32; inner.len()];
    let mut adj = vec![0u32; inner.len()];
    for (p, &v) in inner.iter().enumerate() {
        for &w in h.graph.neighbors(v) {
            match (h.label_of(w), pos(w)) {
                (Some(l), _) => bmask[p] |= 1 << l,
                (None, Some(q)) => adj[p] |= 1 << q,
                _ => unreachable!(),
            }
        }
    }
    canonical(b, boundary_edges, &bmask, &adj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_inner_vertices_share_a_code() {
        // Boundary 0; inner path 1-2-3 attached at 1 versus at 3.
        let a = BoundariedGraph::new(Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap(), vec![0]).unwrap();
        let b = BoundariedGraph::new(Graph::from_edges(4, [(0, 3), (1, 2), (2, 3)]).unwrap(), vec![0]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        let c = BoundariedGraph::new(Graph::from_edges(4, [(0, 2), (1, 2), (2, 3)]).unwrap(), vec![0]).unwrap();
        assert_ne!(canonical_code(&a), canonical_code(&c));
    }

    #[test]
    fn code_round_trip() {
        let h = BoundariedGraph::new(Graph::from_edges(5, [(0, 2), (1, 3), (2, 3), (3, 4)]).unwrap(), vec![0, 1]).unwrap();
        let code = canonical_code(&h);
        assert_eq!(canonical_code(&code.to_boundaried()), code);
    }

    #[test]
    fn boundary_labels_are_not_permuted() {
        let a = BoundariedGraph::new(Graph::from_edges(3, [(0, 2)]).unwrap(), vec![0, 1]).unwrap();
        let b = BoundariedGraph::new(Graph::from_edges(3, [(1, 2)]).unwrap(), vec![0, 1]).unwrap();
        assert_ne!(canonical_code(&a), canonical_code(&b));
    }

    #[test]
    fn level_counts() {
        // b = 0: unlabeled graphs with td <= 1 are edgeless, one per size.
        let levels = enumerate_levels(0, 1, 3, PieceClass::Pieces);
        assert_eq!(levels.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 1, 1, 1]);
        // b = 1, td <= 1: multisets of inner vertices, each adjacent or not.
        let levels = enumerate_levels(1, 1, 3, PieceClass::Pieces);
        assert_eq!(levels.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 3, 4]);
        // Unlabeled graphs on 4 vertices with td <= 2 (star forests): 5.
        let levels = enumerate_levels(0, 2, 4, PieceClass::Pieces);
        assert_eq!(levels[4].len(), 5);
        // Whole class on 2 labels: with or without the boundary edge.
        let levels = enumerate_levels(2, 2, 0, PieceClass::Whole);
        assert_eq!(levels[0].len(), 2);
    }
}
