#![allow(dead_code)]

use kernelforge::graph::{Graph, VertexSet};
use proptest::prelude::*;
use rand::Rng;

/// Graph on `n` vertices from one bit per vertex pair.
pub fn from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut i = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[i] {
                edges.push((u, v));
            }
            i += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn graphs(min_n: usize, max_n: usize) -> impl Strategy<Value = Graph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::bool::weighted(0.35), n * n.saturating_sub(1) / 2)
            .prop_map(move |bits| from_bits(n, &bits))
    })
}

pub fn gnp<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let bits: Vec<bool> = (0..n * n.saturating_sub(1) / 2).map(|_| rng.gen_bool(p)).collect();
    from_bits(n, &bits)
}

pub fn set(v: &[usize]) -> VertexSet {
    v.iter().copied().collect()
}

/// Longest x-y path (edges) in `g` by trying every length; `None` if the
/// endpoints are disconnected.
pub fn longest_st(g: &Graph, x: usize, y: usize) -> Option<usize> {
    (0..g.n()).rev().find(|&l| kernelforge::oracles::brute_exact_st_path(g, x, y, l).unwrap())
}
