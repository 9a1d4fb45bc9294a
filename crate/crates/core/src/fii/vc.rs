use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{induced_subgraph, VertexSet};
use crate::oracles::{brute_vertex_cover_with, OracleBudget};

use super::boundaried::BoundariedGraph;

/// Marks a boundary pattern no vertex cover can realize. Vertex Cover never
/// produces it, but the encoding keeps room for it.
pub const INFEASIBLE: u8 = u8::MAX;

/// Normalized cost table of a boundaried graph. `table[X]` for a label mask
/// `X` (bit `i` = label `i + 1`) plus `offset` is the size of a smallest
/// vertex cover meeting the boundary in exactly `X`. Entries are capped at
/// `t + 1`: such patterns are never better than taking the whole boundary.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VcSignature {
    pub offset: usize,
    pub table: Vec<u8>,
}

/// Raw cost of each boundary pattern, uncapped and unnormalized.
pub fn vc_costs(h: &BoundariedGraph) -> Result<Vec<Option<usize>>> {
    let t = h.t();
    let g = &h.graph;
    let interior: VertexSet = h.interior().into_iter().collect();
    let budget = OracleBudget::with_max_vertices(64);
    let mut costs = Vec::with_capacity(1 << t);
    for mask in 0usize..(1 << t) {
        let taken = |i: usize| mask >> i & 1 == 1;
        // Boundary vertices left out force all their neighbors in.
        let mut forced = VertexSet::new();
        let mut feasible = true;
        for (i, &b) in h.boundary.iter().enumerate() {
            if taken(i) {
                continue;
            }
            for &w in g.neighbors(b) {
                match h.label_of(w) {
                    Some(j) if !taken(j) => feasible = false,
                    Some(_) => {}
                    None => {
                        forced.insert(w);
                    }
                }
            }
        }
        if !feasible {
            costs.push(None);
            continue;
        }
        let rest = induced_subgraph(g, &interior.difference(&forced));
        let inner = brute_vertex_cover_with(&rest.graph, &budget)?;
        costs.push(Some(mask.count_ones() as usize + forced.len() + inner));
    }
    Ok(costs)
}

pub fn vc_signature(h: &BoundariedGraph) -> Result<VcSignature> {
    let costs = vc_costs(h)?;
    let offset = costs.iter().flatten().copied().min().unwrap_or(0);
    let cap = h.t() + 1;
    let table = costs
        .iter()
        .map(|c| c.map_or(INFEASIBLE, |c| (c - offset).min(cap) as u8))
        .collect();
    Ok(VcSignature { offset, table })
}
