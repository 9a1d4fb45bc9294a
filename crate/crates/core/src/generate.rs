//! Instance generators with a planted treedepth modulator. Every generator
//! checks its planted set before returning.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::modulator::verify_modulator;

#[derive(Clone, Debug)]
pub struct Instance {
    pub graph: Graph,
    pub modulator: VertexSet,
    /// Treedepth bound of `graph - modulator`.
    pub d: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceKind {
    ApexPendants { k: usize, copies: usize, d: usize },
    SubdividedGrid { rows: usize, cols: usize, subdiv: usize },
    RandomModulated { n: usize, k: usize, d: usize, seed: u64 },
}

pub fn generate_instance(kind: &InstanceKind) -> Result<Instance> {
    let inst = match *kind {
        InstanceKind::ApexPendants { k, copies, d } => apex_pendants(k, copies, d)?,
        InstanceKind::SubdividedGrid { rows, cols, subdiv } => subdivided_grid(rows, cols, subdiv)?,
        InstanceKind::RandomModulated { n, k, d, seed } => random_modulated(n, k, d, seed)?,
    };
    if !verify_modulator(&inst.graph, &inst.modulator, inst.d) {
        return Err(Error::Invariant(format!("planted set of {kind:?} is not a modulator")));
    }
    Ok(inst)
}

/// Apexes `0..k`; every copy is a path on `2^d - 1` vertices whose first
/// vertex is adjacent to all apexes.
pub fn apex_pendants(k: usize, copies: usize, d: usize) -> Result<Instance> {
    if d == 0 || d > 10 {
        return Err(Error::Argument(format!("apex-pendants needs 1 <= d <= 10, got {d}")));
    }
    let len = (1usize << d) - 1;
    let mut edges = Vec::new();
    let mut next = k;
    for _ in 0..copies {
        edges.extend((0..k).map(|a| (a, next)));
        edges.extend((next..next + len - 1).map(|v| (v, v + 1)));
        next += len;
    }
    Ok(Instance {
        graph: Graph::from_edges(next, edges)?,
        modulator: (0..k).collect(),
        d,
    })
}

/// A `rows x cols` grid with every edge replaced by a path with `subdiv`
/// inner vertices. The grid vertices (ids `0..rows * cols`) form the planted
/// modulator; what remains are paths on `subdiv` vertices.
pub fn subdivided_grid(rows: usize, cols: usize, subdiv: usize) -> Result<Instance> {
    if rows == 0 || cols == 0 {
        return Err(Error::Argument("grid needs at least one row and column".into()));
    }
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    let mut next = rows * cols;
    let mut link = |a: usize, b: usize, edges: &mut Vec<(usize, usize)>| {
        let mut prev = a;
        for _ in 0..subdiv {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, b));
    };
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                link(id(r, c), id(r, c + 1), &mut edges);
            }
            if r + 1 < rows {
                link(id(r, c), id(r + 1, c), &mut edges);
            }
        }
    }
    // td(P_s) = ceil(log2(s + 1)).
    let d = (usize::BITS - subdiv.leading_zeros()) as usize;
    Ok(Instance {
        graph: Graph::from_edges(next, edges)?,
        modulator: (0..rows * cols).collect(),
        d,
    })
}

/// Modulator `0..k`; the other vertices form a random forest of height at
/// most `d` whose extra edges join ancestor–descendant pairs only, so the
/// forest itself certifies the depth. Modulator vertices attach at random.
pub fn random_modulated(n: usize, k: usize, d: usize, seed: u64) -> Result<Instance> {
    if k > n {
        return Err(Error::Argument(format!("modulator size {k} exceeds n = {n}")));
    }
    if d == 0 && k < n {
        return Err(Error::Argument("d = 0 forces the modulator to be every vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..k {
        for b in a + 1..k {
            if rng.gen_bool(0.5) {
                edges.push((a, b));
            }
        }
    }
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut depth = vec![0usize; n];
    for v in k..n {
        let candidates: Vec<usize> = (k..v).filter(|&u| depth[u] < d).collect();
        if !candidates.is_empty() && rng.gen_bool(0.85) {
            let p = candidates[rng.gen_range(0..candidates.len())];
            parent[v] = Some(p);
            depth[v] = depth[p] + 1;
            edges.push((p, v));
            let mut up = parent[p];
            while let Some(a) = up {
                if rng.gen_bool(0.3) {
                    edges.push((a, v));
                }
                up = parent[a];
            }
        } else {
            depth[v] = 1;
        }
        for a in 0..k {
            if rng.gen_bool(0.35) {
                edges.push((a, v));
            }
        }
    }
    Ok(Instance {
        graph: Graph::from_edges(n, edges)?,
        modulator: (0..k).collect(),
        d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::treedepth_exact;
    use crate::graph::remove_vertices;

    #[test]
    fn apex_pendants_star() {
        let inst = generate_instance(&InstanceKind::ApexPendants { k: 1, copies: 10, d: 1 }).unwrap();
        assert_eq!(inst.graph.n(), 11);
        assert_eq!(inst.graph.degree(0), 10);
        assert_eq!(inst.modulator.as_slice(), &[0]);
    }

    #[test]
    fn subdivided_grid_paths() {
        let inst = generate_instance(&InstanceKind::SubdividedGrid { rows: 5, cols: 5, subdiv: 3 }).unwrap();
        // 40 grid edges, each a 4-edge path.
        assert_eq!(inst.graph.m(), 160);
        assert_eq!(inst.graph.n(), 25 + 120);
        assert_eq!(inst.d, 2);
    }

    #[test]
    fn random_modulated_is_reproducible() {
        let kind = InstanceKind::RandomModulated { n: 12, k: 2, d: 2, seed: 7 };
        let a = generate_instance(&kind).unwrap();
        let b = generate_instance(&kind).unwrap();
        assert_eq!(a.graph, b.graph);
        let rest = remove_vertices(&a.graph, &a.modulator);
        assert!(treedepth_exact(&rest.graph).unwrap().height <= 2);
    }

    #[test]
    fn invalid_parameters() {
        assert!(apex_pendants(1, 1, 0).is_err());
        assert!(random_modulated(3, 4, 1, 0).is_err());
        assert!(subdivided_grid(0, 3, 1).is_err());
    }
}
