use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::boundaried::BoundariedGraph;

/// `(s, len, t)`: a path with `len` edges from label `s` to label `t`, where
/// label 0 stands for a non-boundary endpoint. Stored with `s <= t`.
pub type Triple = (u8, u8, u8);

/// The set of configurations a boundaried graph satisfies. A configuration is
/// a sorted multiset of triples realized by distinct paths that meet the
/// boundary only at their ends, share only boundary vertices, and never
/// put a boundary vertex on three paths. At most two path ends may lie off
/// the boundary: a path of the glued graph leaves pieces with at most two
/// free ends, so larger configurations carry no information.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LpSignature {
    pub configs: BTreeSet<Vec<Triple>>,
}

/// Longest segment a piece of treedepth at most `d` can contain: `2^d - 1`
/// inner vertices plus two boundary ends.
pub fn length_cap(d: usize) -> usize {
    1usize << d.min(7)
}

struct Segment {
    triple: Triple,
    /// Non-boundary vertices on the path.
    inner: u64,
}

fn segments(h: &BoundariedGraph, cap: usize) -> Result<Vec<Segment>> {
    let g = &h.graph;
    let n = g.n();
    if n > 64 {
        return Err(Error::SizeLimit {
            what: "lp_signature",
            size: n,
            limit: 64,
        });
    }
    let label: Vec<u8> = (0..n).map(|v| h.label_of(v).map_or(0, |i| i as u8 + 1)).collect();
    let mut seen: HashSet<(Triple, u64)> = HashSet::new();
    let mut out = Vec::new();
    let mut record = |a: usize, b: usize, len: usize, inner: u64, out: &mut Vec<Segment>| -> Result<()> {
        if len > cap {
            return Err(Error::Invariant(format!(
                "piece has a segment of length {len}, above the cap {cap}"
            )));
        }
        let (x, y) = (label[a].min(label[b]), label[a].max(label[b]));
        let triple = (x, len as u8, y);
        if seen.insert((triple, inner)) {
            out.push(Segment { triple, inner });
        }
        Ok(())
    };
    for s in 0..n {
        let start_inner = if label[s] == 0 { 1u64 << s } else { 0 };
        record(s, s, 0, start_inner, &mut out)?;
        // Iterative DFS over simple paths from s.
        let mut stack: Vec<(usize, usize)> = vec![(s, 0)];
        let mut on_path = 1u64 << s;
        let mut inner = start_inner;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            let nbrs = g.neighbors(v);
            // Only the start may be a boundary vertex with successors.
            let extendable = v == s || label[v] == 0;
            if !extendable || *next >= nbrs.len() {
                stack.pop();
                on_path &= !(1u64 << v);
                inner &= !(1u64 << v);
                continue;
            }
            let w = nbrs[*next];
            *next += 1;
            if on_path >> w & 1 == 1 {
                continue;
            }
            let len = stack.len();
            if label[w] == 0 {
                inner |= 1 << w;
            }
            on_path |= 1 << w;
            record(s, w, len, inner, &mut out)?;
            stack.push((w, 0));
        }
    }
    Ok(out)
}

pub fn lp_signature(h: &BoundariedGraph, d: usize) -> Result<LpSignature> {
    let t = h.t();
    let segs = segments(h, length_cap(d))?;
    // State: (inner vertices used, configuration); usage is derived.
    let mut states: HashSet<(u64, Vec<Triple>)> = HashSet::from([(0, Vec::new())]);
    for seg in &segs {
        let mut added = Vec::new();
        for (mask, config) in &states {
            if mask & seg.inner != 0 {
                continue;
            }
            let mut next = config.clone();
            let pos = next.partition_point(|x| *x <= seg.triple);
            next.insert(pos, seg.triple);
            if !admissible(&next, t) {
                continue;
            }
            added.push((mask | seg.inner, next));
        }
        states.extend(added);
    }
    Ok(LpSignature {
        configs: states.into_iter().map(|(_, c)| c).collect(),
    })
}

/// Every boundary label ends at most two paths and at most two ends are free.
fn admissible(config: &[Triple], t: usize) -> bool {
    let mut usage = vec![0u8; t + 1];
    for &(s, len, e) in config {
        if s == e && len == 0 {
            usage[s as usize] += if s == 0 { 2 } else { 1 };
        } else {
            usage[s as usize] += 1;
            usage[e as usize] += 1;
        }
    }
    usage.iter().all(|&u| u <= 2)
}
