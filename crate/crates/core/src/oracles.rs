//! Brute-force ground truth. These never approximate: an instance outside the
//! budget is an error.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const BUDGET_ENV: &str = "KERNELFORGE_BUDGET_MS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_millis: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        let max_millis = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&ms| ms > 0)
            .unwrap_or(60_000);
        OracleBudget {
            max_vertices: 16,
            max_millis,
        }
    }
}

impl OracleBudget {
    pub fn with_max_vertices(max_vertices: usize) -> Self {
        OracleBudget {
            max_vertices,
            ..Self::default()
        }
    }

    fn admit(&self, what: &'static str, n: usize, hard_cap: usize) -> Result<Deadline> {
        let limit = self.max_vertices.min(hard_cap);
        if n > limit {
            return Err(Error::SizeLimit {
                what,
                size: n,
                limit,
            });
        }
        Ok(Deadline {
            what,
            start: Instant::now(),
            limit: Duration::from_millis(self.max_millis),
            millis: self.max_millis,
        })
    }
}

struct Deadline {
    what: &'static str,
    start: Instant,
    limit: Duration,
    millis: u64,
}

impl Deadline {
    fn check(&self) -> Result<()> {
        if self.start.elapsed() > self.limit {
            return Err(Error::Budget {
                what: self.what,
                limit: self.millis,
            });
        }
        Ok(())
    }
}

/// Maximum number of edges on a simple path (0 for a single vertex or an
/// empty graph), by dynamic programming over (visited set, endpoint).
pub fn brute_longest_path(g: &Graph) -> Result<usize> {
    brute_longest_path_with(g, &OracleBudget::default())
}

pub fn brute_longest_path_with(g: &Graph, budget: &OracleBudget) -> Result<usize> {
    let n = g.n();
    let deadline = budget.admit("brute_longest_path", n, 24)?;
    if n == 0 {
        return Ok(0);
    }
    let adj: Vec<u32> = g.adjacency_masks().into_iter().map(|m| m as u32).collect();
    // ends[mask]: endpoints v such that some path visits exactly `mask` and ends at v.
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    let mut best = 0;
    for mask in 1usize..(1 << n) {
        if mask & 0xfff == 0 {
            deadline.check()?;
        }
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        best = best.max(mask.count_ones() as usize - 1);
        let mut rest = e;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let mut ext = adj[v] & !(mask as u32);
            while ext != 0 {
                let w = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                ends[mask | (1 << w)] |= 1 << w;
            }
        }
    }
    Ok(best)
}

/// Minimum vertex cover size by a bounded search tree.
pub fn brute_vertex_cover(g: &Graph) -> Result<usize> {
    brute_vertex_cover_with(g, &OracleBudget::default())
}

pub fn brute_vertex_cover_with(g: &Graph, budget: &OracleBudget) -> Result<usize> {
    let deadline = budget.admit("brute_vertex_cover", g.n(), 64)?;
    let adj = g.adjacency_masks();
    let alive = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut best = g.n();
    vc_branch(&adj, alive, 0, &mut best, &deadline)?;
    Ok(best)
}

fn vc_branch(adj: &[u64], alive: u64, taken: usize, best: &mut usize, dl: &Deadline) -> Result<()> {
    if taken >= *best {
        return Ok(());
    }
    // Highest-degree vertex in the remaining graph.
    let mut pick = None;
    let mut pick_deg = 0;
    let mut rest = alive;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let d = (adj[v] & alive).count_ones();
        if d > pick_deg {
            pick_deg = d;
            pick = Some(v);
        }
    }
    let Some(v) = pick else {
        *best = taken;
        return Ok(());
    };
    dl.check()?;
    let nb = adj[v] & alive;
    // Take v, or take all of N(v).
    vc_branch(adj, alive & !(1 << v), taken + 1, best, dl)?;
    if pick_deg > 1 {
        vc_branch(adj, alive & !nb & !(1 << v), taken + pick_deg as usize, best, dl)?;
    }
    Ok(())
}

/// Is there a simple `s`-`t` path with exactly `len` edges?
pub fn brute_exact_st_path(g: &Graph, s: usize, t: usize, len: usize) -> Result<bool> {
    let budget = OracleBudget::default();
    let deadline = budget.admit("brute_exact_st_path", g.n(), 64)?;
    if s == t {
        return Ok(len == 0);
    }
    let mut on_path = vec![false; g.n()];
    on_path[s] = true;
    st_search(g, s, t, len, &mut on_path, &deadline)
}

fn st_search(
    g: &Graph,
    v: usize,
    t: usize,
    remaining: usize,
    on_path: &mut [bool],
    dl: &Deadline,
) -> Result<bool> {
    if remaining == 0 {
        return Ok(false);
    }
    dl.check()?;
    for &w in g.neighbors(v) {
        if on_path[w] {
            continue;
        }
        if w == t {
            if remaining == 1 {
                return Ok(true);
            }
            continue;
        }
        on_path[w] = true;
        let found = st_search(g, w, t, remaining - 1, on_path, dl)?;
        on_path[w] = false;
        if found {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Treedepth from its recursive characterization: 0 for the empty graph, the
/// maximum over components, and `1 + min_v td(C - v)` for a connected `C`.
pub fn brute_treedepth(g: &Graph) -> Result<usize> {
    let budget = OracleBudget::default();
    let _ = budget.admit("brute_treedepth", g.n(), 20)?;
    let adj = g.adjacency_masks();
    let mut memo = HashMap::new();
    let all = if g.n() == 0 { 0 } else { (1u64 << g.n()) - 1 };
    Ok(td_mask(&adj, all, &mut memo))
}

fn td_mask(adj: &[u64], set: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if set == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&set) {
        return v;
    }
    let comps = mask_components(adj, set);
    let result = if comps.len() > 1 {
        comps.into_iter().map(|c| td_mask(adj, c, memo)).max().unwrap()
    } else {
        let mut best = usize::MAX;
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros();
            rest &= rest - 1;
            best = best.min(1 + td_mask(adj, set & !(1 << v), memo));
        }
        best
    };
    memo.insert(set, result);
    result
}

pub(crate) fn mask_components(adj: &[u64], set: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut left = set;
    while left != 0 {
        let start = left & left.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[v] & set & !comp;
            comp |= new;
            frontier |= new;
        }
        out.push(comp);
        left &= !comp;
    }
    out
}
