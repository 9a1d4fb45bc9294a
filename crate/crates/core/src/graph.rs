//! Simple undirected graphs with dense `0..n` vertex ids, vertex sets, the
//! two text formats, and the elementary algorithms everything else builds on.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Simple undirected graph. Neighbor lists are sorted ascending and symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a graph from an edge list. Duplicates are collapsed, loops rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(Error::SelfLoop { line: 0, vertex: u });
            }
            if u >= n || v >= n {
                return Err(Error::contract(format!(
                    "edge {u}-{v} out of range for {n} vertices"
                )));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Ok(Self::from_raw_adjacency(adj))
    }

    fn from_raw_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        let mut deg_sum = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            deg_sum += list.len();
        }
        Graph { adj, m: deg_sum / 2 }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Adds an edge, keeping lists sorted. Returns false if it already existed.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert_ne!(u, v, "self-loop {u}");
        match self.adj[u].binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                true
            }
        }
    }

    /// Appends a new isolated vertex and returns its id.
    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Neighborhood bitmasks; only for graphs with at most 64 vertices.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        assert!(self.n() <= 64, "adjacency_masks needs n <= 64");
        self.adj
            .iter()
            .map(|list| list.iter().fold(0u64, |acc, &v| acc | (1 << v)))
            .collect()
    }

    /// `N(set)`: vertices outside `set` adjacent to it.
    pub fn open_neighborhood(&self, set: &VertexSet) -> VertexSet {
        let mut out = BTreeSet::new();
        for v in set.iter() {
            for &w in self.neighbors(v) {
                if !set.contains(w) {
                    out.insert(w);
                }
            }
        }
        VertexSet::from_sorted(out.into_iter().collect())
    }

    /// `N_within(set)`: neighbors of `set` that lie in `within`.
    pub fn neighbors_in(&self, set: &VertexSet, within: &VertexSet) -> VertexSet {
        let mut out = BTreeSet::new();
        for v in set.iter() {
            for &w in self.neighbors(v) {
                if within.contains(w) && !set.contains(w) {
                    out.insert(w);
                }
            }
        }
        VertexSet::from_sorted(out.into_iter().collect())
    }

    /// `∂(set)`: members of `set` with a neighbor outside it.
    pub fn boundary_of(&self, set: &VertexSet) -> VertexSet {
        VertexSet::from_sorted(
            set.iter()
                .filter(|&v| self.neighbors(v).iter().any(|&w| !set.contains(w)))
                .collect(),
        )
    }

    /// True if `set` induces a connected subgraph (the empty set counts as connected).
    pub fn is_connected_set(&self, set: &VertexSet) -> bool {
        let Some(start) = set.iter().next() else {
            return true;
        };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in self.neighbors(v) {
                if set.contains(w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == set.len()
    }
}

/// Sorted set of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Wraps a vector that is already sorted and duplicate-free.
    pub fn from_sorted(v: Vec<usize>) -> Self {
        debug_assert!(v.windows(2).all(|w| w[0] < w[1]), "unsorted vertex set");
        VertexSet(v)
    }

    pub fn full(n: usize) -> Self {
        VertexSet((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn insert(&mut self, v: usize) -> bool {
        match self.0.binary_search(&v) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, v);
                true
            }
        }
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, usize>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    PaceGr,
}

/// Parses the edge-list or PACE `.gr` format. External ids are 1-based.
///
/// In the edge-list format the vertex set is the set of mentioned ids; they are
/// compressed to `0..n` in ascending order.
pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::EdgeList => parse_edge_list(text),
        GraphFormat::PaceGr => parse_pace(text),
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse {
            line: lineno,
            msg: "expected two vertex ids".into(),
        })?;
        let v: usize = tok.parse().map_err(|_| Error::Parse {
            line: lineno,
            msg: format!("'{tok}' is not a positive integer"),
        })?;
        if v == 0 {
            return Err(Error::Parse {
                line: lineno,
                msg: "vertex ids are 1-based".into(),
            });
        }
        Ok(v)
    };
    let u = next()?;
    let v = next()?;
    if it.next().is_some() {
        return Err(Error::Parse {
            line: lineno,
            msg: "trailing tokens after edge".into(),
        });
    }
    if u == v {
        return Err(Error::SelfLoop {
            line: lineno,
            vertex: u,
        });
    }
    Ok((u, v))
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut pairs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        pairs.push(parse_pair(line, i + 1)?);
    }
    let ids: Vec<usize> = pairs
        .iter()
        .flat_map(|&(u, v)| [u, v])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |x: usize| ids.binary_search(&x).unwrap();
    Graph::from_edges(
        ids.len(),
        pairs.into_iter().map(|(u, v)| (index(u), index(v))),
    )
}

fn parse_pace(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(Error::Parse {
                    line: lineno,
                    msg: "duplicate header".into(),
                });
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::Parse {
                line: lineno,
                msg: "header must be 'p gr <n> <m>'".into(),
            };
            if toks.len() != 4 || toks[0] != "p" || toks[1] != "gr" {
                return Err(bad());
            }
            let n = toks[2].parse().map_err(|_| bad())?;
            let m = toks[3].parse().map_err(|_| bad())?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(Error::Parse {
                line: lineno,
                msg: "edge before 'p gr' header".into(),
            });
        };
        let (u, v) = parse_pair(line, lineno)?;
        if u > n || v > n {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("vertex id exceeds n = {n}"),
            });
        }
        edges.push((u - 1, v - 1));
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        msg: "missing 'p gr' header".into(),
    })?;
    if edges.len() != m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, edges)
}

/// Writes `g` in PACE `.gr` format (1-based ids).
pub fn write_pace(g: &Graph) -> String {
    let mut out = format!("p gr {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}

/// Connected components of `g - excluded`, ordered by minimum vertex id.
pub fn connected_components(g: &Graph, excluded: &VertexSet) -> Vec<VertexSet> {
    let mut seen = vec![false; g.n()];
    for v in excluded.iter() {
        seen[v] = true;
    }
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    for s in g.vertices() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        queue.push_back(s);
        let mut comp = Vec::new();
        while let Some(v) = queue.pop_front() {
            comp.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        out.push(comp.into_iter().collect());
    }
    out
}

/// Smallest-last ordering. Returns the degeneracy and the removal order;
/// ties are broken by lowest vertex id.
pub fn degeneracy_order(g: &Graph) -> (usize, Vec<usize>) {
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut queue: BTreeSet<(usize, usize)> = g.vertices().map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    let mut degeneracy = 0;
    while let Some((d, v)) = queue.pop_first() {
        degeneracy = degeneracy.max(d);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                queue.remove(&(deg[w], w));
                deg[w] -= 1;
                queue.insert((deg[w], w));
            }
        }
    }
    (degeneracy, order)
}

/// An induced subgraph together with the map from its ids back to the host's.
#[derive(Clone, Debug)]
pub struct Induced {
    pub graph: Graph,
    /// `original[i]` is the host id of vertex `i`.
    pub original: Vec<usize>,
}

impl Induced {
    pub fn to_original(&self, v: usize) -> usize {
        self.original[v]
    }

    /// Host id to local id, if the vertex was kept.
    pub fn to_local(&self, v: usize) -> Option<usize> {
        self.original.binary_search(&v).ok()
    }

    pub fn set_to_original(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.original[v]).collect()
    }

    pub fn set_to_local(&self, s: &VertexSet) -> VertexSet {
        s.iter().filter_map(|v| self.to_local(v)).collect()
    }
}

/// `g[s]`, renumbered to `0..|s|` preserving relative order.
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Induced {
    let original = s.as_slice().to_vec();
    let mut adj = vec![Vec::new(); original.len()];
    for (i, &v) in original.iter().enumerate() {
        for &w in g.neighbors(v) {
            if let Ok(j) = original.binary_search(&w) {
                adj[i].push(j);
            }
        }
    }
    Induced {
        graph: Graph::from_raw_adjacency(adj),
        original,
    }
}

/// `g - s`.
pub fn remove_vertices(g: &Graph, s: &VertexSet) -> Induced {
    let keep: VertexSet = g.vertices().filter(|&v| !s.contains(v)).collect();
    induced_subgraph(g, &keep)
}

/// Small named graphs used by generators, tests and examples.
pub mod families {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    /// `K_{1,leaves}` with center 0.
    pub fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|v| (0, v))).unwrap()
    }

    pub fn grid(rows: usize, cols: usize) -> Graph {
        let id = |r: usize, c: usize| r * cols + c;
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    edges.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    edges.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        Graph::from_edges(rows * cols, edges).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        Graph::from_edges(10, edges).unwrap()
    }

    /// Disjoint union, second graph shifted by `a.n()`.
    pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
        let off = a.n();
        Graph::from_edges(
            a.n() + b.n(),
            a.edges().chain(b.edges().map(|(u, v)| (u + off, v + off))),
        )
        .unwrap()
    }
}
