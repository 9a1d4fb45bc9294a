use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Tree decomposition given as bags plus a parent pointer per bag (exactly
/// one bag has no parent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeDecomposition {
    pub bags: Vec<VertexSet>,
    pub parent: Vec<Option<usize>>,
}

impl TreeDecomposition {
    pub fn scope(&self) -> VertexSet {
        self.bags.iter().flat_map(|b| b.iter()).collect()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(VertexSet::len).max().unwrap_or(1).saturating_sub(1)
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.bags.len()];
        for (i, p) in self.parent.iter().enumerate() {
            if let Some(p) = *p {
                ch[p].push(i);
            }
        }
        ch
    }

    fn check_tree(&self) -> Result<usize> {
        if self.bags.len() != self.parent.len() {
            return Err(Error::InvalidDecomposition("bags and parents differ in length".into()));
        }
        let roots: Vec<usize> = (0..self.bags.len()).filter(|&i| self.parent[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidDecomposition(format!(
                "tree must have exactly one root, found {}",
                roots.len()
            )));
        }
        let ch = self.children();
        let mut seen = 0;
        let mut stack = vec![roots[0]];
        while let Some(x) = stack.pop() {
            seen += 1;
            stack.extend(ch[x].iter().copied());
        }
        if seen != self.bags.len() {
            return Err(Error::InvalidDecomposition("parent relation is not a tree".into()));
        }
        Ok(roots[0])
    }

    /// The three tree-decomposition axioms for `g[scope()]`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.check_tree()?;
        check_axioms(g, &self.bags, |i| self.parent[i])
    }
}

fn check_axioms(g: &Graph, bags: &[VertexSet], parent: impl Fn(usize) -> Option<usize>) -> Result<()> {
    let scope: VertexSet = bags.iter().flat_map(|b| b.iter()).collect();
    for v in scope.iter() {
        for &w in g.neighbors(v) {
            if w > v && scope.contains(w) && !bags.iter().any(|b| b.contains(v) && b.contains(w)) {
                return Err(Error::InvalidDecomposition(format!("edge {v}-{w} is not covered")));
            }
        }
    }
    // Occurrence connectivity: among the nodes containing v, exactly one has a
    // parent that does not contain v.
    let mut tops: HashMap<usize, usize> = HashMap::new();
    for (i, bag) in bags.iter().enumerate() {
        for v in bag.iter() {
            let top = match parent(i) {
                None => true,
                Some(p) => !bags[p].contains(v),
            };
            if top {
                *tops.entry(v).or_insert(0) += 1;
            }
        }
    }
    for v in scope.iter() {
        if tops.get(&v).copied().unwrap_or(0) != 1 {
            return Err(Error::InvalidDecomposition(format!(
                "nodes containing vertex {v} are not connected"
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "snake_case")]
pub enum NodeKind {
    Leaf,
    Join,
    Introduce(usize),
    Forget(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceNode {
    pub bag: VertexSet,
    pub kind: NodeKind,
    pub children: Vec<usize>,
}

/// Nice tree decomposition. Children always have smaller indices than their
/// parent, so iterating nodes in index order is a bottom-up traversal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn root_bag(&self) -> &VertexSet {
        &self.nodes[self.root].bag
    }

    /// Tree-decomposition axioms plus the four node-kind constraints.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut parent = vec![None; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= i {
                    return Err(Error::InvalidDecomposition(format!(
                        "child {c} not before parent {i}"
                    )));
                }
                if parent[c].is_some() {
                    return Err(Error::InvalidDecomposition(format!("node {c} has two parents")));
                }
                parent[c] = Some(i);
            }
        }
        let roots: Vec<usize> = (0..self.nodes.len()).filter(|&i| parent[i].is_none()).collect();
        if roots != [self.root] {
            return Err(Error::InvalidDecomposition(format!(
                "expected single root {}, found {roots:?}",
                self.root
            )));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let kids: Vec<&VertexSet> = node.children.iter().map(|&c| &self.nodes[c].bag).collect();
            let ok = match node.kind {
                NodeKind::Leaf => kids.is_empty() && node.bag.len() == 1,
                NodeKind::Join => kids.len() == 2 && *kids[0] == node.bag && *kids[1] == node.bag,
                NodeKind::Introduce(v) => {
                    kids.len() == 1
                        && !kids[0].contains(v)
                        && node.bag.contains(v)
                        && node.bag.difference(kids[0]).len() == 1
                        && kids[0].is_subset(&node.bag)
                }
                NodeKind::Forget(v) => {
                    kids.len() == 1
                        && kids[0].contains(v)
                        && !node.bag.contains(v)
                        && kids[0].difference(&node.bag).len() == 1
                        && node.bag.is_subset(kids[0])
                }
            };
            if !ok {
                return Err(Error::InvalidDecomposition(format!(
                    "node {i} violates the {:?} constraint",
                    node.kind
                )));
            }
        }
        let bags: Vec<VertexSet> = self.nodes.iter().map(|n| n.bag.clone()).collect();
        check_axioms(g, &bags, |i| parent[i])
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, bag: VertexSet, kind: NodeKind, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { bag, kind, children });
        self.nodes.len() - 1
    }

    fn leaf_chain(&mut self, target: &VertexSet) -> usize {
        let mut it = target.iter();
        let first = it.next().expect("leaf chain needs a nonempty bag");
        let mut bag = VertexSet::from_sorted(vec![first]);
        let mut cur = self.push(bag.clone(), NodeKind::Leaf, vec![]);
        for v in it {
            bag.insert(v);
            cur = self.push(bag.clone(), NodeKind::Introduce(v), vec![cur]);
        }
        cur
    }

    /// Forget what `target` lacks, then introduce what it adds.
    fn transition(&mut self, from: usize, target: &VertexSet) -> usize {
        let mut cur = from;
        let mut bag = self.nodes[from].bag.clone();
        for v in bag.clone().difference(target).iter() {
            bag = bag.difference(&VertexSet::from_sorted(vec![v]));
            cur = self.push(bag.clone(), NodeKind::Forget(v), vec![cur]);
        }
        for v in target.difference(&bag).iter() {
            bag.insert(v);
            cur = self.push(bag.clone(), NodeKind::Introduce(v), vec![cur]);
        }
        cur
    }
}

/// Normalizes a tree decomposition into a nice one whose root bag is
/// `root_bag`. The tree keeps its root if that bag contains `root_bag`,
/// otherwise it is rerooted at the smallest bag that does, and a forget chain is added above it. If no bag contains `root_bag`, its
/// vertices are added to every bag first (the result then decomposes the graph
/// with `root_bag` made a clique, and the width grows by at most `|root_bag|`).
pub fn make_nice(g: &Graph, td: &TreeDecomposition, root_bag: &VertexSet) -> Result<NiceTreeDecomposition> {
    td.validate(g)?;
    let scope = td.scope();
    if scope.is_empty() {
        return Err(Error::InvalidDecomposition("decomposition covers no vertices".into()));
    }
    if !root_bag.is_subset(&scope) {
        return Err(Error::InvalidDecomposition("root bag has vertices outside the decomposition".into()));
    }
    let mut bags = td.bags.clone();
    let natural = td.check_tree()?;
    let holder = if root_bag.is_subset(&bags[natural]) {
        Some(natural)
    } else {
        (0..bags.len())
            .filter(|&i| root_bag.is_subset(&bags[i]))
            .min_by_key(|&i| (bags[i].len(), i))
    };
    let start = match holder {
        Some(i) => i,
        None => {
            for b in &mut bags {
                *b = b.union(root_bag);
            }
            natural
        }
    };

    // Reroot at `start`.
    let k = bags.len();
    let mut adj = vec![Vec::new(); k];
    for (i, p) in td.parent.iter().enumerate() {
        if let Some(p) = *p {
            adj[i].push(p);
            adj[p].push(i);
        }
    }
    let mut order = Vec::with_capacity(k);
    let mut children = vec![Vec::new(); k];
    let mut seen = vec![false; k];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(x) = queue.pop_front() {
        order.push(x);
        let mut nb = adj[x].clone();
        nb.sort_unstable();
        for y in nb {
            if !seen[y] {
                seen[y] = true;
                children[x].push(y);
                queue.push_back(y);
            }
        }
    }

    let mut b = Builder { nodes: Vec::new() };
    let mut built: Vec<Option<usize>> = vec![None; k];
    for &x in order.iter().rev() {
        let target = &bags[x];
        let mut parts: Vec<usize> = children[x]
            .iter()
            .filter_map(|&c| built[c])
            .map(|c| b.transition(c, target))
            .collect();
        built[x] = match parts.len() {
            0 if target.is_empty() => None,
            0 => Some(b.leaf_chain(target)),
            1 => parts.pop(),
            _ => {
                let mut acc = parts[0];
                for &p in &parts[1..] {
                    acc = b.push(target.clone(), NodeKind::Join, vec![acc, p]);
                }
                Some(acc)
            }
        };
    }
    let top = built[start].expect("nonempty scope yields a node");
    let root = b.transition(top, root_bag);
    Ok(NiceTreeDecomposition { nodes: b.nodes, root })
}
