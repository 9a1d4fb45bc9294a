//! Exact minimum modulator to treedepth 1 or 2 by dynamic programming over a
//! nice tree decomposition.
//!
//! Every bag vertex carries a role. Edges are settled when their first
//! endpoint is forgotten (or at the root), and deletions are paid for at the
//! same moment, so join nodes simply add their children's costs.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::decomposition::{NiceTreeDecomposition, NodeKind};
use crate::graph::{Graph, VertexSet};

const DELETED: u8 = 0;

trait RoleModel {
    fn fresh(&self) -> &'static [u8];
    /// Settles the edge between two kept-or-deleted vertices.
    fn edge(&self, a: u8, b: u8) -> Option<(u8, u8)>;
    fn can_close(&self, r: u8) -> bool;
    fn merge(&self, a: u8, b: u8) -> Option<u8>;
}

/// `td <= 1`: the kept vertices are independent.
struct Edgeless;

const KEEP: u8 = 1;

impl RoleModel for Edgeless {
    fn fresh(&self) -> &'static [u8] {
        &[DELETED, KEEP]
    }
    fn edge(&self, a: u8, b: u8) -> Option<(u8, u8)> {
        (a == DELETED || b == DELETED).then_some((a, b))
    }
    fn can_close(&self, _: u8) -> bool {
        true
    }
    fn merge(&self, a: u8, b: u8) -> Option<u8> {
        (a == b).then_some(a)
    }
}

/// `td <= 2`: every kept component is a star. Kept vertices are centers or
/// leaves; a leaf must end up with exactly one center neighbor.
struct StarForest;

const CENTER: u8 = 1;
const LEAF_OPEN: u8 = 2;
const LEAF_DONE: u8 = 3;

impl RoleModel for StarForest {
    fn fresh(&self) -> &'static [u8] {
        &[DELETED, CENTER, LEAF_OPEN]
    }
    fn edge(&self, a: u8, b: u8) -> Option<(u8, u8)> {
        match (a, b) {
            (DELETED, _) | (_, DELETED) => Some((a, b)),
            (CENTER, LEAF_OPEN) => Some((CENTER, LEAF_DONE)),
            (LEAF_OPEN, CENTER) => Some((LEAF_DONE, CENTER)),
            _ => None,
        }
    }
    fn can_close(&self, r: u8) -> bool {
        r != LEAF_OPEN
    }
    fn merge(&self, a: u8, b: u8) -> Option<u8> {
        match (a, b) {
            (LEAF_OPEN, LEAF_DONE) | (LEAF_DONE, LEAF_OPEN) => Some(LEAF_DONE),
            (LEAF_DONE, LEAF_DONE) => None,
            _ => (a == b).then_some(a),
        }
    }
}

/// Persistent list of deleted vertices.
#[derive(Debug)]
struct Cons {
    v: usize,
    next: Option<Rc<Cons>>,
}

#[derive(Clone, Debug)]
struct Entry {
    cost: usize,
    deleted: Option<Rc<Cons>>,
}

fn push(list: &Option<Rc<Cons>>, v: usize) -> Option<Rc<Cons>> {
    Some(Rc::new(Cons { v, next: list.clone() }))
}

fn collect(list: &Option<Rc<Cons>>, out: &mut Vec<usize>) {
    let mut cur = list.clone();
    while let Some(node) = cur {
        out.push(node.v);
        cur = node.next.clone();
    }
}

/// Concatenation for join nodes: the two lists are disjoint.
fn concat(a: &Option<Rc<Cons>>, b: &Option<Rc<Cons>>) -> Option<Rc<Cons>> {
    let mut items = Vec::new();
    collect(a, &mut items);
    let mut out = b.clone();
    for v in items.into_iter().rev() {
        out = push(&out, v);
    }
    out
}

type Table = BTreeMap<Vec<u8>, Entry>;

fn offer(table: &mut Table, key: Vec<u8>, entry: Entry) {
    match table.get(&key) {
        Some(old) if old.cost <= entry.cost => {}
        _ => {
            table.insert(key, entry);
        }
    }
}

/// Minimum set `S` with `td(g - S) <= d` for `d` in `{1, 2}`, computed over
/// `nice`, a nice decomposition of all of `g`.
pub(crate) fn min_modulator_dp(g: &Graph, nice: &NiceTreeDecomposition, d: usize) -> VertexSet {
    match d {
        1 => run(g, nice, &Edgeless),
        2 => run(g, nice, &StarForest),
        _ => panic!("dynamic program only covers d in {{1, 2}}"),
    }
}

fn run<M: RoleModel>(g: &Graph, nice: &NiceTreeDecomposition, model: &M) -> VertexSet {
    let mut tables: Vec<Option<Table>> = vec![None; nice.nodes.len()];
    for (i, node) in nice.nodes.iter().enumerate() {
        let bag = node.bag.as_slice();
        let mut out = Table::new();
        match node.kind {
            NodeKind::Leaf => {
                for &r in model.fresh() {
                    offer(&mut out, vec![r], Entry { cost: 0, deleted: None });
                }
            }
            NodeKind::Introduce(v) => {
                let child = tables[node.children[0]].take().expect("child table");
                let pos = bag.binary_search(&v).unwrap();
                for (key, e) in &child {
                    for &r in model.fresh() {
                        let mut k = key.clone();
                        k.insert(pos, r);
                        offer(&mut out, k, e.clone());
                    }
                }
            }
            NodeKind::Forget(v) => {
                let child = tables[node.children[0]].take().expect("child table");
                let child_bag = nice.nodes[node.children[0]].bag.as_slice();
                let pos = child_bag.binary_search(&v).unwrap();
                'states: for (key, e) in &child {
                    let mut k = key.clone();
                    let mut rv = k.remove(pos);
                    for (j, &w) in bag.iter().enumerate() {
                        if g.has_edge(v, w) {
                            match model.edge(rv, k[j]) {
                                Some((a, b)) => {
                                    rv = a;
                                    k[j] = b;
                                }
                                None => continue 'states,
                            }
                        }
                    }
                    if !model.can_close(rv) {
                        continue;
                    }
                    let entry = if rv == DELETED {
                        Entry {
                            cost: e.cost + 1,
                            deleted: push(&e.deleted, v),
                        }
                    } else {
                        e.clone()
                    };
                    offer(&mut out, k, entry);
                }
            }
            NodeKind::Join => {
                let left = tables[node.children[0]].take().expect("child table");
                let right = tables[node.children[1]].take().expect("child table");
                for (ka, ea) in &left {
                    'pairs: for (kb, eb) in &right {
                        let mut k = Vec::with_capacity(ka.len());
                        for (&a, &b) in ka.iter().zip(kb) {
                            match model.merge(a, b) {
                                Some(r) => k.push(r),
                                None => continue 'pairs,
                            }
                        }
                        offer(
                            &mut out,
                            k,
                            Entry {
                                cost: ea.cost + eb.cost,
                                deleted: concat(&ea.deleted, &eb.deleted),
                            },
                        );
                    }
                }
            }
        }
        tables[i] = Some(out);
    }

    // Settle edges inside the root bag, then pay for root deletions.
    let root_bag = nice.root_bag().as_slice();
    let table = tables[nice.root].take().expect("root table");
    let mut best: Option<(usize, Vec<usize>)> = None;
    'states: for (key, e) in &table {
        let mut k = key.clone();
        for a in 0..root_bag.len() {
            for b in a + 1..root_bag.len() {
                if g.has_edge(root_bag[a], root_bag[b]) {
                    match model.edge(k[a], k[b]) {
                        Some((x, y)) => {
                            k[a] = x;
                            k[b] = y;
                        }
                        None => continue 'states,
                    }
                }
            }
        }
        if !k.iter().all(|&r| model.can_close(r)) {
            continue;
        }
        let mut deleted = Vec::new();
        collect(&e.deleted, &mut deleted);
        deleted.extend(root_bag.iter().zip(&k).filter(|(_, &r)| r == DELETED).map(|(&v, _)| v));
        deleted.sort_unstable();
        let better = match &best {
            None => true,
            Some((c, set)) => deleted.len() < *c || (deleted.len() == *c && deleted < *set),
        };
        if better {
            best = Some((deleted.len(), deleted));
        }
    }
    let (_, set) = best.expect("deleting every vertex is always feasible");
    VertexSet::from_sorted(set)
}
