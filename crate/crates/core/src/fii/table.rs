use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::boundaried::BoundariedGraph;
use super::canonical::{enumerate_levels, PieceClass};
use super::lp::{lp_signature, Triple};
use super::vc::vc_signature;

pub const TABLE_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    VertexCover,
    LongestPath,
}

impl std::fmt::Display for Problem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Problem::VertexCover => "vertex-cover",
            Problem::LongestPath => "longest-path",
        })
    }
}

/// The part of a signature that decides equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignatureKey {
    Vc(Vec<u8>),
    Lp(Vec<Vec<Triple>>),
}

/// Signature key and offset of `h`. The offset is the additive constant
/// separating `h` from any graph with the same key: `OPT(h ⊕ x) - offset(h)`
/// depends on the key alone. Longest Path needs no shift.
pub fn signature(problem: Problem, h: &BoundariedGraph, d: usize) -> Result<(SignatureKey, i64)> {
    match problem {
        Problem::VertexCover => {
            let s = vc_signature(h)?;
            Ok((SignatureKey::Vc(s.table), s.offset as i64))
        }
        Problem::LongestPath => {
            let s = lp_signature(h, d)?;
            Ok((SignatureKey::Lp(s.configs.into_iter().collect()), 0))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub boundary_size: usize,
    pub key: SignatureKey,
    pub representative: BoundariedGraph,
    /// Offset of the representative.
    pub delta_base: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentativeTable {
    pub schema: u32,
    pub problem: Problem,
    pub t: usize,
    pub d: usize,
    pub max_n: usize,
    /// True when, for every boundary size, the graphs with `max_n` vertices
    /// produced no class that smaller graphs did not already have.
    pub stabilized: bool,
    /// `class_counts[b][k]`: classes seen with `b` boundary vertices and at
    /// most `b + k` vertices in total.
    pub class_counts: Vec<Vec<usize>>,
    entries: Vec<TableEntry>,
    #[serde(skip)]
    index: BTreeMap<(usize, SignatureKey), usize>,
}

impl RepresentativeTable {
    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, boundary_size: usize, key: &SignatureKey) -> Option<&TableEntry> {
        self.index.get(&(boundary_size, key.clone())).map(|&i| &self.entries[i])
    }

    /// Largest representative, in vertices.
    pub fn max_representative(&self) -> usize {
        self.entries.iter().map(|e| e.representative.graph.n()).max().unwrap_or(0)
    }

    fn reindex(&mut self) {
        self.index = self
            .entries
            .iter()
            .enumerate()
            .map(|(i, e)| ((e.boundary_size, e.key.clone()), i))
            .collect();
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut table: RepresentativeTable = serde_json::from_str(text)?;
        if table.schema != TABLE_SCHEMA {
            return Err(Error::Argument(format!(
                "table schema {} is not supported (expected {TABLE_SCHEMA})",
                table.schema
            )));
        }
        table.reindex();
        Ok(table)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Enumerates all pieces with up to `t` boundary vertices and at most `max_n`
/// vertices in total and keeps, per signature, the first member in order of
/// size and then canonical code.
pub fn build_representative_table(problem: Problem, t: usize, d: usize, max_n: usize) -> Result<RepresentativeTable> {
    if d == 0 || d > 4 {
        return Err(Error::Argument(format!("table treedepth {d} outside 1..=4")));
    }
    if t > 6 || max_n > 12 {
        return Err(Error::Argument(format!(
            "table bounds t = {t}, max_n = {max_n} exceed the enumeration limits (t <= 6, max_n <= 12)"
        )));
    }
    let mut entries: Vec<TableEntry> = Vec::new();
    let mut index = BTreeMap::new();
    let mut class_counts = Vec::new();
    let mut stabilized = true;
    for b in 0..=t.min(max_n) {
        let levels = enumerate_levels(b, d, max_n - b, PieceClass::Pieces);
        let mut counts = Vec::new();
        for level in levels {
            let keyed: Vec<(BoundariedGraph, SignatureKey, i64)> = level
                .par_iter()
                .map(|code| {
                    let h = code.to_boundaried();
                    signature(problem, &h, d).map(|(k, off)| (h, k, off))
                })
                .collect::<Result<_>>()?;
            let before = index.len();
            for (h, key, off) in keyed {
                index.entry((b, key.clone())).or_insert_with(|| {
                    entries.push(TableEntry {
                        boundary_size: b,
                        key,
                        representative: h,
                        delta_base: off,
                    });
                    entries.len() - 1
                });
            }
            counts.push(index.len() - before + counts.last().copied().unwrap_or(0));
        }
        if counts.len() >= 2 && counts[counts.len() - 1] != counts[counts.len() - 2] {
            stabilized = false;
        }
        class_counts.push(counts);
    }
    Ok(RepresentativeTable {
        schema: TABLE_SCHEMA,
        problem,
        t,
        d,
        max_n,
        stabilized,
        class_counts,
        entries,
        index,
    })
}
