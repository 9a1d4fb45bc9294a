//! Boundaried graphs, problem signatures, representative tables and
//! protrusion replacement.

mod boundaried;
mod canonical;
mod lp;
mod replace;
mod table;
mod vc;

pub use boundaried::{glue, glue_boundaried, glue_with_map, unglue, BoundariedGraph, Unglued};
pub use canonical::{canonical_code, enumerate_levels, Code, PieceClass};
pub use lp::{length_cap, lp_signature, LpSignature, Triple};
pub use replace::{
    kernelize, replace_protrusion, ClusterReport, ClusterStatus, KernelReport, KernelResult, Replacement,
};
pub use table::{build_representative_table, signature, Problem, RepresentativeTable, SignatureKey, TableEntry, TABLE_SCHEMA};
pub use vc::{vc_costs, vc_signature, VcSignature, INFEASIBLE};
