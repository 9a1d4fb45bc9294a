//! Kernelization for graph problems parameterized by a modulator to bounded
//! treedepth.
//!
//! The pipeline approximates a treedepth-`d` modulator, splits the rest of the
//! graph into a protrusion decomposition with the bag-marking sweep, and
//! shrinks every cluster by protrusion replacement against a table of
//! representatives (Vertex Cover and Longest Path). Longest Path additionally
//! has a direct polynomial kernel in [`lp_kernel`]. Brute-force [`oracles`]
//! check every reduction on small inputs.

pub mod cli;
pub mod decomposition;
pub mod error;
pub mod fii;
pub mod generate;
pub mod graph;
pub mod lp_kernel;
pub mod modulator;
pub mod oracles;
pub mod protrusion;
pub mod shallow_minor;

pub use error::{Error, Result};
pub use graph::{Graph, VertexSet};
