//! Treedepth decompositions, DFS path decompositions and nice tree
//! decompositions.

mod dfs;
mod nice;
mod path;
mod treedepth;

pub use dfs::DfsForest;
pub use nice::{make_nice, NiceNode, NiceTreeDecomposition, NodeKind, TreeDecomposition};
pub use path::{dfs_path_decomposition, PathDecomposition};
pub use treedepth::{
    treedepth_at_most, treedepth_check, treedepth_exact, treedepth_exact_with_limit,
    TreedepthDecomposition, EXACT_LIMIT,
};
