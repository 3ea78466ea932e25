//! Bounded out-degree digraphs, metered oracle access, depth-limited BFS,
//! source components and pattern-copy search.

mod bfs;
mod digraph;
mod embed;
mod oracle;
mod pattern;

pub use bfs::{bfs_limited, ExploredSubgraph};
pub(crate) use digraph::parse_usizes;
pub use digraph::{BoundedOutDigraph, OutAdjacency};
pub use embed::{
    contains_copy, count_source_disjoint_copies, find_any_copy, find_copy_in_balls,
    find_h_copy_through, for_each_embedding, search_embedding, verify_embedding, Embedding,
    HostGraph, SearchConstraints,
};
pub use oracle::{OracleView, QueryLedger};
pub use pattern::{source_components, strongly_connected_components, PatternGraph, SubPattern};
