use std::collections::{HashMap, VecDeque};

use super::{OracleView, OutAdjacency};
use crate::error::Result;

/// What a depth-limited BFS learned: the reached vertices (in discovery
/// order) and every out-edge it read.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExploredSubgraph {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl ExploredSubgraph {
    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn merge(&mut self, other: &ExploredSubgraph) {
        for &v in &other.vertices {
            if !self.vertices.contains(&v) {
                self.vertices.push(v);
            }
        }
        for &e in &other.edges {
            if !self.edges.contains(&e) {
                self.edges.push(e);
            }
        }
    }
}

/// Explores everything reachable from `start` within `depth` out-edges.
///
/// Each expanded vertex has its slots read in order until the first ⊥ (or
/// until `d_out` slots), so a vertex costs at most `d_out` queries and no
/// `(vertex, slot)` pair is read twice.
pub fn bfs_limited<G: OutAdjacency + ?Sized>(
    view: &mut OracleView<'_, G>,
    start: usize,
    depth: usize,
) -> Result<ExploredSubgraph> {
    let d = view.d_out();
    let mut dist: HashMap<usize, usize> = HashMap::new();
    let mut out = ExploredSubgraph::default();
    let mut queue = VecDeque::new();
    if start >= view.n() {
        // Same error the oracle would raise.
        view.out_neighbor_query(start, 1)?;
    }
    dist.insert(start, 0);
    out.vertices.push(start);
    queue.push_back(start);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == depth {
            continue;
        }
        for slot in 1..=d {
            let Some(w) = view.out_neighbor_query(u, slot)? else {
                break;
            };
            out.edges.push((u, w));
            if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                e.insert(du + 1);
                out.vertices.push(w);
                queue.push_back(w);
            }
        }
    }
    Ok(out)
}
