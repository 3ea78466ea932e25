use serde::{Deserialize, Serialize};

use super::IntegerSequence;
use crate::error::{invalid, Result};
use crate::graph::{BoundedOutDigraph, OutAdjacency};

/// The bipartite star graph of a sequence, materialized: vertices
/// `0..n` are positions, `n..n+r` are values, and position `i` has one
/// edge to the vertex of value `s_i`.
pub fn reduce_collision_to_star(seq: &IntegerSequence, d_out: usize) -> Result<BoundedOutDigraph> {
    let view = CollisionStarGraph::new(seq, d_out)?;
    let n = view.vertex_count();
    let adj = (0..n).map(|v| view.out_neighbors(v)).collect();
    BoundedOutDigraph::from_adjacency(n, d_out, adj)
}

/// Lazy form of [`reduce_collision_to_star`]: each neighbor lookup reads
/// one sequence entry.
#[derive(Debug, Clone, Copy)]
pub struct CollisionStarGraph<'a> {
    seq: &'a IntegerSequence,
    d_out: usize,
}

impl<'a> CollisionStarGraph<'a> {
    pub fn new(seq: &'a IntegerSequence, d_out: usize) -> Result<Self> {
        if d_out == 0 {
            return invalid("star reduction needs d_out >= 1");
        }
        if seq.allows_dummies() && seq.values().contains(&0) {
            return invalid("star reduction expects a sequence without dummy symbols");
        }
        Ok(Self { seq, d_out })
    }

    pub fn position_vertex(&self, i: usize) -> usize {
        i
    }

    pub fn value_vertex(&self, value: usize) -> usize {
        self.seq.n() + value - 1
    }

    pub fn sequence(&self) -> &'a IntegerSequence {
        self.seq
    }
}

impl OutAdjacency for CollisionStarGraph<'_> {
    fn vertex_count(&self) -> usize {
        self.seq.n() + self.seq.r()
    }

    fn degree_bound(&self) -> usize {
        self.d_out
    }

    fn neighbor(&self, v: usize, slot: usize) -> Option<usize> {
        (v < self.seq.n() && slot == 0).then(|| self.value_vertex(self.seq.values()[v]))
    }
}

/// Output of [`reduce_dummy_collision`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DummyReduction {
    pub sequence: IntegerSequence,
    /// The reduction preserves `k`-collisions only for `k` at least this.
    pub min_k: usize,
}

/// Replaces dummy zeros by fresh values, two positions per fresh value:
/// the `i`-th position (1-based) with a zero gets `r + ceil(i / 2)`.
/// Zeros then form 2-collisions at most, so `k`-collisions with `k >= 3`
/// are unchanged.
pub fn reduce_dummy_collision(seq: &IntegerSequence) -> DummyReduction {
    let r = seq.r();
    let n = seq.n();
    let values = seq
        .values()
        .iter()
        .enumerate()
        .map(|(idx, &v)| if v == 0 { r + (idx + 2) / 2 } else { v })
        .collect();
    let sequence =
        IntegerSequence::new(r + n.div_ceil(2), values).expect("fresh values stay in range");
    DummyReduction { sequence, min_k: 3 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_edges() {
        let s = IntegerSequence::new(3, vec![2, 2, 3]).unwrap();
        let g = reduce_collision_to_star(&s, 1).unwrap();
        assert_eq!(g.n(), 6);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 4), (1, 4), (2, 5)]);
        let lazy = CollisionStarGraph::new(&s, 1).unwrap();
        assert_eq!(lazy.neighbor(4, 0), None);
        assert_eq!(lazy.neighbor(0, 1), None);
    }

    #[test]
    fn dummies_pair_up() {
        let s = IntegerSequence::with_dummies(3, vec![0, 0, 0, 0]).unwrap();
        let out = reduce_dummy_collision(&s);
        assert_eq!(out.sequence.values(), &[4, 4, 5, 5]);
        assert_eq!(out.sequence.r(), 5);
        assert_eq!(out.min_k, 3);
    }

    #[test]
    fn dummies_keep_real_values() {
        let s = IntegerSequence::with_dummies(2, vec![1, 0, 2, 0, 0]).unwrap();
        let out = reduce_dummy_collision(&s);
        assert_eq!(out.sequence.values(), &[1, 3, 2, 4, 5]);
    }
}
