use serde::{Deserialize, Serialize};

use super::OutAdjacency;
use crate::error::{invalid, Result};

/// Query accounting for one tester run.
///
/// `classical` counts oracle reads made directly; `charged` accumulates the
/// modeled cost of idealized Grover searches, each rounded up to an integer
/// before it is added.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub classical: u64,
    pub charged: u64,
}

impl QueryLedger {
    pub fn record_classical(&mut self) {
        self.classical += 1;
    }

    pub fn charge(&mut self, cost: u64) {
        self.charged += cost;
    }

    pub fn total(&self) -> u64 {
        self.classical + self.charged
    }

    /// Adds another ledger's counts into this one.
    pub fn absorb(&mut self, other: &QueryLedger) {
        self.classical += other.classical;
        self.charged += other.charged;
    }
}

/// Mediated access to a graph: every neighbor lookup goes through
/// [`OracleView::out_neighbor_query`] and is recorded in the ledger.
#[derive(Debug)]
pub struct OracleView<'a, G: OutAdjacency + ?Sized> {
    target: &'a G,
    ledger: QueryLedger,
}

impl<'a, G: OutAdjacency + ?Sized> OracleView<'a, G> {
    pub fn new(target: &'a G) -> Self {
        Self {
            target,
            ledger: QueryLedger::default(),
        }
    }

    pub fn n(&self) -> usize {
        self.target.vertex_count()
    }

    pub fn d_out(&self) -> usize {
        self.target.degree_bound()
    }

    /// The `i`-th out-neighbor of `v` (`i` is one-based), or `None` for ⊥.
    pub fn out_neighbor_query(&mut self, v: usize, i: usize) -> Result<Option<usize>> {
        if v >= self.n() {
            return invalid(format!("vertex {v} out of range (n={})", self.n()));
        }
        if i == 0 || i > self.d_out() {
            return invalid(format!("slot {i} outside 1..={}", self.d_out()));
        }
        self.ledger.record_classical();
        Ok(self.target.neighbor(v, i - 1))
    }

    pub fn ledger(&self) -> &QueryLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut QueryLedger {
        &mut self.ledger
    }

    /// Unmetered access to the underlying graph. Only the Grover simulator
    /// uses this, to evaluate predicates whose cost it charges separately.
    pub fn target(&self) -> &'a G {
        self.target
    }

    /// A fresh view on the same target with an empty ledger.
    pub fn scratch(&self) -> OracleView<'a, G> {
        OracleView::new(self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BoundedOutDigraph;

    #[test]
    fn query_reads_slots_and_counts() {
        let g = BoundedOutDigraph::from_edges(8, 2, &[(1, 3), (1, 7)]).unwrap();
        let mut view = OracleView::new(&g);
        assert_eq!(view.out_neighbor_query(0, 1).unwrap(), None);
        assert_eq!(view.out_neighbor_query(1, 2).unwrap(), Some(7));
        assert_eq!(view.out_neighbor_query(1, 1).unwrap(), Some(3));
        assert_eq!(view.ledger().classical, 3);
        assert_eq!(view.ledger().total(), 3);
    }

    #[test]
    fn out_of_range_queries_are_rejected_without_charge() {
        let g = BoundedOutDigraph::new(2, 2);
        let mut view = OracleView::new(&g);
        assert!(view.out_neighbor_query(2, 1).is_err());
        assert!(view.out_neighbor_query(0, 0).is_err());
        assert!(view.out_neighbor_query(0, 3).is_err());
        assert_eq!(view.ledger().total(), 0);
    }
}
