//! Three-sparse GF(2) systems: hard matrices, yes/no right-hand sides and
//! the exhaustive checks run against them.

mod game;
mod kwise;
mod matrix;
mod system;

pub use game::{distinguishing_advantage, GameResult, GAME_MAX_N};
pub use kwise::{
    kwise_check_exact, kwise_check_sampled, subsets_up_to, yes_outcomes, KwiseReport,
    KWISE_SIGNIFICANCE,
};
pub use matrix::{
    dependent_set_within, gf2_rank, search_hard_matrix, search_hard_matrix_with, GF2Matrix,
    HardMatrix, HardMatrixOptions, Regularity, EXHAUSTIVE_SUBSET_MAX,
};
pub use system::{
    min_unsat_fraction, sample_no, sample_yes, Lin2System, MIN_UNSAT_MAX_N,
};

use crate::error::{Error, Result};
use crate::graph::BoundedOutDigraph;

/// Reduction from a system to a graph whose 3-colorability tracks its
/// satisfiability. The gadget graphs are not part of this crate.
pub fn reduce_to_three_coloring(_sys: &Lin2System) -> Result<BoundedOutDigraph> {
    Err(Error::NotImplemented(
        "three-coloring gadget construction is not included",
    ))
}
