//! Query-counted testers: the idealized Grover primitive, the stage
//! schedule, the quantum and classical testers for pattern-freeness, and
//! the collision tester built on the star reduction.

mod classical;
mod collision;
mod grover;
mod quantum;
mod schedule;
mod verdict;

pub use classical::{
    classical_sample_size, default_classical_constant, test_h_freeness_classical,
    test_h_freeness_classical_with,
};
pub use collision::{
    star_epsilon, test_collision_freeness, test_collision_freeness_with, verify_collision,
};
pub use grover::{grover_sample, grover_sample_marked, GroverModel};
pub use quantum::{
    test_h_freeness_quantum, test_h_freeness_quantum_with, CostMode, QuantumOptions,
};
pub use schedule::{make_schedule, QuerySchedule};
pub use verdict::{TesterVerdict, Verdict, Witness};
