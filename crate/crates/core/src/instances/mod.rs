//! Integer sequences, instance generators with farness certificates, and
//! the sequence-to-graph reductions.

mod generate;
mod reduce;
mod sequence;

pub use generate::{
    gen_collision_sequence, gen_far_h_instance, gen_far_h_instance_with, gen_h_free_instance,
    min_edge_deletions_to_free, planted_copy_count, CollisionMode, FarnessCertificate,
    FillerOptions, WitnessKind, EXACT_DISTANCE_MAX_N,
};
pub use reduce::{
    reduce_collision_to_star, reduce_dummy_collision, CollisionStarGraph, DummyReduction,
};
pub use sequence::{IntegerSequence, SequenceView};
