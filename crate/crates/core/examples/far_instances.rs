//! Generate far and free instances and check their certificates.

use qptest::graph::{contains_copy, count_source_disjoint_copies, PatternGraph};
use qptest::instances::{
    gen_collision_sequence, gen_far_h_instance, gen_h_free_instance, min_edge_deletions_to_free,
    CollisionMode, FillerOptions,
};

fn main() -> qptest::Result<()> {
    let star = PatternGraph::k_star(3);

    let (far, cert) = gen_far_h_instance(2000, 2, &star, 0.05, 7)?;
    println!(
        "far: {} edges, certificate {}",
        far.edge_count(),
        serde_json::to_string(&cert)?
    );
    println!("greedy disjoint copies: {}", count_source_disjoint_copies(&far, &star));

    let free = gen_h_free_instance(2000, 2, &star, 7, FillerOptions::default())?;
    println!("free: {} edges, contains copy {}", free.edge_count(), contains_copy(&free, &star));

    // Tiny case where the exact deletion distance is computable.
    let (tiny, tcert) = gen_far_h_instance(12, 2, &star, 0.1, 3)?;
    println!(
        "tiny: certified {} deletions, exact {}",
        tcert.min_modifications,
        min_edge_deletions_to_free(&tiny, &star)
    );

    let (seq, scert) = gen_collision_sequence(40, 40, 3, CollisionMode::Far { epsilon: 0.1 }, 1)?;
    println!("sequence head: {:?}", &seq.values()[..12]);
    println!(
        "3-collision values {:?}, distance {}, certificate {:?}",
        seq.k_collision_values(3),
        seq.distance_to_k_collision_free(3)?,
        scert.map(|c| c.min_modifications)
    );
    Ok(())
}
