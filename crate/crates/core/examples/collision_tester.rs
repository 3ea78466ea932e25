//! k-collision testing through the star-graph reduction.

use num_rational::Ratio;
use qptest::graph::{contains_copy, PatternGraph};
use qptest::instances::{
    gen_collision_sequence, reduce_collision_to_star, reduce_dummy_collision, CollisionMode,
    IntegerSequence, SequenceView,
};
use qptest::testers::{test_collision_freeness, verify_collision, GroverModel, Witness};

fn main() -> qptest::Result<()> {
    let model = GroverModel::new(Ratio::from_integer(3), 0.9, 2)?;
    for (label, mode) in [
        ("far", CollisionMode::Far { epsilon: 0.05 }),
        ("free", CollisionMode::Free),
    ] {
        let (seq, _) = gen_collision_sequence(2048, 2048, 2, mode, 4)?;
        let mut view = SequenceView::new(&seq);
        let v = test_collision_freeness(&mut view, 2, 0.05, &model)?;
        print!("{label}: {:?} after {} queries", v.verdict, v.total_queries());
        if let Some(Witness::Collision(pos)) = &v.witness {
            print!(", positions {pos:?} verified {}", verify_collision(&seq, 2, pos));
        }
        println!();
    }

    let small = IntegerSequence::new(4, vec![1, 3, 3, 2, 3])?;
    let star = reduce_collision_to_star(&small, 1)?;
    println!(
        "star graph of {:?}: 3-star {} / 3-collision {}",
        small.values(),
        contains_copy(&star, &PatternGraph::k_star(3)),
        small.has_k_collision(3)
    );

    let dummies = IntegerSequence::with_dummies(3, vec![0, 1, 0, 1, 0, 2])?;
    let red = reduce_dummy_collision(&dummies);
    println!(
        "dummy zeros {:?} -> {:?} (valid for k >= {})",
        dummies.values(),
        red.sequence.values(),
        red.min_k
    );
    Ok(())
}
