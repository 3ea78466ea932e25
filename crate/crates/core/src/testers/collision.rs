use super::{test_h_freeness_quantum_with, GroverModel, QuantumOptions, TesterVerdict, Witness};
use crate::error::{invalid, Result};
use crate::graph::{OracleView, PatternGraph};
use crate::instances::{CollisionStarGraph, IntegerSequence, SequenceView};

/// Farness parameter handed to the star tester: `eps n / (d (n + r))`.
pub fn star_epsilon(eps: f64, n: usize, r: usize, d: usize) -> f64 {
    eps * n as f64 / (d as f64 * (n + r) as f64)
}

/// Whether `positions` are `k` distinct indices holding one value.
pub fn verify_collision(seq: &IntegerSequence, k: usize, positions: &[usize]) -> bool {
    let mut sorted = positions.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len() == k
        && sorted.iter().all(|&i| i < seq.n())
        && sorted
            .iter()
            .all(|&i| seq.values()[i] != 0 && seq.values()[i] == seq.values()[sorted[0]])
}

pub fn test_collision_freeness(
    view: &mut SequenceView<'_>,
    k: usize,
    eps: f64,
    model: &GroverModel,
) -> Result<TesterVerdict> {
    test_collision_freeness_with(view, k, eps, model, &QuantumOptions::default())
}

/// Runs the quantum `k`-star tester on the star graph of the sequence.
/// Each graph query reads one sequence entry and is billed to `view`.
pub fn test_collision_freeness_with(
    view: &mut SequenceView<'_>,
    k: usize,
    eps: f64,
    model: &GroverModel,
    opts: &QuantumOptions,
) -> Result<TesterVerdict> {
    if k < 2 {
        return invalid("collision order k must be at least 2");
    }
    let seq = view.sequence();
    let star = CollisionStarGraph::new(seq, 1)?;
    let mut graph_view = OracleView::new(&star);
    let eps_star = star_epsilon(eps, seq.n(), seq.r(), 1);
    let pattern = PatternGraph::k_star(k);
    let inner = test_h_freeness_quantum_with(&mut graph_view, &pattern, eps_star, model, opts)?;
    view.ledger_mut().absorb(graph_view.ledger());

    let witness = match inner.witness {
        Some(Witness::Embedding(map)) => {
            let mut positions: Vec<usize> = map[1..].to_vec();
            positions.sort_unstable();
            verify_collision(seq, k, &positions).then_some(Witness::Collision(positions))
        }
        _ => None,
    };
    Ok(TesterVerdict::new(witness, view.ledger(), model.seed()))
}
