use std::collections::HashSet;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::quantum::check_tester_input;
use super::{TesterVerdict, Witness};
use crate::error::Result;
use crate::graph::{
    bfs_limited, search_embedding, verify_embedding, HostGraph, OracleView, OutAdjacency,
    PatternGraph, SearchConstraints,
};

/// Sample size `ceil(c * n^(1 - 1/k))`, capped at `n`.
pub fn classical_sample_size(n: usize, k: usize, c: f64) -> usize {
    let s = (c * (n as f64).powf(1.0 - 1.0 / k as f64)).ceil() as usize;
    s.clamp(1, n.max(1))
}

/// Default constant in front of `n^(1 - 1/k)`: enough that a copy with
/// every source component sampled shows up with constant probability.
pub fn default_classical_constant(k: usize, eps: f64) -> f64 {
    2.0 * (1.0 / eps).powf(1.0 / k as f64)
}

/// Classical baseline with the default sample constant.
pub fn test_h_freeness_classical<G: OutAdjacency + ?Sized>(
    view: &mut OracleView<'_, G>,
    pattern: &PatternGraph,
    eps: f64,
    seed: u64,
) -> Result<TesterVerdict> {
    let c = default_classical_constant(pattern.k(), eps);
    test_h_freeness_classical_with(view, pattern, eps, seed, c)
}

/// Samples `ceil(c * n^(1 - 1/k))` vertices, explores a depth-`h` ball
/// around each, and rejects iff the explored part holds a copy whose
/// every source component contains a sampled vertex.
pub fn test_h_freeness_classical_with<G: OutAdjacency + ?Sized>(
    view: &mut OracleView<'_, G>,
    pattern: &PatternGraph,
    eps: f64,
    seed: u64,
    c: f64,
) -> Result<TesterVerdict> {
    check_tester_input(pattern, eps)?;
    let n = view.n();
    let s = classical_sample_size(n, pattern.k(), c);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample = index::sample(&mut rng, n, s).into_vec();
    sample.sort_unstable();

    let mut balls = Vec::with_capacity(s);
    for &v in &sample {
        balls.push(bfs_limited(view, v, pattern.h())?);
    }
    let host = HostGraph::from_explored(&balls);
    let hit: HashSet<usize> = sample.iter().copied().collect();
    // Component 0 must contain a sampled vertex, so anchoring it at each
    // sample in turn covers every candidate copy.
    let witness = sample
        .iter()
        .find_map(|&v| {
            let cons = SearchConstraints {
                anchors: vec![(v, 0)],
                avoid_in_sources: None,
                sources_must_hit: Some(&hit),
            };
            search_embedding(&host, pattern, &cons)
        })
        .filter(|emb| verify_embedding(view.target(), pattern, emb))
        .map(|emb| Witness::Embedding(emb.map));
    Ok(TesterVerdict::new(witness, view.ledger(), seed))
}
