use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::IntegerSequence;
use crate::error::{invalid, Error, Result};
use crate::graph::{
    search_embedding, BoundedOutDigraph, Embedding, HostGraph, PatternGraph, SearchConstraints,
};

/// Largest host size for which certificates include the exact deletion
/// distance.
pub const EXACT_DISTANCE_MAX_N: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    DisjointCopies,
    BruteForceDistance,
}

/// Why a generated instance is far from the property.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarnessCertificate {
    pub kind: WitnessKind,
    pub requested_epsilon: f64,
    /// `min_modifications / (n * d)` for graphs, `/ n` for sequences.
    pub effective_epsilon: f64,
    /// Number of planted disjoint copies or collision groups.
    pub planted: usize,
    /// Lower bound on the modifications needed (exact for brute force).
    pub min_modifications: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FillerOptions {
    /// Random out-edges tried per filler vertex.
    pub attempts_per_vertex: usize,
}

impl Default for FillerOptions {
    fn default() -> Self {
        Self {
            attempts_per_vertex: 1,
        }
    }
}

/// Number of vertex-disjoint copies planted by [`gen_far_h_instance`].
pub fn planted_copy_count(n: usize, d_out: usize, h: usize, epsilon: f64) -> usize {
    let by_vertices = (2.0 * epsilon * n as f64 / h as f64).ceil() as usize;
    let by_edges = (epsilon * n as f64 * d_out as f64).ceil() as usize;
    by_vertices.max(by_edges).max(1)
}

fn check_pattern_fits(d_out: usize, pattern: &PatternGraph) -> Result<()> {
    if pattern.edges().is_empty() {
        return Err(Error::Infeasible(
            "a pattern without edges cannot be removed by deleting edges".into(),
        ));
    }
    if pattern.max_out_degree() > d_out {
        return invalid(format!(
            "pattern out-degree {} exceeds d_out {d_out}",
            pattern.max_out_degree()
        ));
    }
    Ok(())
}

/// Graph that is `epsilon`-far from `pattern`-freeness: `m` vertex-disjoint
/// planted copies (each needs its own deletion) plus pattern-free random
/// filler on the remaining vertices.
pub fn gen_far_h_instance(
    n: usize,
    d_out: usize,
    pattern: &PatternGraph,
    epsilon: f64,
    seed: u64,
) -> Result<(BoundedOutDigraph, FarnessCertificate)> {
    gen_far_h_instance_with(n, d_out, pattern, epsilon, seed, FillerOptions::default())
}

pub fn gen_far_h_instance_with(
    n: usize,
    d_out: usize,
    pattern: &PatternGraph,
    epsilon: f64,
    seed: u64,
    filler: FillerOptions,
) -> Result<(BoundedOutDigraph, FarnessCertificate)> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return invalid("epsilon must lie in (0, 1)");
    }
    check_pattern_fits(d_out, pattern)?;
    let h = pattern.h();
    let m = planted_copy_count(n, d_out, h, epsilon);
    if m * h > n {
        return Err(Error::Infeasible(format!(
            "{m} disjoint copies of a {h}-vertex pattern need {} vertices, have {n}",
            m * h
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);

    let mut b = Builder::new(n, d_out);
    for block in order[..m * h].chunks(h) {
        let mut edges: Vec<(usize, usize)> = pattern
            .edges()
            .iter()
            .map(|&(a, c)| (block[a], block[c]))
            .collect();
        edges.shuffle(&mut rng);
        for (u, w) in edges {
            b.add(u, w);
        }
    }
    if pattern.is_weakly_connected() {
        b.fill(&order[m * h..], pattern, filler, &mut rng);
    }
    let g = b.finish()?;

    let (kind, min_mod) = if n <= EXACT_DISTANCE_MAX_N {
        let exact = min_edge_deletions_to_free(&g, pattern);
        (WitnessKind::BruteForceDistance, exact)
    } else {
        (WitnessKind::DisjointCopies, m)
    };
    let cert = FarnessCertificate {
        kind,
        requested_epsilon: epsilon,
        effective_epsilon: min_mod as f64 / (n * d_out) as f64,
        planted: m,
        min_modifications: min_mod,
    };
    Ok((g, cert))
}

/// Random pattern-free graph: the filler process run on every vertex.
pub fn gen_h_free_instance(
    n: usize,
    d_out: usize,
    pattern: &PatternGraph,
    seed: u64,
    filler: FillerOptions,
) -> Result<BoundedOutDigraph> {
    check_pattern_fits(d_out, pattern)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut b = Builder::new(n, d_out);
    if pattern.is_weakly_connected() {
        b.fill(&order, pattern, filler, &mut rng);
    }
    b.finish()
}

/// Adjacency with in-lists kept current, so local balls stay cheap.
struct Builder {
    g: BoundedOutDigraph,
    rev: Vec<Vec<usize>>,
}

impl Builder {
    fn new(n: usize, d_out: usize) -> Self {
        Self {
            g: BoundedOutDigraph::new(n, d_out),
            rev: vec![Vec::new(); n],
        }
    }

    fn add(&mut self, u: usize, w: usize) {
        self.g.add_edge(u, w).expect("planted edges are valid");
        self.rev[w].push(u);
    }

    /// Random edges among `pool`; an edge is kept only if it closes no copy.
    /// Every new copy would use the new edge, so it lies in the undirected
    /// radius-`(h-1)` ball around its tail.
    fn fill(
        &mut self,
        pool: &[usize],
        pattern: &PatternGraph,
        opts: FillerOptions,
        rng: &mut ChaCha8Rng,
    ) {
        if pool.len() < 2 {
            return;
        }
        let radius = pattern.h() - 1;
        for &u in pool {
            for _ in 0..opts.attempts_per_vertex {
                let w = pool[rng.random_range(0..pool.len())];
                if !self.g.can_add_edge(u, w) {
                    continue;
                }
                self.g.add_edge(u, w).expect("checked");
                self.rev[w].push(u);
                let ball = HostGraph::undirected_ball(&self.g, &self.rev, u, radius);
                if search_embedding(&ball, pattern, &SearchConstraints::default()).is_some() {
                    self.g.remove_edge(u, w);
                    self.rev[w].pop();
                }
            }
        }
    }

    fn finish(self) -> Result<BoundedOutDigraph> {
        Ok(self.g)
    }
}

/// Exact minimum number of edge deletions that removes every copy of
/// `pattern`. Branch and bound; meant for tiny graphs.
pub fn min_edge_deletions_to_free(g: &BoundedOutDigraph, pattern: &PatternGraph) -> usize {
    fn copy_in(g: &BoundedOutDigraph, pattern: &PatternGraph) -> Option<Embedding> {
        search_embedding(&HostGraph::whole(g), pattern, &SearchConstraints::default())
    }

    // Greedy edge-disjoint copies: each needs a distinct deletion.
    fn lower_bound(g: &BoundedOutDigraph, pattern: &PatternGraph) -> usize {
        let mut work = g.clone();
        let mut count = 0;
        while let Some(emb) = copy_in(&work, pattern) {
            count += 1;
            for &(a, b) in pattern.edges() {
                work.remove_edge(emb.map[a], emb.map[b]);
            }
        }
        count
    }

    fn go(g: &mut BoundedOutDigraph, pattern: &PatternGraph, used: usize, best: &mut usize) {
        if used >= *best {
            return;
        }
        let Some(emb) = copy_in(g, pattern) else {
            *best = used;
            return;
        };
        if used + lower_bound(g, pattern) >= *best {
            return;
        }
        for &(a, b) in pattern.edges() {
            let (u, w) = (emb.map[a], emb.map[b]);
            g.remove_edge(u, w);
            go(g, pattern, used + 1, best);
            g.add_edge(u, w).expect("restoring a removed edge");
        }
    }

    let mut work = g.clone();
    let mut best = pattern_edge_upper_bound(g, pattern);
    go(&mut work, pattern, 0, &mut best);
    best
}

/// Deleting every edge that appears in some copy always works.
fn pattern_edge_upper_bound(g: &BoundedOutDigraph, pattern: &PatternGraph) -> usize {
    let mut work = g.clone();
    let mut removed = 0;
    while let Some(emb) = search_embedding(
        &HostGraph::whole(&work),
        pattern,
        &SearchConstraints::default(),
    ) {
        let (a, b) = pattern.edges()[0];
        work.remove_edge(emb.map[a], emb.map[b]);
        removed += 1;
    }
    removed + 1
}

/// How the collision generator shapes its output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CollisionMode {
    /// No value occurs `k` times.
    Free,
    /// At least `ceil(epsilon * n)` entries must change to remove all
    /// `k`-collisions.
    Far { epsilon: f64 },
}

/// Random sequence over `[1..r]` that is `k`-collision-free or far from it.
///
/// Far instances plant `ceil(epsilon * n)` disjoint groups of `k` equal
/// values, each on its own value; the rest uses every other value at most
/// `k - 1` times.
pub fn gen_collision_sequence(
    n: usize,
    r: usize,
    k: usize,
    mode: CollisionMode,
    seed: u64,
) -> Result<(IntegerSequence, Option<FarnessCertificate>)> {
    if k < 2 {
        return invalid("k must be at least 2");
    }
    if r == 0 {
        return invalid("range must be non-empty");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<usize> = (1..=r).collect();
    values.shuffle(&mut rng);

    let groups = match mode {
        CollisionMode::Free => 0,
        CollisionMode::Far { epsilon } => {
            if !(epsilon > 0.0 && epsilon < 1.0) {
                return invalid("epsilon must lie in (0, 1)");
            }
            (epsilon * n as f64).ceil() as usize
        }
    };
    let rest = n.checked_sub(groups * k).ok_or_else(|| {
        Error::Infeasible(format!("{groups} groups of {k} do not fit in {n} entries"))
    })?;
    let spare_values = r.saturating_sub(groups);
    if groups > r || spare_values * (k - 1) < rest {
        return Err(Error::Infeasible(format!(
            "range {r} too small for n={n}, k={k} with {groups} planted groups"
        )));
    }
    // A far sequence must also admit a collision-free repair.
    if r * (k - 1) < n {
        return Err(Error::Infeasible(
            "no k-collision-free sequence of this length exists".into(),
        ));
    }

    let mut seq = Vec::with_capacity(n);
    for &v in &values[..groups] {
        seq.extend(std::iter::repeat_n(v, k));
    }
    let mut pool: Vec<usize> = values[groups..]
        .iter()
        .flat_map(|&v| std::iter::repeat_n(v, k - 1))
        .collect();
    pool.shuffle(&mut rng);
    seq.extend_from_slice(&pool[..rest]);
    seq.shuffle(&mut rng);

    let seq = IntegerSequence::new(r, seq)?;
    let cert = match mode {
        CollisionMode::Free => None,
        CollisionMode::Far { epsilon } => {
            let dist = seq.distance_to_k_collision_free(k)?;
            Some(FarnessCertificate {
                kind: WitnessKind::DisjointCopies,
                requested_epsilon: epsilon,
                effective_epsilon: dist as f64 / n as f64,
                planted: groups,
                min_modifications: dist,
            })
        }
    };
    Ok((seq, cert))
}
