use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::ops::ControlFlow;

use rand::seq::index;

use super::{grover_sample_marked, make_schedule, GroverModel, TesterVerdict, Witness};
use crate::error::{invalid, Result};
use crate::graph::{
    bfs_limited, for_each_embedding, search_embedding, verify_embedding, Embedding, HostGraph,
    OracleView, OutAdjacency, PatternGraph, SearchConstraints, SubPattern,
};

/// How the per-evaluation cost of a Grover predicate is charged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CostMode {
    /// `d_out^h`, independent of the instance.
    #[default]
    WorstCase,
    /// Largest number of queries a depth-`h` BFS actually makes on this
    /// instance.
    Measured,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumOptions {
    /// Grover calls per wanted vertex before a stage gives up.
    pub repetitions: usize,
    pub cost_mode: CostMode,
    /// Stage `i < k` collects `t_i` times this many vertices; `None` uses
    /// `ceil(h / (2 k eps))`.
    pub oversample: Option<usize>,
}

impl Default for QuantumOptions {
    fn default() -> Self {
        Self {
            repetitions: 4,
            cost_mode: CostMode::WorstCase,
            oversample: None,
        }
    }
}

/// `ceil(h / (2 k eps))`. A far instance has at least `2 eps n / h`
/// disjoint copies, hence a `2 k eps / h` fraction of source vertices, so
/// this many samples per wanted vertex hit `t_i` of them on average.
pub(crate) fn default_oversample(h: usize, k: usize, eps: f64) -> usize {
    (h as f64 / (2.0 * k as f64 * eps)).ceil().max(1.0) as usize
}

pub(crate) fn check_tester_input(pattern: &PatternGraph, eps: f64) -> Result<()> {
    if pattern.k() < 2 {
        return invalid(format!(
            "pattern has {} source components, testers need at least 2",
            pattern.k()
        ));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return invalid("eps must lie in (0, 1)");
    }
    Ok(())
}

/// Anchors `(vertex, source component)`, canonical under the pattern's
/// symmetries.
type Partial = Vec<(usize, usize)>;

#[derive(Default)]
struct Extension {
    partials: BTreeSet<Partial>,
    witness: Option<Embedding>,
}

struct Ctx<'p> {
    pattern: &'p PatternGraph,
    host: HostGraph,
    symmetries: Vec<Vec<usize>>,
    subs: HashMap<Vec<usize>, SubPattern>,
}

impl Ctx<'_> {
    fn canonical(&self, anchors: &[(usize, usize)]) -> Partial {
        self.symmetries
            .iter()
            .map(|sigma| {
                let mut a: Partial = anchors.iter().map(|&(v, j)| (v, sigma[j])).collect();
                a.sort_unstable();
                a
            })
            .min()
            .expect("identity is always present")
    }

    fn sub(&mut self, comps: &[usize]) -> &SubPattern {
        let mut key = comps.to_vec();
        key.sort_unstable();
        let pattern = self.pattern;
        self.subs
            .entry(key.clone())
            .or_insert_with(|| pattern.restrict_to_sources(&key).expect("valid components"))
    }

    /// Is `(v, j)` the start of a copy of what component `j` reaches?
    fn seeds(&mut self, v: usize, j: usize) -> bool {
        let sub = self.sub(&[j]).clone();
        let cons = SearchConstraints {
            anchors: vec![(v, sub.comp_map[j].expect("chosen"))],
            ..Default::default()
        };
        search_embedding(&self.host, &sub.pattern, &cons).is_some()
    }

    /// Every unused vertex that extends a stored partial solution by one
    /// more source component, with the extended partials it yields.
    ///
    /// A copy reachable from the anchored components lies inside the
    /// depth-`h` out-balls of its anchors, so searching the full graph
    /// gives the same answer as searching the explored balls.
    fn extensions(
        &mut self,
        partials: &BTreeSet<Partial>,
        used: &HashSet<usize>,
    ) -> BTreeMap<usize, Extension> {
        let k = self.pattern.k();
        let mut out: BTreeMap<usize, Extension> = BTreeMap::new();
        for p in partials {
            let comps: Vec<usize> = p.iter().map(|&(_, j)| j).collect();
            for j in (0..k).filter(|j| !comps.contains(j)) {
                let mut chosen = comps.clone();
                chosen.push(j);
                let sub = self.sub(&chosen).clone();
                let full = chosen.len() == k;
                let cons = SearchConstraints {
                    anchors: p
                        .iter()
                        .map(|&(v, c)| (v, sub.comp_map[c].expect("chosen")))
                        .collect(),
                    ..Default::default()
                };
                let new_comp = &sub.pattern.source_components()[sub.comp_map[j].expect("chosen")];
                for_each_embedding(&self.host, &sub.pattern, &cons, |emb| {
                    for &q in new_comp {
                        let x = emb.map[q];
                        if used.contains(&x) || p.iter().any(|&(v, _)| v == x) {
                            continue;
                        }
                        let mut anchors = p.clone();
                        anchors.push((x, j));
                        let entry = out.entry(x).or_default();
                        entry.partials.insert(self.canonical(&anchors));
                        if full && entry.witness.is_none() {
                            let mut map = vec![0; sub.to_parent.len()];
                            for (q, &parent) in sub.to_parent.iter().enumerate() {
                                map[parent] = emb.map[q];
                            }
                            entry.witness = Some(Embedding { map });
                        }
                    }
                    ControlFlow::Continue(())
                });
            }
        }
        out
    }
}

pub(crate) fn predicate_cost<G: OutAdjacency + ?Sized>(
    view: &OracleView<'_, G>,
    h: usize,
    mode: CostMode,
) -> Result<u64> {
    match mode {
        CostMode::WorstCase => Ok((view.d_out() as u64).saturating_pow(h as u32).max(1)),
        CostMode::Measured => {
            let mut worst = 1;
            for v in 0..view.n() {
                let mut scratch = view.scratch();
                bfs_limited(&mut scratch, v, h)?;
                worst = worst.max(scratch.ledger().classical);
            }
            Ok(worst)
        }
    }
}

/// Quantum tester for `pattern`-freeness with default options.
pub fn test_h_freeness_quantum<G: OutAdjacency + ?Sized>(
    view: &mut OracleView<'_, G>,
    pattern: &PatternGraph,
    eps: f64,
    model: &GroverModel,
) -> Result<TesterVerdict> {
    test_h_freeness_quantum_with(view, pattern, eps, model, &QuantumOptions::default())
}

/// Stage 1 samples `t_1` vertices and explores their depth-`h` balls
/// classically. Stage `i` (for `2 <= i < k`) uses Grover search, with
/// promise `t_{i-1}`, to find `t_i` fresh vertices that each extend a
/// stored partial solution by one more source component. Both counts are
/// scaled by the oversampling factor.
/// The last stage searches once for a vertex completing a full copy.
///
/// Rejects only with a copy that passes an independent check; running out
/// of partial solutions means accept.
pub fn test_h_freeness_quantum_with<G: OutAdjacency + ?Sized>(
    view: &mut OracleView<'_, G>,
    pattern: &PatternGraph,
    eps: f64,
    model: &GroverModel,
    opts: &QuantumOptions,
) -> Result<TesterVerdict> {
    check_tester_input(pattern, eps)?;
    let n = view.n();
    let k = pattern.k();
    let h = pattern.h();
    let schedule = make_schedule(k, n.max(2))?;
    let lambda = opts
        .oversample
        .unwrap_or_else(|| default_oversample(h, k, eps));
    let s1 = (schedule.t(1) as usize).saturating_mul(lambda).min(n);
    let cost = predicate_cost(view, h, opts.cost_mode)?;
    let mut rng = model.rng();

    let mut ctx = Ctx {
        pattern,
        host: HostGraph::whole(view.target()),
        symmetries: pattern.source_automorphisms(),
        subs: HashMap::new(),
    };

    let mut sample: Vec<usize> = index::sample(&mut rng, n, s1).into_vec();
    sample.sort_unstable();
    let mut used: HashSet<usize> = HashSet::with_capacity(s1);
    let mut partials: BTreeSet<Partial> = BTreeSet::new();
    for &v in &sample {
        bfs_limited(view, v, h)?;
        used.insert(v);
        for j in 0..k {
            if ctx.seeds(v, j) {
                partials.insert(ctx.canonical(&[(v, j)]));
            }
        }
    }

    for stage in 2..=k {
        if partials.is_empty() {
            break;
        }
        let t0 = schedule.t(stage - 1) as usize;
        // Intermediate stages keep the stage-1 oversampling so that enough
        // partial solutions survive to the last stage.
        let wanted = if stage < k {
            (schedule.t(stage) as usize).saturating_mul(lambda)
        } else {
            1
        };
        let max_calls = opts.repetitions * wanted;
        let mut marked = ctx.extensions(&partials, &used);
        let mut keys: Vec<usize> = marked.keys().copied().collect();
        let mut next: BTreeSet<Partial> = BTreeSet::new();
        let mut found = 0;
        for _ in 0..max_calls {
            if found >= wanted {
                break;
            }
            let domain = n - used.len();
            if domain == 0 {
                break;
            }
            let t0 = t0.min(domain);
            let hit =
                grover_sample_marked(model, &mut rng, view.ledger_mut(), domain, t0, cost, &keys)?;
            let Some(u) = hit else { continue };
            found += 1;
            used.insert(u);
            keys.retain(|&x| x != u);
            let ext = marked.remove(&u).expect("returned vertex is marked");
            if stage == k {
                let emb = ext.witness.expect("full extension carries a copy");
                if verify_embedding(view.target(), pattern, &emb) {
                    return Ok(TesterVerdict::new(
                        Some(Witness::Embedding(emb.map)),
                        view.ledger(),
                        model.seed(),
                    ));
                }
            }
            next.extend(ext.partials);
        }
        partials = next;
    }
    Ok(TesterVerdict::new(None, view.ledger(), model.seed()))
}
