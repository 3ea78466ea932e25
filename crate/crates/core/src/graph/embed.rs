//! Pattern embeddings (subgraph semantics: extra host edges are allowed).

use std::collections::{HashMap, HashSet, VecDeque};
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{bfs_limited, ExploredSubgraph, OracleView, OutAdjacency, PatternGraph};
use crate::error::{invalid, Result};

/// An explicit finite subgraph that embeddings are searched in.
#[derive(Debug, Clone, Default)]
pub struct HostGraph {
    vertices: Vec<usize>,
    present: HashSet<usize>,
    out: HashMap<usize, Vec<usize>>,
    inn: HashMap<usize, Vec<usize>>,
    edges: HashSet<(usize, usize)>,
}

impl HostGraph {
    pub fn add_vertex(&mut self, v: usize) {
        if self.present.insert(v) {
            self.vertices.push(v);
        }
    }

    pub fn add_edge(&mut self, u: usize, w: usize) {
        self.add_vertex(u);
        self.add_vertex(w);
        if self.edges.insert((u, w)) {
            self.out.entry(u).or_default().push(w);
            self.inn.entry(w).or_default().push(u);
        }
    }

    pub fn from_explored<'e>(parts: impl IntoIterator<Item = &'e ExploredSubgraph>) -> Self {
        let mut host = Self::default();
        for part in parts {
            for &v in &part.vertices {
                host.add_vertex(v);
            }
            for &(u, w) in &part.edges {
                host.add_edge(u, w);
            }
        }
        host
    }

    /// Every vertex within undirected distance `radius` of `center`, with all
    /// graph edges among them. Needs full knowledge (`rev` = in-lists).
    pub fn undirected_ball<G: OutAdjacency + ?Sized>(
        g: &G,
        rev: &[Vec<usize>],
        center: usize,
        radius: usize,
    ) -> Self {
        let mut dist = HashMap::from([(center, 0usize)]);
        let mut queue = VecDeque::from([center]);
        while let Some(u) = queue.pop_front() {
            let du = dist[&u];
            if du == radius {
                continue;
            }
            for w in g.out_neighbors(u).into_iter().chain(rev[u].iter().copied()) {
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(du + 1);
                    queue.push_back(w);
                }
            }
        }
        let mut members: Vec<usize> = dist.keys().copied().collect();
        members.sort_unstable();
        let mut host = Self::default();
        for &u in &members {
            host.add_vertex(u);
        }
        for &u in &members {
            for w in g.out_neighbors(u) {
                if dist.contains_key(&w) {
                    host.add_edge(u, w);
                }
            }
        }
        host
    }

    pub fn whole<G: OutAdjacency + ?Sized>(g: &G) -> Self {
        let mut host = Self::default();
        for u in 0..g.vertex_count() {
            host.add_vertex(u);
        }
        for u in 0..g.vertex_count() {
            for w in g.out_neighbors(u) {
                host.add_edge(u, w);
            }
        }
        host
    }

    pub fn contains(&self, v: usize) -> bool {
        self.present.contains(&v)
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.edges.contains(&(u, w))
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    fn out_of(&self, v: usize) -> &[usize] {
        self.out.get(&v).map_or(&[], Vec::as_slice)
    }

    fn in_of(&self, v: usize) -> &[usize] {
        self.inn.get(&v).map_or(&[], Vec::as_slice)
    }
}

/// Injective map from pattern vertices to graph vertices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    /// Graph vertices covered by the image of source component `j`.
    pub fn component_image(&self, pattern: &PatternGraph, j: usize) -> Vec<usize> {
        pattern.source_components()[j]
            .iter()
            .map(|&p| self.map[p])
            .collect()
    }

    /// Union of all source-component images.
    pub fn source_vertices(&self, pattern: &PatternGraph) -> Vec<usize> {
        (0..pattern.k())
            .flat_map(|j| self.component_image(pattern, j))
            .collect()
    }
}

/// Extra requirements on an embedding beyond being a copy of the pattern.
#[derive(Debug, Clone, Default)]
pub struct SearchConstraints<'c> {
    /// `(graph vertex, source component)`: the vertex must lie in the image
    /// of that component.
    pub anchors: Vec<(usize, usize)>,
    /// No source-component vertex may map into this set.
    pub avoid_in_sources: Option<&'c HashSet<usize>>,
    /// Every source-component image must meet this set.
    pub sources_must_hit: Option<&'c HashSet<usize>>,
}

struct Search<'s, 'c> {
    host: &'s HostGraph,
    pattern: &'s PatternGraph,
    cons: &'s SearchConstraints<'c>,
    map: Vec<Option<usize>>,
    used: HashSet<usize>,
}

impl Search<'_, '_> {
    fn compatible(&self, p: usize, g: usize) -> bool {
        if self.used.contains(&g) || !self.host.contains(g) {
            return false;
        }
        if let (Some(avoid), Some(_)) = (self.cons.avoid_in_sources, self.pattern.component_of(p)) {
            if avoid.contains(&g) {
                return false;
            }
        }
        let edges_out = self.pattern.out_list(p).iter().all(|&q| match self.map[q] {
            Some(gq) => self.host.has_edge(g, gq),
            None => true,
        });
        edges_out
            && self.pattern.in_list(p).iter().all(|&q| match self.map[q] {
                Some(gq) => self.host.has_edge(gq, g),
                None => true,
            })
    }

    fn set(&mut self, p: usize, g: usize) {
        self.map[p] = Some(g);
        self.used.insert(g);
    }

    fn unset(&mut self, p: usize) {
        if let Some(g) = self.map[p].take() {
            self.used.remove(&g);
        }
    }

    /// Returns `true` once the visitor asks to stop.
    fn place_anchor(&mut self, idx: usize, visit: &mut Visitor<'_>) -> bool {
        let Some(&(g, j)) = self.cons.anchors.get(idx) else {
            let order = self.extension_order();
            return self.extend(&order, 0, visit);
        };
        let comp = self.pattern.source_components()[j].clone();
        for p in comp {
            if self.map[p].is_some() || !self.compatible(p, g) {
                continue;
            }
            self.set(p, g);
            if self.place_anchor(idx + 1, visit) {
                return true;
            }
            self.unset(p);
        }
        false
    }

    /// Remaining pattern vertices, each (where possible) adjacent to an
    /// earlier one so candidates come from host adjacency.
    fn extension_order(&self) -> Vec<usize> {
        let h = self.pattern.h();
        let mut seen: Vec<bool> = self.map.iter().map(Option::is_some).collect();
        let mut order = Vec::with_capacity(h);
        let mut queue: VecDeque<usize> = (0..h).filter(|&p| seen[p]).collect();
        loop {
            while let Some(p) = queue.pop_front() {
                for &q in self
                    .pattern
                    .out_list(p)
                    .iter()
                    .chain(self.pattern.in_list(p))
                {
                    if !seen[q] {
                        seen[q] = true;
                        order.push(q);
                        queue.push_back(q);
                    }
                }
            }
            // Start a new weak component, preferring source vertices.
            let next = (0..h)
                .filter(|&p| !seen[p])
                .min_by_key(|&p| self.pattern.component_of(p).is_none());
            match next {
                Some(p) => {
                    seen[p] = true;
                    order.push(p);
                    queue.push_back(p);
                }
                None => break,
            }
        }
        order
    }

    fn candidates(&self, p: usize) -> Vec<usize> {
        if let Some(&q) = self
            .pattern
            .out_list(p)
            .iter()
            .find(|&&q| self.map[q].is_some())
        {
            return self.host.in_of(self.map[q].unwrap()).to_vec();
        }
        if let Some(&q) = self
            .pattern
            .in_list(p)
            .iter()
            .find(|&&q| self.map[q].is_some())
        {
            return self.host.out_of(self.map[q].unwrap()).to_vec();
        }
        self.host.vertices().to_vec()
    }

    fn extend(&mut self, order: &[usize], pos: usize, visit: &mut Visitor<'_>) -> bool {
        let Some(&p) = order.get(pos) else {
            return match self.finish() {
                Some(emb) => visit(&emb).is_break(),
                None => false,
            };
        };
        for g in self.candidates(p) {
            if !self.compatible(p, g) {
                continue;
            }
            self.set(p, g);
            if self.extend(order, pos + 1, visit) {
                return true;
            }
            self.unset(p);
        }
        false
    }

    fn finish(&self) -> Option<Embedding> {
        let emb = Embedding {
            map: self.map.iter().map(|g| g.expect("complete map")).collect(),
        };
        if let Some(hit) = self.cons.sources_must_hit {
            let all_hit = (0..self.pattern.k()).all(|j| {
                emb.component_image(self.pattern, j)
                    .iter()
                    .any(|g| hit.contains(g))
            });
            if !all_hit {
                return None;
            }
        }
        Some(emb)
    }
}

type Visitor<'v> = dyn FnMut(&Embedding) -> ControlFlow<()> + 'v;

/// Calls `visit` on every embedding satisfying the constraints until it
/// returns `Break`. An embedding can be reported more than once when
/// anchors sit in components with several vertices.
pub fn for_each_embedding(
    host: &HostGraph,
    pattern: &PatternGraph,
    cons: &SearchConstraints<'_>,
    mut visit: impl FnMut(&Embedding) -> ControlFlow<()>,
) {
    let mut search = Search {
        host,
        pattern,
        cons,
        map: vec![None; pattern.h()],
        used: HashSet::new(),
    };
    search.place_anchor(0, &mut visit);
}

/// Backtracking search for one embedding of `pattern` into `host`.
pub fn search_embedding(
    host: &HostGraph,
    pattern: &PatternGraph,
    cons: &SearchConstraints<'_>,
) -> Option<Embedding> {
    let mut found = None;
    for_each_embedding(host, pattern, cons, |emb| {
        found = Some(emb.clone());
        ControlFlow::Break(())
    });
    found
}

fn validate_anchors(pattern: &PatternGraph, n: usize, anchors: &[(usize, usize)]) -> Result<()> {
    let mut vs = HashSet::new();
    let mut comps = HashSet::new();
    for &(v, j) in anchors {
        if v >= n {
            return invalid(format!("anchor vertex {v} out of range"));
        }
        if j >= pattern.k() {
            return invalid(format!("pattern has no source component {j}"));
        }
        if !vs.insert(v) || !comps.insert(j) {
            return invalid("anchors must use distinct vertices and distinct components");
        }
    }
    Ok(())
}

/// Runs a depth-`h` BFS from every anchor and looks for a copy of the
/// pattern inside what was explored, with each anchor in the image of its
/// assigned source component.
pub fn find_h_copy_through<G: OutAdjacency + ?Sized>(
    view: &mut OracleView<'_, G>,
    pattern: &PatternGraph,
    anchors: &[(usize, usize)],
) -> Result<Option<Embedding>> {
    validate_anchors(pattern, view.n(), anchors)?;
    let mut balls = Vec::with_capacity(anchors.len());
    for &(v, _) in anchors {
        balls.push(bfs_limited(view, v, pattern.h())?);
    }
    Ok(find_copy_in_balls(&balls, pattern, anchors))
}

/// Same search as [`find_h_copy_through`] over balls explored earlier.
pub fn find_copy_in_balls<'e>(
    balls: impl IntoIterator<Item = &'e ExploredSubgraph>,
    pattern: &PatternGraph,
    anchors: &[(usize, usize)],
) -> Option<Embedding> {
    let host = HostGraph::from_explored(balls);
    let cons = SearchConstraints {
        anchors: anchors.to_vec(),
        ..Default::default()
    };
    search_embedding(&host, pattern, &cons)
}

/// Independent validity check of an embedding against the raw graph.
pub fn verify_embedding<G: OutAdjacency + ?Sized>(
    g: &G,
    pattern: &PatternGraph,
    emb: &Embedding,
) -> bool {
    if emb.map.len() != pattern.h() || emb.map.iter().any(|&v| v >= g.vertex_count()) {
        return false;
    }
    let distinct: HashSet<_> = emb.map.iter().collect();
    distinct.len() == emb.map.len()
        && pattern
            .edges()
            .iter()
            .all(|&(a, b)| g.out_neighbors(emb.map[a]).contains(&emb.map[b]))
}

/// Region guaranteed to contain every copy through `v`: the undirected
/// radius-`(h-1)` ball for weakly connected patterns, else the whole graph.
pub(crate) fn region_around<G: OutAdjacency + ?Sized>(
    g: &G,
    rev: &[Vec<usize>],
    pattern: &PatternGraph,
    v: usize,
) -> HostGraph {
    if pattern.is_weakly_connected() {
        HostGraph::undirected_ball(g, rev, v, pattern.h().saturating_sub(1))
    } else {
        HostGraph::whole(g)
    }
}

/// Greedy lower bound on the number of pairwise source-disjoint copies.
///
/// Only source-component vertices are consumed, so copies may share
/// non-source vertices.
pub fn count_source_disjoint_copies<G: OutAdjacency + ?Sized>(
    g: &G,
    pattern: &PatternGraph,
) -> usize {
    let rev = g.reverse_adjacency();
    let mut consumed = HashSet::new();
    let mut count = 0;
    for v in 0..g.vertex_count() {
        if consumed.contains(&v) {
            continue;
        }
        let host = region_around(g, &rev, pattern, v);
        for j in 0..pattern.k() {
            let cons = SearchConstraints {
                anchors: vec![(v, j)],
                avoid_in_sources: Some(&consumed),
                sources_must_hit: None,
            };
            if let Some(emb) = search_embedding(&host, pattern, &cons) {
                consumed.extend(emb.source_vertices(pattern));
                count += 1;
                break;
            }
        }
    }
    count
}

/// Whether the graph contains any copy of the pattern (full knowledge).
pub fn contains_copy<G: OutAdjacency + ?Sized>(g: &G, pattern: &PatternGraph) -> bool {
    find_any_copy(g, pattern).is_some()
}

pub fn find_any_copy<G: OutAdjacency + ?Sized>(g: &G, pattern: &PatternGraph) -> Option<Embedding> {
    if !pattern.is_weakly_connected() {
        return search_embedding(&HostGraph::whole(g), pattern, &SearchConstraints::default());
    }
    let rev = g.reverse_adjacency();
    (0..g.vertex_count()).find_map(|v| {
        let host = region_around(g, &rev, pattern, v);
        let cons = SearchConstraints {
            anchors: vec![(v, 0)],
            ..Default::default()
        };
        search_embedding(&host, pattern, &cons)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::BoundedOutDigraph;

    fn two_cycles_into_sink() -> PatternGraph {
        // sources {0,1} and {2,3}, both feeding 4
        PatternGraph::new(5, vec![(0, 1), (1, 0), (2, 3), (3, 2), (1, 4), (3, 4)]).unwrap()
    }

    #[test]
    fn identity_copy_is_found_through_anchors() {
        let h = two_cycles_into_sink();
        let g = BoundedOutDigraph::from_edges(5, 2, h.edges()).unwrap();
        let mut view = OracleView::new(&g);
        let emb = find_h_copy_through(&mut view, &h, &[(0, 0), (3, 1)])
            .unwrap()
            .expect("copy present");
        assert!(verify_embedding(&g, &h, &emb));
        assert!(emb.component_image(&h, 0).contains(&0));
        assert!(emb.component_image(&h, 1).contains(&3));
        assert!(view.ledger().classical > 0);
    }

    #[test]
    fn broken_source_component_has_no_copy() {
        let h = two_cycles_into_sink();
        let mut g = BoundedOutDigraph::from_edges(5, 2, h.edges()).unwrap();
        assert!(g.remove_edge(1, 0));
        let mut view = OracleView::new(&g);
        assert!(find_h_copy_through(&mut view, &h, &[(0, 0), (3, 1)])
            .unwrap()
            .is_none());
    }

    #[test]
    fn anchors_must_be_distinct() {
        let h = PatternGraph::k_star(2);
        let g = BoundedOutDigraph::new(4, 1);
        let mut view = OracleView::new(&g);
        assert!(find_h_copy_through(&mut view, &h, &[(0, 0), (0, 1)]).is_err());
        assert!(find_h_copy_through(&mut view, &h, &[(0, 0), (1, 0)]).is_err());
        assert!(find_h_copy_through(&mut view, &h, &[(0, 2)]).is_err());
    }

    #[test]
    fn extra_edges_are_allowed() {
        let h = PatternGraph::k_star(2);
        // 1->0, 2->0 plus 1->2: still contains the 2-star
        let g = BoundedOutDigraph::from_edges(3, 2, &[(1, 0), (2, 0), (1, 2)]).unwrap();
        let mut view = OracleView::new(&g);
        let emb = find_h_copy_through(&mut view, &h, &[(1, 0), (2, 1)])
            .unwrap()
            .unwrap();
        assert_eq!(emb.map, vec![0, 1, 2]);
    }

    #[test]
    fn greedy_counts_planted_stars() {
        let h = PatternGraph::k_star(2);
        let mut g = BoundedOutDigraph::new(9, 1);
        for base in [0, 3, 6] {
            g.add_edge(base + 1, base).unwrap();
            g.add_edge(base + 2, base).unwrap();
        }
        assert_eq!(count_source_disjoint_copies(&g, &h), 3);
        assert_eq!(
            count_source_disjoint_copies(&BoundedOutDigraph::new(9, 1), &h),
            0
        );
    }

    #[test]
    fn source_disjoint_allows_shared_sinks() {
        // four leaves into one center: two source-disjoint 2-stars
        let h = PatternGraph::k_star(2);
        let g = BoundedOutDigraph::from_edges(5, 1, &[(1, 0), (2, 0), (3, 0), (4, 0)]).unwrap();
        assert_eq!(count_source_disjoint_copies(&g, &h), 2);
    }
}
