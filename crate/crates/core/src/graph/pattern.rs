use serde::{Deserialize, Serialize};

use super::OutAdjacency;
use crate::error::{invalid, Result};

/// Strongly connected components, each sorted, listed by minimum vertex.
pub fn strongly_connected_components<G: OutAdjacency + ?Sized>(g: &G) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let adj: Vec<Vec<usize>> = (0..n).map(|v| g.out_neighbors(v)).collect();

    // Iterative Tarjan.
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0usize;
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < adj[v].len() {
                let w = adj[v][top.1];
                top.1 += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps.sort_by_key(|c| c[0]);
    comps
}

/// Strongly connected components with no edge entering from outside,
/// sorted by minimum vertex id.
pub fn source_components<G: OutAdjacency + ?Sized>(g: &G) -> Vec<Vec<usize>> {
    let comps = strongly_connected_components(g);
    let mut comp_of = vec![0usize; g.vertex_count()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut has_incoming = vec![false; comps.len()];
    for u in 0..g.vertex_count() {
        for w in g.out_neighbors(u) {
            if comp_of[u] != comp_of[w] {
                has_incoming[comp_of[w]] = true;
            }
        }
    }
    comps
        .into_iter()
        .zip(has_incoming)
        .filter_map(|(c, inc)| (!inc).then_some(c))
        .collect()
}

/// Pattern induced on what a set of source components reaches.
#[derive(Debug, Clone)]
pub struct SubPattern {
    pub pattern: PatternGraph,
    /// Parent vertex of every sub-pattern vertex.
    pub to_parent: Vec<usize>,
    /// Parent source component -> sub-pattern source component.
    pub comp_map: Vec<Option<usize>>,
}

/// The constant-size pattern `H`, with its source components precomputed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternGraph {
    h: usize,
    edges: Vec<(usize, usize)>,
    #[serde(skip)]
    out: Vec<Vec<usize>>,
    #[serde(skip)]
    inn: Vec<Vec<usize>>,
    #[serde(skip)]
    sources: Vec<Vec<usize>>,
    #[serde(skip)]
    comp_of: Vec<Option<usize>>,
}

impl PatternGraph {
    pub fn new(h: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if h == 0 {
            return invalid("pattern needs at least one vertex");
        }
        let mut out = vec![Vec::new(); h];
        let mut inn = vec![Vec::new(); h];
        for &(a, b) in &edges {
            if a >= h || b >= h {
                return invalid(format!("pattern edge ({a},{b}) out of range"));
            }
            if a == b {
                return invalid(format!("pattern self-loop at {a}"));
            }
            if out[a].contains(&b) {
                return invalid(format!("duplicate pattern edge ({a},{b})"));
            }
            out[a].push(b);
            inn[b].push(a);
        }
        let mut p = Self {
            h,
            edges,
            out,
            inn,
            sources: Vec::new(),
            comp_of: vec![None; h],
        };
        p.sources = source_components(&p);
        for (j, comp) in p.sources.iter().enumerate() {
            for &v in comp {
                p.comp_of[v] = Some(j);
            }
        }
        Ok(p)
    }

    /// `k` leaves, each with a single edge into the center (vertex 0).
    pub fn k_star(k: usize) -> Self {
        let edges = (1..=k).map(|leaf| (leaf, 0)).collect();
        Self::new(k + 1, edges).expect("k-star is well formed")
    }

    pub fn directed_cycle(len: usize) -> Result<Self> {
        if len < 2 {
            return invalid("cycle needs at least two vertices");
        }
        Self::new(len, (0..len).map(|i| (i, (i + 1) % len)).collect())
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn k(&self) -> usize {
        self.sources.len()
    }

    pub fn source_components(&self) -> &[Vec<usize>] {
        &self.sources
    }

    /// Index of the source component containing `v`, if any.
    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.comp_of[v]
    }

    pub fn out_list(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn in_list(&self, v: usize) -> &[usize] {
        &self.inn[v]
    }

    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_weakly_connected(&self) -> bool {
        let mut seen = vec![false; self.h];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in self.out[v].iter().chain(&self.inn[v]) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The part of the pattern reachable from the chosen source components.
    /// Its source components are exactly the chosen ones.
    pub fn restrict_to_sources(&self, comps: &[usize]) -> Result<SubPattern> {
        if comps.is_empty() || comps.iter().any(|&j| j >= self.k()) {
            return invalid("component list must be non-empty and in range");
        }
        let mut keep = vec![false; self.h];
        let mut stack: Vec<usize> = comps
            .iter()
            .flat_map(|&j| self.sources[j].clone())
            .collect();
        for &v in &stack {
            keep[v] = true;
        }
        while let Some(v) = stack.pop() {
            for &w in &self.out[v] {
                if !keep[w] {
                    keep[w] = true;
                    stack.push(w);
                }
            }
        }
        let to_parent: Vec<usize> = (0..self.h).filter(|&v| keep[v]).collect();
        let mut index = vec![usize::MAX; self.h];
        for (i, &v) in to_parent.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| keep[a] && keep[b])
            .map(|&(a, b)| (index[a], index[b]))
            .collect();
        let pattern = Self::new(to_parent.len(), edges)?;
        let comp_map = (0..self.k())
            .map(|j| {
                let v = self.sources[j][0];
                keep[v].then(|| {
                    pattern
                        .component_of(index[v])
                        .expect("chosen comps stay sources")
                })
            })
            .collect();
        Ok(SubPattern {
            pattern,
            to_parent,
            comp_map,
        })
    }

    /// Permutations of the source components induced by automorphisms of
    /// the pattern (identity first). Only computed for `h <= 8`; larger
    /// patterns report the identity alone.
    pub fn source_automorphisms(&self) -> Vec<Vec<usize>> {
        let identity: Vec<usize> = (0..self.k()).collect();
        let mut found = vec![identity.clone()];
        if self.h > 8 {
            return found;
        }
        let mut used = vec![false; self.h];
        let mut current = Vec::with_capacity(self.h);
        self.automorphisms_rec(&mut current, &mut used, &mut |pi| {
            let sigma: Vec<usize> = (0..self.k())
                .map(|j| self.comp_of[pi[self.sources[j][0]]].expect("sources map to sources"))
                .collect();
            if !found.contains(&sigma) {
                found.push(sigma);
            }
        });
        found
    }

    fn automorphisms_rec(
        &self,
        current: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        let v = current.len();
        if v == self.h {
            visit(current);
            return;
        }
        for img in 0..self.h {
            if used[img]
                || self.out[v].len() != self.out[img].len()
                || self.inn[v].len() != self.inn[img].len()
            {
                continue;
            }
            let consistent = (0..v).all(|u| {
                self.out[u].contains(&v) == self.out[current[u]].contains(&img)
                    && self.out[v].contains(&u) == self.out[img].contains(&current[u])
            });
            if !consistent {
                continue;
            }
            used[img] = true;
            current.push(img);
            self.automorphisms_rec(current, used, visit);
            current.pop();
            used[img] = false;
        }
    }

    /// Rebuilds cached fields after deserialization.
    pub fn from_json(json: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            h: usize,
            edges: Vec<(usize, usize)>,
        }
        let raw: Raw = serde_json::from_str(json)?;
        Self::new(raw.h, raw.edges)
    }
}

impl OutAdjacency for PatternGraph {
    fn vertex_count(&self) -> usize {
        self.h
    }

    fn degree_bound(&self) -> usize {
        self.max_out_degree()
    }

    fn neighbor(&self, v: usize, slot: usize) -> Option<usize> {
        self.out[v].get(slot).copied()
    }

    fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.out[v].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_star_has_k_leaf_sources() {
        let star = PatternGraph::k_star(3);
        assert_eq!(star.k(), 3);
        assert_eq!(star.source_components(), &[vec![1], vec![2], vec![3]]);
        assert_eq!(star.component_of(0), None);
    }

    #[test]
    fn single_vertex_is_one_source() {
        let p = PatternGraph::new(1, vec![]).unwrap();
        assert_eq!(p.source_components(), &[vec![0]]);
    }

    #[test]
    fn cycle_feeding_a_sink() {
        // 0 <-> 1 -> 2 <- 3
        let p = PatternGraph::new(4, vec![(0, 1), (1, 0), (1, 2), (3, 2)]).unwrap();
        assert_eq!(p.source_components(), &[vec![0, 1], vec![3]]);
        assert_eq!(
            strongly_connected_components(&p),
            vec![vec![0, 1], vec![2], vec![3]]
        );
    }

    #[test]
    fn rejects_malformed_patterns() {
        assert!(PatternGraph::new(0, vec![]).is_err());
        assert!(PatternGraph::new(2, vec![(0, 2)]).is_err());
        assert!(PatternGraph::new(2, vec![(1, 1)]).is_err());
        assert!(PatternGraph::new(2, vec![(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn star_restriction_and_symmetry() {
        let star = PatternGraph::k_star(3);
        let sub = star.restrict_to_sources(&[0, 2]).unwrap();
        assert_eq!(sub.to_parent, vec![0, 1, 3]);
        assert_eq!(sub.pattern.k(), 2);
        assert_eq!(sub.comp_map, vec![Some(0), None, Some(1)]);
        assert_eq!(star.source_automorphisms().len(), 6);
        let p = PatternGraph::new(4, vec![(0, 1), (1, 0), (1, 2), (3, 2)]).unwrap();
        assert_eq!(p.source_automorphisms(), vec![vec![0, 1]]);
    }

    #[test]
    fn json_rebuilds_components() {
        let p = PatternGraph::k_star(2);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(PatternGraph::from_json(&json).unwrap(), p);
    }
}
