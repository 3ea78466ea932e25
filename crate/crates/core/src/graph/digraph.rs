use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Read-only out-adjacency access, shared by concrete digraphs, patterns and
/// lazily reduced instances.
///
/// Slots are zero-based here; the one-based slot convention of the oracle
/// lives in [`OracleView`](super::OracleView).
pub trait OutAdjacency {
    fn vertex_count(&self) -> usize;

    fn degree_bound(&self) -> usize;

    /// The `slot`-th out-neighbor of `v`, or `None` when `v` has fewer
    /// out-neighbors.
    fn neighbor(&self, v: usize, slot: usize) -> Option<usize>;

    fn out_neighbors(&self, v: usize) -> Vec<usize> {
        (0..self.degree_bound())
            .map_while(|slot| self.neighbor(v, slot))
            .collect()
    }

    /// In-neighbor lists for every vertex, built from full knowledge.
    fn reverse_adjacency(&self) -> Vec<Vec<usize>> {
        let mut rev = vec![Vec::new(); self.vertex_count()];
        for u in 0..self.vertex_count() {
            for w in self.out_neighbors(u) {
                rev[w].push(u);
            }
        }
        rev
    }
}

/// Directed graph whose out-degrees are bounded by `d_out`.
///
/// Adjacency lists are ordered; the oracle exposes the `i`-th entry of each
/// list. Parallel edges are rejected, self-loops only when the graph was
/// built with [`BoundedOutDigraph::allowing_self_loops`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundedOutDigraph {
    n: usize,
    d_out: usize,
    adj: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    self_loops: bool,
}

impl BoundedOutDigraph {
    pub fn new(n: usize, d_out: usize) -> Self {
        Self {
            n,
            d_out,
            adj: vec![Vec::new(); n],
            self_loops: false,
        }
    }

    pub fn allowing_self_loops(n: usize, d_out: usize) -> Self {
        Self {
            self_loops: true,
            ..Self::new(n, d_out)
        }
    }

    pub fn from_adjacency(n: usize, d_out: usize, adj: Vec<Vec<usize>>) -> Result<Self> {
        if adj.len() != n {
            return invalid(format!("expected {n} adjacency lists, got {}", adj.len()));
        }
        let mut g = Self::new(n, d_out);
        for (u, list) in adj.into_iter().enumerate() {
            for w in list {
                g.add_edge(u, w)?;
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, d_out: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::new(n, d_out);
        for &(u, w) in edges {
            g.add_edge(u, w)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, w: usize) -> Result<()> {
        if u >= self.n || w >= self.n {
            return invalid(format!("edge ({u},{w}) out of range for n={}", self.n));
        }
        if u == w && !self.self_loops {
            return invalid(format!("self-loop at {u}"));
        }
        if self.adj[u].len() >= self.d_out {
            return invalid(format!("vertex {u} already has out-degree {}", self.d_out));
        }
        if self.adj[u].contains(&w) {
            return invalid(format!("duplicate edge ({u},{w})"));
        }
        self.adj[u].push(w);
        Ok(())
    }

    /// Whether `(u, w)` could be added without violating any invariant.
    pub fn can_add_edge(&self, u: usize, w: usize) -> bool {
        u < self.n
            && w < self.n
            && (u != w || self.self_loops)
            && self.adj[u].len() < self.d_out
            && !self.adj[u].contains(&w)
    }

    pub fn remove_edge(&mut self, u: usize, w: usize) -> bool {
        match self.adj.get(u).and_then(|l| l.iter().position(|&x| x == w)) {
            Some(pos) => {
                self.adj[u].remove(pos);
                true
            }
            None => false,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn adjacency(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, w: usize) -> bool {
        self.adj.get(u).is_some_and(|l| l.contains(&w))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().map(move |&w| (u, w)))
    }

    pub fn max_out_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Line-oriented text form: a `n d_out` header, then one line of
    /// space-separated out-neighbors per vertex (empty line for none).
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.d_out);
        for list in &self.adj {
            let line: Vec<String> = list.iter().map(usize::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums = parse_usizes(header, 1)?;
        let [n, d_out] = nums[..] else {
            return Err(Error::Parse {
                line: 1,
                msg: format!("header must be `n d_out`, got {header:?}"),
            });
        };
        let mut g = Self::new(n, d_out);
        let mut seen = 0;
        for (idx, line) in lines.enumerate() {
            if seen == n {
                if line.trim().is_empty() {
                    continue;
                }
                return Err(Error::Parse {
                    line: idx + 2,
                    msg: "more vertex lines than declared".into(),
                });
            }
            for w in parse_usizes(line, idx + 2)? {
                g.add_edge(seen, w).map_err(|e| Error::Parse {
                    line: idx + 2,
                    msg: e.to_string(),
                })?;
            }
            seen += 1;
        }
        if seen != n {
            return Err(Error::Parse {
                line: seen + 2,
                msg: format!("expected {n} vertex lines, found {seen}"),
            });
        }
        Ok(g)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Parses the JSON form and re-checks every invariant.
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: Self = serde_json::from_str(json)?;
        let mut g = Self {
            self_loops: raw.self_loops,
            ..Self::new(raw.n, raw.d_out)
        };
        if raw.adj.len() != raw.n {
            return invalid("adjacency length does not match n");
        }
        for (u, list) in raw.adj.into_iter().enumerate() {
            for w in list {
                g.add_edge(u, w)?;
            }
        }
        Ok(g)
    }
}

pub(crate) fn parse_usizes(line: &str, line_no: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|e| Error::Parse {
                line: line_no,
                msg: format!("{tok:?}: {e}"),
            })
        })
        .collect()
}

impl OutAdjacency for BoundedOutDigraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn degree_bound(&self) -> usize {
        self.d_out
    }

    fn neighbor(&self, v: usize, slot: usize) -> Option<usize> {
        self.adj[v].get(slot).copied()
    }

    fn out_neighbors(&self, v: usize) -> Vec<usize> {
        self.adj[v].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degree_overflow_and_self_loops() {
        let mut g = BoundedOutDigraph::new(3, 1);
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(0, 2).is_err());
        assert!(g.add_edge(1, 1).is_err());
        assert!(g.add_edge(1, 3).is_err());
        let mut loops = BoundedOutDigraph::allowing_self_loops(2, 2);
        loops.add_edge(1, 1).unwrap();
    }

    #[test]
    fn text_format_round_trip() {
        let g = BoundedOutDigraph::from_edges(4, 2, &[(0, 3), (0, 1), (2, 0)]).unwrap();
        let text = g.to_text();
        assert_eq!(text, "4 2\n3 1\n\n0\n\n");
        assert_eq!(BoundedOutDigraph::from_text(&text).unwrap(), g);
        let json = g.to_json().unwrap();
        assert_eq!(BoundedOutDigraph::from_json(&json).unwrap(), g);
    }

    #[test]
    fn text_format_errors() {
        assert!(BoundedOutDigraph::from_text("").is_err());
        assert!(BoundedOutDigraph::from_text("2 1\n1\n").is_err());
        assert!(BoundedOutDigraph::from_text("2 1\n1 0\n\n").is_err());
        assert!(BoundedOutDigraph::from_text("2 1\nx\n\n").is_err());
        assert!(BoundedOutDigraph::from_json(r#"{"n":2,"d_out":1,"adj":[[1,0],[]]}"#).is_err());
    }
}
