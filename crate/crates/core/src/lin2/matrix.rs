use std::collections::HashMap;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Dense GF(2) matrix with bit-packed rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GF2Matrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

fn words(cols: usize) -> usize {
    cols.div_ceil(64)
}

impl GF2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![vec![0; words(cols)]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// One row per entry, listing the columns holding a one.
    pub fn from_supports(cols: usize, supports: &[Vec<usize>]) -> Result<Self> {
        let mut m = Self::zeros(supports.len(), cols);
        for (i, s) in supports.iter().enumerate() {
            for &j in s {
                if j >= cols {
                    return invalid(format!("column {j} out of range for {cols} columns"));
                }
                m.set(i, j, !m.get(i, j));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let bit = 1u64 << (j % 64);
        if v {
            self.rows[i][j / 64] |= bit;
        } else {
            self.rows[i][j / 64] &= !bit;
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    /// Columns with a one in row `i`.
    pub fn support(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.get(i, j)).collect()
    }

    /// Ones in column `j`.
    pub fn column_weight(&self, j: usize) -> usize {
        (0..self.rows()).filter(|&i| self.get(i, j)).count()
    }

    /// `A x` over GF(2).
    pub fn mul_vec(&self, x: &[bool]) -> Vec<bool> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        let packed = pack(x);
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&packed)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>()
                    % 2
                    == 1
            })
            .collect()
    }

    /// Matrix made of the listed rows.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        Self {
            cols: self.cols,
            rows: idx.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }
}

pub(crate) fn pack(x: &[bool]) -> Vec<u64> {
    let mut out = vec![0u64; words(x.len())];
    for (j, &b) in x.iter().enumerate() {
        if b {
            out[j / 64] |= 1 << (j % 64);
        }
    }
    out
}

/// Row rank over GF(2) by Gaussian elimination on a copy.
pub fn gf2_rank(m: &GF2Matrix) -> usize {
    let mut rows = m.rows.clone();
    let mut rank = 0;
    for col in 0..m.cols {
        let (w, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != rank && r[w] & bit != 0 {
                for (a, b) in r.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// How the column-occurrence condition is enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regularity {
    /// Every column occurs exactly `3c` times.
    Exact,
    /// Every column occurs at most `3c` times.
    AtMost,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HardMatrixOptions {
    pub regularity: Regularity,
    /// Random subsets tried when the subset size is above
    /// [`EXHAUSTIVE_SUBSET_MAX`].
    pub sampled_subsets: usize,
}

impl Default for HardMatrixOptions {
    fn default() -> Self {
        Self {
            regularity: Regularity::Exact,
            sampled_subsets: 2000,
        }
    }
}

/// Largest subset size whose independence is checked exhaustively.
pub const EXHAUSTIVE_SUBSET_MAX: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HardMatrix {
    pub matrix: GF2Matrix,
    pub c: usize,
    /// `floor(delta n)`: every subset of this many rows is independent.
    pub subset_size: usize,
    /// Whether `subset_size` was verified over all subsets.
    pub exhaustive: bool,
    pub attempts: usize,
}

impl HardMatrix {
    /// Verified `delta = subset_size / n`.
    pub fn delta(&self) -> f64 {
        self.subset_size as f64 / self.matrix.cols() as f64
    }
}

/// Rejection-samples a `cn x n` matrix with three ones per row until every
/// `floor(delta n)` rows are linearly independent.
pub fn search_hard_matrix(
    n: usize,
    c: usize,
    delta: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<HardMatrix> {
    search_hard_matrix_with(n, c, delta, seed, max_attempts, HardMatrixOptions::default())
}

pub fn search_hard_matrix_with(
    n: usize,
    c: usize,
    delta: f64,
    seed: u64,
    max_attempts: usize,
    opts: HardMatrixOptions,
) -> Result<HardMatrix> {
    if n < 3 || c == 0 {
        return invalid("need n >= 3 and c >= 1");
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return invalid(format!("delta must lie in (0, 1], got {delta}"));
    }
    let s = (delta * n as f64).floor() as usize;
    if s == 0 {
        return invalid("floor(delta n) must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = String::from("no candidate sampled");
    for attempt in 1..=max_attempts {
        let Some(supports) = sample_supports(n, c, opts.regularity, &mut rng) else {
            last = "column-regular sampling failed".into();
            continue;
        };
        let m = GF2Matrix::from_supports(n, &supports)?;
        let exhaustive = s <= EXHAUSTIVE_SUBSET_MAX;
        let ok = if exhaustive {
            dependent_set_within(&m, s).is_none()
        } else {
            sampled_independent(&m, s, opts.sampled_subsets, &mut rng)
        };
        if ok {
            return Ok(HardMatrix {
                matrix: m,
                c,
                subset_size: s,
                exhaustive,
                attempts: attempt,
            });
        }
        last = format!("some {s} rows are dependent");
    }
    Err(Error::SearchExhausted {
        attempts: max_attempts,
        reason: last,
    })
}

/// Configuration model: `3c` stubs per column cut into triples; triples
/// with a repeated column are repaired by swapping stubs with random
/// triples.
fn sample_supports(
    n: usize,
    c: usize,
    regularity: Regularity,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<usize>>> {
    match regularity {
        Regularity::Exact => {
            let mut stubs: Vec<usize> = (0..n).flat_map(|j| std::iter::repeat_n(j, 3 * c)).collect();
            stubs.shuffle(rng);
            let bad = |s: &[usize], t: usize| {
                let (a, b, c) = (s[3 * t], s[3 * t + 1], s[3 * t + 2]);
                a == b || b == c || a == c
            };
            let triples = stubs.len() / 3;
            for _ in 0..100 * triples {
                let Some(t) = (0..triples).find(|&t| bad(&stubs, t)) else {
                    break;
                };
                let i = 3 * t + rng.random_range(0..3);
                let j = rng.random_range(0..stubs.len());
                stubs.swap(i, j);
            }
            if (0..triples).any(|t| bad(&stubs, t)) {
                return None;
            }
            Some(
                stubs
                    .chunks(3)
                    .map(|ch| {
                        let mut v = ch.to_vec();
                        v.sort_unstable();
                        v
                    })
                    .collect(),
            )
        }
        Regularity::AtMost => {
            let mut load = vec![0usize; n];
            let mut out = Vec::with_capacity(c * n);
            for _ in 0..c * n {
                let open: Vec<usize> = (0..n).filter(|&j| load[j] < 3 * c).collect();
                if open.len() < 3 {
                    return None;
                }
                let mut pick: Vec<usize> = open.choose_multiple(rng, 3).copied().collect();
                pick.sort_unstable();
                for &j in &pick {
                    load[j] += 1;
                }
                out.push(pick);
            }
            Some(out)
        }
    }
}

/// Size of some non-empty dependent set of at most `s` rows, if any,
/// found by meet-in-the-middle over subset sums of at most `ceil(s/2)`
/// rows. Subsets are inserted by increasing size and only the first per
/// sum is kept, so any dependent set `A ∪ B` with `|B| <= |A|` surfaces as
/// a collision between two stored or probing subsets with symmetric
/// difference at most `s`.
pub fn dependent_set_within(m: &GF2Matrix, s: usize) -> Option<usize> {
    let half = s.div_ceil(2);
    let mut seen: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
    let mut best: Option<usize> = None;
    let zero = vec![0u64; words(m.cols())];
    seen.insert(zero.clone(), Vec::new());
    let mut frontier: Vec<(Vec<usize>, Vec<u64>)> = vec![(Vec::new(), zero)];
    for _ in 1..=half {
        let mut next = Vec::new();
        for (subset, sum) in &frontier {
            let start = subset.last().map_or(0, |&l| l + 1);
            for i in start..m.rows() {
                let mut ns = sum.clone();
                for (a, b) in ns.iter_mut().zip(m.row(i)) {
                    *a ^= b;
                }
                let mut nsub = subset.clone();
                nsub.push(i);
                if let Some(prev) = seen.get(&ns) {
                    let diff = symmetric_difference(prev, &nsub);
                    if diff > 0 && diff <= s {
                        best = Some(best.map_or(diff, |b: usize| b.min(diff)));
                    }
                } else {
                    seen.insert(ns.clone(), nsub.clone());
                }
                next.push((nsub, ns));
            }
        }
        frontier = next;
    }
    best
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> usize {
    let common = a.iter().filter(|x| b.contains(x)).count();
    a.len() + b.len() - 2 * common
}

fn sampled_independent(m: &GF2Matrix, s: usize, tries: usize, rng: &mut ChaCha8Rng) -> bool {
    if s > m.rows() {
        return false;
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    (0..tries).all(|_| {
        let pick: Vec<usize> = idx.choose_multiple(rng, s).copied().collect();
        gf2_rank(&m.select_rows(&pick)) == s
    })
}
