use std::collections::BTreeSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::GF2Matrix;

/// Significance level of the sampled uniformity test.
pub const KWISE_SIGNIFICANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KwiseReport {
    pub k: usize,
    pub subsets_checked: usize,
    /// Exact marginals (enumerable source) rather than a chi-squared test.
    pub exact: bool,
    /// Subsets whose marginal was not uniform.
    pub failures: Vec<Vec<usize>>,
    pub passed: bool,
}

/// Index subsets of size `1..=k` of `0..m`: all of them if there are at
/// most `budget`, else `budget` distinct ones drawn with `seed`.
pub fn subsets_up_to(m: usize, k: usize, budget: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut total: u128 = 0;
    for s in 1..=k.min(m) {
        total += binom(m, s);
    }
    if total <= budget as u128 {
        for s in 1..=k.min(m) {
            combinations(m, s, &mut Vec::new(), 0, &mut all);
        }
        return all;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    while seen.len() < budget {
        let s = rng.random_range(1..=k.min(m));
        let mut pick = sample(&mut rng, m, s).into_vec();
        pick.sort_unstable();
        seen.insert(pick);
    }
    seen.into_iter().collect()
}

fn binom(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn combinations(m: usize, s: usize, cur: &mut Vec<usize>, start: usize, out: &mut Vec<Vec<usize>>) {
    if cur.len() == s {
        out.push(cur.clone());
        return;
    }
    for i in start..m {
        cur.push(i);
        combinations(m, s, cur, i + 1, out);
        cur.pop();
    }
}

fn pattern(x: &[bool], subset: &[usize]) -> usize {
    subset
        .iter()
        .enumerate()
        .fold(0, |acc, (b, &i)| acc | (usize::from(x[i]) << b))
}

/// Exact check: `outcomes` lists the source's equally likely outputs, and
/// every restricted marginal must hit each pattern equally often.
pub fn kwise_check_exact(outcomes: &[Vec<bool>], m: usize, k: usize, budget: usize, seed: u64) -> KwiseReport {
    let subsets = subsets_up_to(m, k, budget, seed);
    let failures: Vec<Vec<usize>> = subsets
        .par_iter()
        .filter(|s| {
            let mut counts = vec![0usize; 1 << s.len()];
            for x in outcomes {
                counts[pattern(x, s)] += 1;
            }
            counts.iter().any(|&c| c * counts.len() != outcomes.len())
        })
        .cloned()
        .collect();
    KwiseReport {
        k,
        subsets_checked: subsets.len(),
        exact: true,
        passed: failures.is_empty(),
        failures,
    }
}

/// Sampled check: `samples` draws from `sampler`, one chi-squared test per
/// subset at [`KWISE_SIGNIFICANCE`].
pub fn kwise_check_sampled(
    mut sampler: impl FnMut(&mut ChaCha8Rng) -> Vec<bool>,
    m: usize,
    k: usize,
    budget: usize,
    samples: usize,
    seed: u64,
) -> KwiseReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<bool>> = (0..samples).map(|_| sampler(&mut rng)).collect();
    let subsets = subsets_up_to(m, k, budget, seed ^ 0x5eed);
    let failures: Vec<Vec<usize>> = subsets
        .par_iter()
        .filter(|s| {
            let cells = 1usize << s.len();
            let mut counts = vec![0usize; cells];
            for x in &draws {
                counts[pattern(x, s)] += 1;
            }
            let expect = samples as f64 / cells as f64;
            let stat: f64 = counts
                .iter()
                .map(|&c| (c as f64 - expect).powi(2) / expect)
                .sum();
            let crit = ChiSquared::new((cells - 1) as f64)
                .expect("positive degrees of freedom")
                .inverse_cdf(1.0 - KWISE_SIGNIFICANCE);
            stat > crit
        })
        .cloned()
        .collect();
    KwiseReport {
        k,
        subsets_checked: subsets.len(),
        exact: false,
        passed: failures.is_empty(),
        failures,
    }
}

/// Every `y = A z` over all `2^n` choices of `z`.
pub fn yes_outcomes(a: &GF2Matrix) -> Vec<Vec<bool>> {
    let n = a.cols();
    assert!(n <= 24, "enumerating 2^{n} vectors is out of reach");
    (0u32..1 << n)
        .map(|z| {
            let bits: Vec<bool> = (0..n).map(|i| z >> i & 1 == 1).collect();
            a.mul_vec(&bits)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lin2::search_hard_matrix;

    #[test]
    fn uniform_source_passes() {
        let all: Vec<Vec<bool>> = (0u32..1 << 6)
            .map(|z| (0..6).map(|i| z >> i & 1 == 1).collect())
            .collect();
        assert!(kwise_check_exact(&all, 6, 3, 1000, 0).passed);
        let r = kwise_check_sampled(|rng| (0..6).map(|_| rng.random()).collect(), 6, 2, 100, 4000, 1);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn constant_source_fails() {
        let zero = vec![vec![false; 5]];
        assert!(!kwise_check_exact(&zero, 5, 1, 100, 0).passed);
        let r = kwise_check_sampled(|_| vec![false; 5], 5, 1, 100, 200, 0);
        assert!(!r.passed);
    }

    #[test]
    fn independent_rows_give_uniform_marginals() {
        let h = search_hard_matrix(9, 1, 4.0 / 9.0, 5, 500).unwrap();
        let out = yes_outcomes(&h.matrix);
        assert!(kwise_check_exact(&out, h.matrix.rows(), h.subset_size, 10_000, 0).passed);
    }

    #[test]
    fn budget_caps_subsets() {
        assert_eq!(subsets_up_to(10, 2, 1000, 0).len(), 55);
        assert_eq!(subsets_up_to(30, 4, 50, 0).len(), 50);
    }
}
