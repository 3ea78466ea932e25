use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::GF2Matrix;
use crate::error::{invalid, Result};

/// Largest `n` for the exhaustive game.
pub const GAME_MAX_N: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GameResult {
    pub n: usize,
    pub rows: usize,
    pub queries: usize,
    /// Best total-variation distance any adaptive `q`-query classical
    /// tester reaches between `y = Az` and uniform `y`.
    #[serde(serialize_with = "crate::dualpoly::report::ser_rat")]
    pub advantage: BigRational,
    pub advantage_f64: f64,
}

/// Exact optimal distinguishing advantage of adaptive `q`-query testers
/// reading coordinates of `y`, maximized over all decision trees.
///
/// The advantage of a fixed tree is half the ℓ1 distance between its leaf
/// distributions, which splits over subtrees; so the best tree is found
/// by recursing over transcripts and taking the best next query at each.
pub fn distinguishing_advantage(a: &GF2Matrix, q: usize) -> Result<GameResult> {
    let n = a.cols();
    if n > GAME_MAX_N {
        return invalid(format!("n = {n} exceeds {GAME_MAX_N}"));
    }
    if q > a.rows() {
        return invalid("more queries than coordinates");
    }
    let outcomes: Vec<Vec<bool>> = (0u32..1 << n)
        .map(|z| {
            let bits: Vec<bool> = (0..n).map(|i| z >> i & 1 == 1).collect();
            a.mul_vec(&bits)
        })
        .collect();
    let all: Vec<usize> = (0..outcomes.len()).collect();
    let mut asked = vec![false; a.rows()];
    let total = best(&outcomes, &all, &mut asked, 0, q);
    // total = sum over leaves of |count_yes / 2^n - 2^-depth| scaled by 2^(n+q).
    let scale = BigInt::from(1u8) << (n + q);
    let advantage = BigRational::new(total, scale) / BigInt::from(2);
    Ok(GameResult {
        n,
        rows: a.rows(),
        queries: q,
        advantage_f64: crate::numeric::to_f64(&advantage),
        advantage,
    })
}

/// Sum over leaves of `|P_yes - P_no|`, in units of `2^-(n+q)`.
fn best(outcomes: &[Vec<bool>], alive: &[usize], asked: &mut [bool], depth: usize, q: usize) -> BigInt {
    if depth == q {
        // P_yes(leaf) = |alive| / 2^n and P_no(leaf) = 2^-q.
        let yes = BigInt::from(alive.len()) << q;
        return (yes - BigInt::from(outcomes.len())).abs();
    }
    let mut top = BigInt::zero();
    for i in 0..asked.len() {
        if asked[i] {
            continue;
        }
        asked[i] = true;
        let (ones, zeros): (Vec<usize>, Vec<usize>) = alive.iter().partition(|&&z| outcomes[z][i]);
        let v = best(outcomes, &ones, asked, depth + 1, q) + best(outcomes, &zeros, asked, depth + 1, q);
        asked[i] = false;
        if v > top {
            top = v;
        }
    }
    top
}
