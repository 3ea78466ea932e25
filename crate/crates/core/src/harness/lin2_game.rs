use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{derive_seed, ExperimentConfig};
use super::Assertion;
use crate::error::Result;
use crate::lin2::{
    distinguishing_advantage, kwise_check_exact, min_unsat_fraction, sample_no, sample_yes,
    search_hard_matrix, yes_outcomes, GameResult,
};

/// Largest `n` used for the exhaustive uniformity and game checks.
pub const GAME_UNIFORM_MAX_N: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatrixInfo {
    pub n: usize,
    pub c: usize,
    pub rows: usize,
    pub subset_size: usize,
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lin2GameReport {
    pub matrices: Vec<MatrixInfo>,
    pub advantages: Vec<GameResult>,
    /// `(n, seed, min unsat fraction)` per far system.
    pub far_fractions: Vec<(usize, u64, f64)>,
    pub assertions: Vec<Assertion>,
    pub all_passed: bool,
}

/// Exhaustive checks at `n <= 10` with `c = 1` (satisfiable yes
/// instances, exact `floor(delta n)`-wise uniformity, game advantage for
/// `q <= floor(delta n) / 3`), then farness of uniform right-hand sides at
/// `n = 12` with `c = lin2_c`.
pub fn run_lin2_game(cfg: &ExperimentConfig) -> Result<Lin2GameReport> {
    let mut small: Vec<usize> = cfg
        .n_grid
        .iter()
        .copied()
        .filter(|&n| (3..=GAME_UNIFORM_MAX_N).contains(&n))
        .collect();
    if small.is_empty() {
        small = vec![8, 10];
    }
    let mut matrices = Vec::new();
    let mut advantages = Vec::new();
    let mut assertions = Vec::new();
    for &n in &small {
        let hm = search_hard_matrix(n, 1, cfg.delta, derive_seed(cfg.seed, n, 0, 1), 5000)?;
        let a = &hm.matrix;
        let s = hm.subset_size;
        matrices.push(MatrixInfo {
            n,
            c: 1,
            rows: a.rows(),
            subset_size: s,
            attempts: hm.attempts,
        });
        let satisfiable = (0..cfg.trials).all(|t| {
            sample_yes(a, 1, derive_seed(cfg.seed, n, t, 2))
                .map(|sys| sys.is_satisfied_by(sys.witness().expect("yes instances keep z")))
                .unwrap_or(false)
        });
        assertions.push(Assertion::new(
            format!("n={n} yes instances satisfiable"),
            satisfiable,
            format!("{} seeds", cfg.trials),
        ));
        let kw = kwise_check_exact(&yes_outcomes(a), a.rows(), s, usize::MAX, cfg.seed);
        assertions.push(Assertion::new(
            format!("n={n} marginals uniform on {s}-subsets"),
            kw.passed,
            format!("{} subsets, {} failing", kw.subsets_checked, kw.failures.len()),
        ));
        for q in 1..=(s / 3).max(1) {
            let g = distinguishing_advantage(a, q)?;
            let ok = q > s / 3 || g.advantage <= crate::numeric::rat(1, 10);
            assertions.push(Assertion::new(
                format!("n={n} q={q} advantage at most 0.1"),
                ok,
                format!("advantage {}", g.advantage),
            ));
            advantages.push(g);
        }
    }

    let far_n = 12;
    let far = search_hard_matrix(far_n, cfg.lin2_c, 1.0 / far_n as f64, derive_seed(cfg.seed, far_n, 0, 3), 100)?;
    matrices.push(MatrixInfo {
        n: far_n,
        c: cfg.lin2_c,
        rows: far.matrix.rows(),
        subset_size: far.subset_size,
        attempts: far.attempts,
    });
    let far_fractions: Vec<(usize, u64, f64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(cfg.seed, far_n, t, 4);
            let sys = sample_no(&far.matrix, cfg.lin2_c, seed)?;
            let f: Ratio<usize> = min_unsat_fraction(&sys)?;
            Ok((far_n, seed, *f.numer() as f64 / *f.denom() as f64))
        })
        .collect::<Result<Vec<_>>>()?;
    let threshold = 0.5 - cfg.alpha;
    let far_count = far_fractions.iter().filter(|f| f.2 >= threshold).count();
    assertions.push(Assertion::new(
        format!("n={far_n} no instances far in at least 2/3 of seeds"),
        3 * far_count >= 2 * far_fractions.len(),
        format!("{far_count}/{} at least {threshold}", far_fractions.len()),
    ));
    let all_passed = assertions.iter().all(|a| a.passed);
    Ok(Lin2GameReport {
        matrices,
        advantages,
        far_fractions,
        assertions,
        all_passed,
    })
}
