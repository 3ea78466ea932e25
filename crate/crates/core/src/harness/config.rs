use std::path::PathBuf;
use std::str::FromStr;

use num_rational::{BigRational, Ratio};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::testers::GroverModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    HFreeness,
    Collision,
    DualpolyCert,
    Lin2Game,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TesterKind {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceKind {
    Far,
    Free,
}

/// Everything one harness run depends on. Identical configs produce
/// identical output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub tester: TesterKind,
    pub instances: InstanceKind,
    pub k: usize,
    pub eps: f64,
    /// Gap parameter as an exact rational string (`"1/640"`); `None`
    /// derives it from `k`.
    pub gamma: Option<String>,
    pub n_grid: Vec<usize>,
    /// Block counts for the correlation grid.
    pub r_grid: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub d_out: usize,
    pub c_g: Ratio<u64>,
    pub p_succ: f64,
    /// Row multiplier of the far system in the game.
    pub lin2_c: usize,
    pub delta: f64,
    /// Far systems must be `(1/2 - alpha)`-far.
    pub alpha: f64,
    /// Allowed distance of a fitted exponent from its target.
    pub tolerance: f64,
    /// Not serialized, so results do not depend on where they are written.
    #[serde(skip)]
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: Problem::HFreeness,
            tester: TesterKind::Quantum,
            instances: InstanceKind::Far,
            k: 2,
            eps: 0.05,
            gamma: None,
            n_grid: vec![1 << 10, 1 << 11, 1 << 12, 1 << 13, 1 << 14],
            r_grid: vec![4, 6, 8, 12, 16],
            trials: 50,
            seed: 0,
            d_out: 2,
            c_g: Ratio::from_integer(3),
            p_succ: 0.9,
            lin2_c: 32,
            delta: 0.6,
            alpha: 0.1,
            tolerance: 0.05,
            output_dir: None,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_grid.is_empty() {
            return invalid("n grid is empty");
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("n grid must be strictly increasing");
        }
        if self.trials == 0 {
            return invalid("need at least one trial");
        }
        if !(self.eps > 0.0 && self.eps < 1.0) {
            return invalid("eps must lie in (0, 1)");
        }
        if self.k < 2 {
            return invalid("k must be at least 2");
        }
        self.grover()?;
        Ok(())
    }

    pub fn grover(&self) -> Result<GroverModel> {
        GroverModel::new(self.c_g, self.p_succ, self.seed)
    }

    /// `gamma` parsed exactly, or `1 / (2 4^(k-1) ceil(20 (2k)^(k/2)))`.
    pub fn gamma_for(&self, k: usize) -> Result<BigRational> {
        match &self.gamma {
            Some(s) => BigRational::from_str(s.trim())
                .or_else(|_| {
                    s.trim()
                        .parse::<f64>()
                        .ok()
                        .and_then(BigRational::from_float)
                        .ok_or(())
                })
                .or_else(|_| invalid(format!("cannot parse gamma {s:?}"))),
            None => {
                let denom = 2 * (1u64 << (2 * (k - 1))) * block_coupling(k) as u64;
                Ok(BigRational::new(1.into(), denom.into()))
            }
        }
    }
}

/// `ceil(20 (2k)^(k/2))`: inner dimension per block in the coupled grid.
pub fn block_coupling(k: usize) -> usize {
    (20.0 * ((2 * k) as f64).powf(k as f64 / 2.0)).ceil() as usize
}

/// Deterministic per-trial seed.
pub fn derive_seed(base: u64, n: usize, trial: usize, salt: u64) -> u64 {
    let mut z = base
        ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (trial as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9)
        ^ salt.wrapping_mul(0x94D0_49BB_1331_11EB);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
