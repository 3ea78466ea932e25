//! Experiment drivers behind the command-line tool: scaling runs with
//! exponent fits, dual-polynomial certification, the GF(2) game and
//! instance generation.

mod certify;
mod config;
mod fit;
mod gen;
mod lin2_game;
mod scaling;

use serde::{Deserialize, Serialize};

pub use certify::{run_certification, run_certification_plan, CertificationPlan};
pub use config::{
    block_coupling, derive_seed, ExperimentConfig, InstanceKind, Problem, TesterKind,
};
pub use fit::{fit_exponent, ExponentFit};
pub use gen::{generate, GenKind, GenRequest, GeneratedInstance};
pub use lin2_game::{run_lin2_game, Lin2GameReport, MatrixInfo, GAME_UNIFORM_MAX_N};
pub use scaling::{
    run_scaling, run_trial, scaling_csv, target_exponent, validate_summary, write_scaling,
    PointSummary, ScalingResult, TrialRecord,
};

/// Environment variable that overrides the output directory.
pub const OUTPUT_DIR_ENV: &str = "QPTEST_OUTPUT_DIR";

/// A named pass/fail outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}
