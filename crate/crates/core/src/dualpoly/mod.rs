//! Exact-rational dual witnesses: the symmetric inner dual built from a
//! sparse-support univariate polynomial, its two-point outer partner, their
//! block composition, and the checks run against them.

mod block;
mod correlation;
mod decay;
mod omega;
mod phd;
pub mod report;

pub use block::{
    block_compose_eval, block_compose_table, block_identity_check, block_l1, false_mass, or_fn,
    thr_fn, BlockClassTable, BlockIdentity, PointMassDual, MAX_ENUM_BITS,
};
pub use correlation::{
    bound_formula, correlation, correlation_with_cap, domain_membership, CorrelationReport, Domain,
};
pub use decay::{
    decay_check, decay_max_beta, exp_bounds, le_exp_neg, Certainty, DecayReport,
    DECAY_PRECISION_BITS,
};
pub use omega::{build_omega, build_psi, OmegaParams, Psi, SymmetricWeightFunction};
pub use phd::{krawtchouk, parity_correlation, phd_check, phd_measure};
pub use report::{CertificationReport, CheckRecord, RatString};
