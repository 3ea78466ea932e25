use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{block_coupling, ExperimentConfig};
use super::fit::fit_exponent;
use crate::dualpoly::{
    block_identity_check, block_l1, build_omega, build_psi, correlation, decay_check,
    decay_max_beta, false_mass, or_fn, phd_check, phd_measure, thr_fn, CertificationReport,
    CheckRecord, PointMassDual,
};
use crate::error::Result;
use crate::numeric::rat;

/// Which instances a certification run covers.
#[derive(Debug, Clone, PartialEq)]
pub struct CertificationPlan {
    pub ks: Vec<usize>,
    /// Dimensions for the exact per-function checks.
    pub exact_n: Vec<usize>,
    pub decay_n: Vec<usize>,
    /// Block counts `R` per `k`; `N = ceil(20 (2k)^(k/2)) R`.
    pub corr_r: Vec<(usize, Vec<usize>)>,
    /// Block counts below the asymptotic regime, reported only.
    pub corr_r_info: Vec<usize>,
    pub phd_growth_n: Vec<usize>,
    pub identity_trials: usize,
    pub gamma: Vec<(usize, BigRational)>,
    pub tolerance: f64,
    pub seed: u64,
}

impl CertificationPlan {
    pub fn from_config(cfg: &ExperimentConfig) -> Result<Self> {
        let ks = vec![2, 3];
        let gamma = ks
            .iter()
            .map(|&k| Ok((k, cfg.gamma_for(k)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            exact_n: (8..=64).collect(),
            decay_n: vec![16, 32, 64],
            corr_r: vec![(2, cfg.r_grid.clone()), (3, vec![8, 12])],
            corr_r_info: vec![1, 2, 3],
            phd_growth_n: vec![16, 32, 64, 128, 256],
            identity_trials: 20,
            gamma,
            tolerance: 0.1,
            seed: cfg.seed,
            ks,
        })
    }
}

fn psi_exact_checks(k: usize, ns: &[usize]) -> CheckRecord {
    let half = rat(1, 2);
    let failures: Vec<usize> = ns
        .par_iter()
        .filter(|&&n| {
            let Ok(w) = build_omega(n, k, n) else {
                return true;
            };
            let psi = build_psi(&w);
            let support = &w.params().expect("built by build_omega").support;
            let off_support_zero = (0..=n)
                .filter(|t| support.binary_search(t).is_err())
                .all(|t| w.level_mass(t).is_zero());
            !(psi.l1().is_one()
                && psi.sum().is_zero()
                && w.positive_mass() == half
                && w.negative_mass() == half
                && off_support_zero
                && phd_check(&w, 1))
        })
        .copied()
        .collect();
    CheckRecord::new("psi_unit_l1_zero_sum_balanced", failures.is_empty())
        .param("k", k)
        .param("n_range", format!("{}..={}", ns[0], ns[ns.len() - 1]))
        .param("failing_n", format!("{failures:?}"))
}

/// The certified check must hold just below the float estimate of the
/// largest admissible `beta` and fail just above it.
fn decay_checks(k: usize, n: usize) -> Result<CheckRecord> {
    let w = build_omega(n, k, n)?;
    let alpha = BigRational::from_integer(BigInt::from((2 * k).pow(k as u32)));
    let beta = decay_max_beta(&w, &alpha).unwrap_or(0.0);
    let scale = 1_000_000i64;
    let below = rat(((beta * scale as f64).floor() as i64 - 1).max(0), scale);
    let above = rat((beta * scale as f64).ceil() as i64 + 1, scale);
    let lo = decay_check(&w, &alpha, &below);
    let hi = decay_check(&w, &alpha, &above);
    let t = n as f64;
    let reference = 1.0 / (k as f64 * t * t.powf(1.0 / k as f64)).sqrt();
    Ok(CheckRecord::new("decay_certified_matches_estimate", lo.holds && !hi.holds)
        .param("k", k)
        .param("n", n)
        .exact("alpha", &alpha)
        .exact("beta_below", &below)
        .exact("beta_above", &above)
        .approx("beta_max", beta)
        .approx("beta_over_reference", beta / reference))
}

fn identity_checks(trials: usize, seed: u64) -> Result<CheckRecord> {
    let psi = build_psi(&build_omega(3, 2, 3)?);
    let phi = PointMassDual::standard(2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all = true;
    for _ in 0..trials {
        let s: u64 = rng.random();
        let in_s = |x: u64| s >> x & 1 == 1;
        let r = block_identity_check(&phi, &psi, in_s, or_fn, thr_fn(2))?;
        all &= r.holds();
    }
    Ok(CheckRecord::new("block_identities_exact", all)
        .param("n", 3)
        .param("r", 2)
        .param("k", 2)
        .param("random_sets", trials))
}

fn correlation_checks(
    k: usize,
    r: usize,
    gammas: &[BigRational],
    in_regime: bool,
) -> Result<Vec<CheckRecord>> {
    let n = block_coupling(k) * r;
    let psi = build_psi(&build_omega(n, k, n)?);
    let phi = PointMassDual::standard(r)?;
    let mut out = Vec::new();
    let l1 = block_l1(&phi, &psi)?;
    out.push(
        CheckRecord::new("composed_l1_is_one", l1.is_one())
            .param("k", k)
            .param("r", r)
            .param("n", n)
            .exact("l1", &l1),
    );
    let (mp, mm) = false_mass(&psi, k);
    let plus_cap = BigRational::new(BigInt::one(), BigInt::from(48 * n));
    let minus_cap = rat(1, 2) - rat(2, 1i64 << (2 * k));
    out.push(
        CheckRecord::new("false_mass_caps", mp <= plus_cap && mm <= minus_cap)
            .informational()
            .param("k", k)
            .param("n", n)
            .param("mass_plus_le_1_over_48n", mp <= plus_cap)
            .param("mass_minus_le_half_minus_2_over_4k", mm <= minus_cap)
            .exact("mass_plus", &mp)
            .exact("mass_minus", &mm),
    );
    for (gi, gamma) in gammas.iter().enumerate() {
        let c = correlation(&phi, &psi, k, gamma)?;
        let dominates = c.bound <= 0.0 || c.exact_f64 >= c.bound;
        out.push(
            CheckRecord::new("correlation_dominates_bound", dominates)
                .param("k", k)
                .param("r", r)
                .param("n", n)
                .exact("gamma", gamma)
                .exact("correlation", &c.exact)
                .exact("over_cap_mass", &c.over_cap_mass)
                .exact("gap_mass", &c.gap_mass)
                .approx("correlation", c.exact_f64)
                .approx("bound", c.bound)
                .approx("bound_48", c.bound_48),
        );
        if gi > 0 {
            continue;
        }
        let nine_tenths = c.exact >= rat(9, 10);
        let budget = &c.exact - rat(2, 9) > rat(2, 3);
        let mut a = CheckRecord::new("correlation_at_least_nine_tenths", nine_tenths)
            .param("k", k)
            .param("r", r)
            .param("n", n)
            .exact("gamma", gamma)
            .approx("correlation", c.exact_f64);
        let mut b = CheckRecord::new("closeness_budget_keeps_two_thirds", budget || !nine_tenths)
            .param("k", k)
            .param("r", r)
            .param("n", n)
            .approx("correlation_minus_2_9", c.exact_f64 - 2.0 / 9.0);
        if !in_regime {
            a = a.informational();
            b = b.informational();
        }
        out.push(a);
        out.push(b);
    }
    Ok(out)
}

/// Runs every dual-polynomial check in `plan`.
pub fn run_certification_plan(plan: &CertificationPlan) -> Result<CertificationReport> {
    let mut report = CertificationReport::default();
    for &k in &plan.ks {
        report.push(psi_exact_checks(k, &plan.exact_n));
        for &n in &plan.decay_n {
            report.push(decay_checks(k, n)?);
        }
    }
    report.push(identity_checks(plan.identity_trials, plan.seed)?);

    let mut jobs = Vec::new();
    for (k, rs) in &plan.corr_r {
        let gamma0 = plan
            .gamma
            .iter()
            .find(|(gk, _)| gk == k)
            .map(|(_, g)| g.clone())
            .expect("gamma for every k");
        let q = 1i64 << (2 * (k - 1));
        let gammas = vec![gamma0, rat(1, 2 * q), rat(9, 10 * q)];
        for &r in &plan.corr_r_info {
            if !rs.contains(&r) {
                jobs.push((*k, r, gammas.clone(), false));
            }
        }
        for &r in rs {
            jobs.push((*k, r, gammas.clone(), true));
        }
    }
    let results: Vec<Result<Vec<CheckRecord>>> = jobs
        .par_iter()
        .map(|(k, r, g, regime)| correlation_checks(*k, *r, g, *regime))
        .collect();
    for r in results {
        for rec in r? {
            report.push(rec);
        }
    }

    let phd: Vec<(usize, usize)> = plan
        .phd_growth_n
        .par_iter()
        .map(|&n| Ok((n, phd_measure(&build_omega(n, 2, n)?))))
        .collect::<Result<Vec<_>>>()?;
    for &(n, d) in &phd {
        report.measured_phd.push((n, 2, d));
    }
    let pts: Vec<(f64, f64)> = phd.iter().map(|&(n, d)| (n as f64, d as f64)).collect();
    let fit = fit_exponent(&pts)?;
    let target = 0.25;
    report.push(
        CheckRecord::new(
            "phd_growth_exponent",
            (fit.slope - target).abs() <= plan.tolerance,
        )
        .param("k", 2)
        .param("n_grid", format!("{:?}", plan.phd_growth_n))
        .param(
            "measured_phd",
            format!("{:?}", phd.iter().map(|p| p.1).collect::<Vec<_>>()),
        )
        .approx("slope", fit.slope)
        .approx("target", target)
        .approx("tolerance", plan.tolerance),
    );
    Ok(report.finish())
}

pub fn run_certification(cfg: &ExperimentConfig) -> Result<CertificationReport> {
    run_certification_plan(&CertificationPlan::from_config(cfg)?)
}
