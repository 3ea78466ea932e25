use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{derive_seed, ExperimentConfig, InstanceKind, Problem, TesterKind};
use super::fit::{fit_exponent, ExponentFit};
use super::Assertion;
use crate::error::{invalid, Result};
use crate::graph::{OracleView, PatternGraph};
use crate::instances::{
    gen_collision_sequence, gen_far_h_instance, gen_h_free_instance, CollisionMode, FillerOptions,
    SequenceView,
};
use crate::testers::{
    test_collision_freeness, test_h_freeness_classical, test_h_freeness_quantum, TesterVerdict,
    Verdict,
};

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub n: usize,
    pub trial: usize,
    pub verdict: Verdict,
    pub q_classical: u64,
    pub q_charged: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub n: usize,
    pub trials: usize,
    /// Mean and standard deviation of classical plus charged queries.
    pub mean_queries: f64,
    pub std_queries: f64,
    pub mean_charged: f64,
    pub std_charged: f64,
    pub mean_classical: f64,
    pub reject_rate: f64,
    pub accept_rate: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingResult {
    pub config: ExperimentConfig,
    pub points: Vec<PointSummary>,
    pub fit: Option<ExponentFit>,
    pub target_exponent: f64,
    pub assertions: Vec<Assertion>,
    pub all_passed: bool,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

/// Exponent the mean query count should follow.
pub fn target_exponent(problem: Problem, tester: TesterKind, k: usize) -> f64 {
    match (problem, tester) {
        (_, TesterKind::Classical) => 1.0 - 1.0 / k as f64,
        _ => 0.5 * (1.0 - 1.0 / ((1u64 << k) - 1) as f64),
    }
}

/// One trial: generate an instance and run the configured tester on it.
pub fn run_trial(cfg: &ExperimentConfig, n: usize, seed: u64) -> Result<TesterVerdict> {
    let tester_seed = derive_seed(seed, n, 0, 0x7e57);
    match cfg.problem {
        Problem::HFreeness => {
            let pattern = PatternGraph::k_star(cfg.k);
            let g = match cfg.instances {
                InstanceKind::Far => gen_far_h_instance(n, cfg.d_out, &pattern, cfg.eps, seed)?.0,
                InstanceKind::Free => {
                    gen_h_free_instance(n, cfg.d_out, &pattern, seed, FillerOptions::default())?
                }
            };
            let mut view = OracleView::new(&g);
            match cfg.tester {
                TesterKind::Quantum => {
                    let model = cfg.grover()?.with_seed(tester_seed);
                    test_h_freeness_quantum(&mut view, &pattern, cfg.eps, &model)
                }
                TesterKind::Classical => {
                    test_h_freeness_classical(&mut view, &pattern, cfg.eps, tester_seed)
                }
            }
        }
        Problem::Collision => {
            if cfg.tester != TesterKind::Quantum {
                return invalid("the collision problem only has a quantum tester");
            }
            let mode = match cfg.instances {
                InstanceKind::Far => CollisionMode::Far { epsilon: cfg.eps },
                InstanceKind::Free => CollisionMode::Free,
            };
            let (seq, _) = gen_collision_sequence(n, n, cfg.k, mode, seed)?;
            let mut view = SequenceView::new(&seq);
            let model = cfg.grover()?.with_seed(tester_seed);
            test_collision_freeness(&mut view, cfg.k, cfg.eps, &model)
        }
        other => invalid(format!("{other:?} is not a scaling problem")),
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    } else {
        0.0
    };
    (m, var.sqrt())
}

/// Runs every `(n, trial)` pair, aggregates per `n` and fits the exponent
/// of mean queries against `n`. A grid point whose generator or tester
/// fails is recorded with its error and left out of the fit.
pub fn run_scaling(cfg: &ExperimentConfig) -> Result<ScalingResult> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = cfg
        .n_grid
        .iter()
        .flat_map(|&n| (0..cfg.trials).map(move |t| (n, t)))
        .collect();
    let outcomes: Vec<(usize, usize, u64, Result<TesterVerdict>)> = jobs
        .par_iter()
        .map(|&(n, t)| {
            let seed = derive_seed(cfg.seed, n, t, 0);
            (n, t, seed, run_trial(cfg, n, seed))
        })
        .collect();

    let mut records = Vec::with_capacity(outcomes.len());
    let mut points = Vec::new();
    for &n in &cfg.n_grid {
        let mut error = None;
        let mut rows = Vec::new();
        for (pn, t, seed, res) in &outcomes {
            if *pn != n {
                continue;
            }
            match res {
                Ok(v) => rows.push(TrialRecord {
                    n,
                    trial: *t,
                    verdict: v.verdict,
                    q_classical: v.queries_classical,
                    q_charged: v.queries_charged,
                    seed: *seed,
                }),
                Err(e) => {
                    error.get_or_insert_with(|| e.to_string());
                }
            }
        }
        rows.sort_by_key(|r| r.trial);
        let total: Vec<f64> = rows.iter().map(|r| (r.q_classical + r.q_charged) as f64).collect();
        let charged: Vec<f64> = rows.iter().map(|r| r.q_charged as f64).collect();
        let classical: Vec<f64> = rows.iter().map(|r| r.q_classical as f64).collect();
        let rejects = rows.iter().filter(|r| r.verdict == Verdict::Reject).count();
        let summary = if error.is_some() || rows.is_empty() {
            PointSummary {
                n,
                trials: rows.len(),
                mean_queries: 0.0,
                std_queries: 0.0,
                mean_charged: 0.0,
                std_charged: 0.0,
                mean_classical: 0.0,
                reject_rate: 0.0,
                accept_rate: 0.0,
                error: error.or(Some("no trials completed".into())),
            }
        } else {
            let (mq, sq) = mean_std(&total);
            let (mc, sc) = mean_std(&charged);
            let (ml, _) = mean_std(&classical);
            let rr = rejects as f64 / rows.len() as f64;
            PointSummary {
                n,
                trials: rows.len(),
                mean_queries: mq,
                std_queries: sq,
                mean_charged: mc,
                std_charged: sc,
                mean_classical: ml,
                reject_rate: rr,
                accept_rate: 1.0 - rr,
                error: None,
            }
        };
        records.extend(rows);
        points.push(summary);
    }

    let fit_points: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.error.is_none() && p.mean_queries > 0.0)
        .map(|p| (p.n as f64, p.mean_queries))
        .collect();
    let fit = fit_exponent(&fit_points).ok();
    let target = target_exponent(cfg.problem, cfg.tester, cfg.k);

    let mut assertions = Vec::new();
    for p in &points {
        if let Some(e) = &p.error {
            assertions.push(Assertion::new(format!("n={} completed", p.n), false, e.clone()));
            continue;
        }
        match cfg.instances {
            InstanceKind::Free => assertions.push(Assertion::new(
                format!("n={} free instances accepted", p.n),
                p.reject_rate == 0.0,
                format!("reject rate {:.4}", p.reject_rate),
            )),
            InstanceKind::Far => assertions.push(Assertion::new(
                format!("n={} far instances rejected", p.n),
                p.reject_rate >= 2.0 / 3.0,
                format!("reject rate {:.4}", p.reject_rate),
            )),
        }
    }
    if cfg.instances == InstanceKind::Far {
        let (ok, detail) = match &fit {
            Some(f) => (
                (f.slope - target).abs() <= cfg.tolerance,
                format!("slope {:.4} vs target {:.4} ± {}", f.slope, target, cfg.tolerance),
            ),
            None => (false, format!("only {} usable grid points", fit_points.len())),
        };
        assertions.push(Assertion::new("query exponent", ok, detail));
    }
    let all_passed = assertions.iter().all(|a| a.passed);
    Ok(ScalingResult {
        config: cfg.clone(),
        points,
        fit,
        target_exponent: target,
        assertions,
        all_passed,
        records,
    })
}

/// CSV with columns `n, trial, verdict, q_classical, q_charged, seed`.
pub fn scaling_csv(records: &[TrialRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Checks the fields every summary must carry.
pub fn validate_summary(v: &serde_json::Value) -> Result<()> {
    let obj = v.as_object().ok_or_else(|| crate::Error::InvalidInput("summary is not an object".into()))?;
    for key in ["config", "points", "fit", "target_exponent", "assertions", "all_passed"] {
        if !obj.contains_key(key) {
            return invalid(format!("summary lacks {key:?}"));
        }
    }
    let points = obj["points"]
        .as_array()
        .ok_or_else(|| crate::Error::InvalidInput("points is not an array".into()))?;
    for p in points {
        for key in ["n", "trials", "mean_queries", "std_queries", "reject_rate"] {
            if p.get(key).is_none_or(|x| !x.is_number()) {
                return invalid(format!("point lacks numeric {key:?}"));
            }
        }
    }
    if !obj["all_passed"].is_boolean() {
        return invalid("all_passed is not a boolean");
    }
    Ok(())
}

/// Writes `<stem>.csv` and `<stem>_summary.json` into `dir`.
pub fn write_scaling(result: &ScalingResult, dir: &Path, stem: &str) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(dir)?;
    let csv_path = dir.join(format!("{stem}.csv"));
    fs::write(&csv_path, scaling_csv(&result.records)?)?;
    let value = serde_json::to_value(result)?;
    validate_summary(&value)?;
    let json_path = dir.join(format!("{stem}_summary.json"));
    fs::write(&json_path, serde_json::to_string_pretty(&value)? + "\n")?;
    Ok((csv_path, json_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            n_grid: vec![256, 512, 1024, 2048],
            trials: 4,
            seed: 11,
            ..Default::default()
        }
    }

    #[test]
    fn deterministic_csv() {
        let a = run_scaling(&small()).unwrap();
        let b = run_scaling(&small()).unwrap();
        assert_eq!(scaling_csv(&a.records).unwrap(), scaling_csv(&b.records).unwrap());
        let head = scaling_csv(&a.records).unwrap();
        assert!(head.starts_with("n,trial,verdict,q_classical,q_charged,seed\n"));
        validate_summary(&serde_json::to_value(&a).unwrap()).unwrap();
    }

    #[test]
    fn infeasible_point_is_recorded() {
        let cfg = ExperimentConfig {
            n_grid: vec![2, 256, 512, 1024, 2048],
            trials: 2,
            ..Default::default()
        };
        let r = run_scaling(&cfg).unwrap();
        assert!(r.points[0].error.is_some());
        assert!(r.fit.is_some());
        assert!(!r.all_passed);
    }
}
