//! A reduced scaling run: mean queries per n and the fitted exponent.

use qptest::harness::{run_scaling, ExperimentConfig};

fn main() -> qptest::Result<()> {
    let cfg = ExperimentConfig {
        n_grid: vec![1 << 10, 1 << 11, 1 << 12, 1 << 13],
        trials: 30,
        ..Default::default()
    };
    let res = run_scaling(&cfg)?;
    for p in &res.points {
        println!("n={:<6} mean queries {:>9.1}  reject rate {:.2}", p.n, p.mean_queries, p.reject_rate);
    }
    if let Some(fit) = &res.fit {
        println!(
            "slope {:.3} (CI {:.3}..{:.3}), target {:.3}",
            fit.slope, fit.slope_ci.0, fit.slope_ci.1, res.target_exponent
        );
    }
    for a in &res.assertions {
        println!("{} {}", if a.passed { "ok  " } else { "fail" }, a.name);
    }
    Ok(())
}
