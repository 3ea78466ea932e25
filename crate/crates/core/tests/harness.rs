//! Exponent fitting and end-to-end CLI behavior.

use std::path::Path;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use qptest::harness::{fit_exponent, run_scaling, scaling_csv, ExperimentConfig, OUTPUT_DIR_ENV};

#[test]
fn fit_recovers_noisy_exponent() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for rep in 0..20 {
        let pts: Vec<(f64, f64)> = (10..=14)
            .map(|e| {
                let n = (1u64 << e) as f64;
                let noise = 1.0 + rng.random_range(-0.05..=0.05);
                (n, 7.0 * n.powf(0.43) * noise)
            })
            .collect();
        let fit = fit_exponent(&pts).unwrap();
        assert!((fit.slope - 0.43).abs() <= 0.03, "rep {rep}: {}", fit.slope);
        assert!(fit.slope_ci.0 <= fit.slope && fit.slope <= fit.slope_ci.1);
    }
}

fn qptest(args: &[&str], out: &Path) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_qptest"))
        .args(args)
        .env(OUTPUT_DIR_ENV, out)
        .output()
        .unwrap();
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn scratch(name: &str) -> std::path::PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&d);
    d
}

#[test]
fn cli_scale_is_byte_deterministic() {
    let args = ["scale", "--k", "2", "--n-grid", "256,512,1024,2048", "--trials", "6", "--seed", "3"];
    let (a, b) = (scratch("det_a"), scratch("det_b"));
    let (ca, _) = qptest(&args, &a);
    let (cb, _) = qptest(&args, &b);
    assert_eq!(ca, cb);
    for f in ["scaling.csv", "scaling_summary.json"] {
        let x = std::fs::read(a.join(f)).unwrap();
        let y = std::fs::read(b.join(f)).unwrap();
        assert!(!x.is_empty());
        assert!(x == y, "{f} differs");
    }
}

#[test]
fn cli_exit_codes() {
    let d = scratch("codes");
    // A fit on four points with loose tolerance and an impossible one.
    let base = ["scale", "--n-grid", "256,512,1024,2048", "--trials", "4"];
    let (ok, out) = qptest(&[&base[..], &["--tolerance", "1.0"]].concat(), &d);
    assert_eq!(ok, 0, "{out}");
    assert!(out.contains("PASS"));
    let (bad, out) = qptest(&[&base[..], &["--tolerance", "0"]].concat(), &d);
    assert_eq!(bad, 1, "{out}");
    assert!(out.contains("FAIL"));
    let (err, _) = qptest(&["scale", "--eps", "2"], &d);
    assert_eq!(err, 2);
}

#[test]
fn cli_gen_writes_instance_and_certificate() {
    let d = scratch("gen");
    let (code, _) = qptest(&["gen", "far-graph", "--n", "200", "--k", "2", "--seed", "1"], &d);
    assert_eq!(code, 0);
    let names: Vec<String> = std::fs::read_dir(&d)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    assert!(names.iter().any(|n| n.ends_with(".cert.json")), "{names:?}");
    let txt = names.iter().find(|n| n.ends_with(".txt")).unwrap();
    let g = qptest::graph::BoundedOutDigraph::from_text(&std::fs::read_to_string(d.join(txt)).unwrap()).unwrap();
    assert_eq!(g.n(), 200);
}

#[test]
fn library_scaling_matches_across_runs() {
    let cfg = ExperimentConfig {
        n_grid: vec![256, 512, 1024, 2048],
        trials: 5,
        seed: 9,
        ..Default::default()
    };
    let a = run_scaling(&cfg).unwrap();
    let b = run_scaling(&cfg).unwrap();
    assert_eq!(scaling_csv(&a.records).unwrap(), scaling_csv(&b.records).unwrap());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}
