use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use qptest::harness::{
    generate, run_certification, run_lin2_game, run_scaling, write_scaling, ExperimentConfig,
    GenKind, GenRequest, InstanceKind, Problem, TesterKind, OUTPUT_DIR_ENV,
};

#[derive(Parser)]
#[command(name = "qptest", version, about = "Query-counted property testing experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run testers over an n grid and fit the query exponent.
    Scale(ConfigArgs),
    /// Run the dual-polynomial certification suite.
    Certify(ConfigArgs),
    /// Run the GF(2) yes/no distinguishing checks.
    Lin2Game(ConfigArgs),
    /// Write one generated instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    HFreeness,
    Collision,
}

#[derive(Clone, Copy, ValueEnum)]
enum TesterArg {
    Quantum,
    Classical,
}

#[derive(Clone, Copy, ValueEnum)]
enum InstanceArg {
    Far,
    Free,
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long, value_enum, default_value = "h-freeness")]
    problem: ProblemArg,
    #[arg(long, value_enum, default_value = "quantum")]
    tester: TesterArg,
    #[arg(long, value_enum, default_value = "far")]
    instances: InstanceArg,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    /// Exact rational such as 1/640; derived from k when absent.
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [1024usize, 2048, 4096, 8192, 16384])]
    n_grid: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 6, 8, 12, 16])]
    r_grid: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    d_out: usize,
    /// Grover constant, e.g. 3 or 5/2.
    #[arg(long, default_value = "3")]
    c_g: String,
    #[arg(long, default_value_t = 0.9)]
    p_succ: f64,
    #[arg(long, default_value_t = 32)]
    lin2_c: usize,
    #[arg(long, default_value_t = 0.6)]
    delta: f64,
    #[arg(long, default_value_t = 0.1)]
    alpha: f64,
    #[arg(long, default_value_t = 0.05)]
    tolerance: f64,
    #[arg(long, env = OUTPUT_DIR_ENV, default_value = "out")]
    output_dir: PathBuf,
}

impl ConfigArgs {
    fn into_config(self, problem: Option<Problem>) -> Result<ExperimentConfig, String> {
        let c_g: Ratio<u64> = self
            .c_g
            .parse()
            .map_err(|e| format!("bad --c-g {:?}: {e}", self.c_g))?;
        Ok(ExperimentConfig {
            problem: problem.unwrap_or(match self.problem {
                ProblemArg::HFreeness => Problem::HFreeness,
                ProblemArg::Collision => Problem::Collision,
            }),
            tester: match self.tester {
                TesterArg::Quantum => TesterKind::Quantum,
                TesterArg::Classical => TesterKind::Classical,
            },
            instances: match self.instances {
                InstanceArg::Far => InstanceKind::Far,
                InstanceArg::Free => InstanceKind::Free,
            },
            k: self.k,
            eps: self.eps,
            gamma: self.gamma,
            n_grid: self.n_grid,
            r_grid: self.r_grid,
            trials: self.trials,
            seed: self.seed,
            d_out: self.d_out,
            c_g,
            p_succ: self.p_succ,
            lin2_c: self.lin2_c,
            delta: self.delta,
            alpha: self.alpha,
            tolerance: self.tolerance,
            output_dir: Some(self.output_dir),
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKindArg {
    FarGraph,
    FreeGraph,
    CollisionFar,
    CollisionFree,
    Lin2Yes,
    Lin2No,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKindArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 2)]
    d_out: usize,
    /// Value range of sequences; 0 means n.
    #[arg(long, default_value_t = 0)]
    r: usize,
    #[arg(long, default_value_t = 32)]
    c: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, env = OUTPUT_DIR_ENV, default_value = "out")]
    output_dir: PathBuf,
}

fn write_json(dir: &Path, name: &str, value: &impl serde::Serialize) -> qptest::Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(path)
}

fn run(cmd: Cmd) -> Result<bool, String> {
    let err = |e: qptest::Error| e.to_string();
    match cmd {
        Cmd::Scale(args) => {
            let cfg = args.into_config(None)?;
            let res = run_scaling(&cfg).map_err(err)?;
            let dir = cfg.output_dir.clone().expect("set from flags");
            let (csv, json) = write_scaling(&res, &dir, "scaling").map_err(err)?;
            for p in &res.points {
                println!(
                    "n={:<7} mean={:>10.1} sd={:>9.1} reject={:.3}{}",
                    p.n,
                    p.mean_queries,
                    p.std_queries,
                    p.reject_rate,
                    p.error.as_ref().map(|e| format!("  error: {e}")).unwrap_or_default()
                );
            }
            if let Some(f) = &res.fit {
                println!(
                    "slope {:.4} (95% CI {:.4}..{:.4}, r2 {:.4}), target {:.4}",
                    f.slope, f.slope_ci.0, f.slope_ci.1, f.r2, res.target_exponent
                );
            }
            report(&res.assertions);
            println!("wrote {} and {}", csv.display(), json.display());
            Ok(res.all_passed)
        }
        Cmd::Certify(args) => {
            let cfg = args.into_config(Some(Problem::DualpolyCert))?;
            let rep = run_certification(&cfg).map_err(err)?;
            for c in &rep.checks {
                let tag = match (c.passed, c.required) {
                    (true, _) => "PASS",
                    (false, true) => "FAIL",
                    (false, false) => "INFO",
                };
                println!("{tag} {} {:?}", c.name, c.params);
            }
            let dir = cfg.output_dir.expect("set from flags");
            let path = write_json(&dir, "certification.json", &rep).map_err(err)?;
            println!("wrote {}", path.display());
            Ok(rep.all_passed)
        }
        Cmd::Lin2Game(args) => {
            let cfg = args.into_config(Some(Problem::Lin2Game))?;
            let rep = run_lin2_game(&cfg).map_err(err)?;
            report(&rep.assertions);
            let dir = cfg.output_dir.expect("set from flags");
            let path = write_json(&dir, "lin2_game.json", &rep).map_err(err)?;
            println!("wrote {}", path.display());
            Ok(rep.all_passed)
        }
        Cmd::Gen(args) => {
            let kind = match args.kind {
                GenKindArg::FarGraph => GenKind::FarGraph,
                GenKindArg::FreeGraph => GenKind::FreeGraph,
                GenKindArg::CollisionFar => GenKind::CollisionFar,
                GenKindArg::CollisionFree => GenKind::CollisionFree,
                GenKindArg::Lin2Yes => GenKind::Lin2Yes,
                GenKindArg::Lin2No => GenKind::Lin2No,
            };
            let req = GenRequest {
                kind,
                n: args.n,
                k: args.k,
                eps: args.eps,
                d_out: args.d_out,
                r: args.r,
                c: args.c,
                seed: args.seed,
            };
            let inst = generate(&req).map_err(err)?;
            fs::create_dir_all(&args.output_dir).map_err(|e| e.to_string())?;
            let stem = serde_json::to_value(kind)
                .ok()
                .and_then(|v| v.as_str().map(str::to_owned))
                .unwrap_or_else(|| "instance".into());
            let path = args.output_dir.join(format!("{stem}_n{}_s{}.txt", args.n, args.seed));
            fs::write(&path, &inst.text).map_err(|e| e.to_string())?;
            println!("wrote {}", path.display());
            if let Some(cert) = inst.certificate {
                let cpath = path.with_extension("cert.json");
                fs::write(&cpath, cert + "\n").map_err(|e| e.to_string())?;
                println!("wrote {}", cpath.display());
            }
            Ok(true)
        }
    }
}

fn report(assertions: &[qptest::harness::Assertion]) {
    for a in assertions {
        println!("{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
