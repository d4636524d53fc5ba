//! Command-line driver: dataset generation, embedding runs, verification,
//! calibration, and stage benchmarks.
//!
//! Exit codes: 0 success/pass, 1 verification or calibration failure,
//! 2 usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fastjl_core::calibrate::{calibrate, CalibrationConfig, DEFAULT_GRID};
use fastjl_core::io;
use fastjl_core::mat::{gaussian_matrix, near_duplicate_matrix, unit_sphere_matrix, DenseMatrix};
use fastjl_core::matmul::{flop_estimate, MultiplyPlan, DEFAULT_STRASSEN_CUTOFF};
use fastjl_core::rng::derive_seed;
use fastjl_core::transform::{
    plan_dimensions_capped, route_batch, sample_dense_baseline, BatchRoute, ComposedTransform,
    DimensionPlan, Embedding, FjltTransform, IdentityEmbedding,
};
use fastjl_core::verify::{clopper_pearson_upper, distortion_report};

#[derive(Parser)]
#[command(name = "fastjl", version, about = "Fast Johnson-Lindenstrauss embedding toolkit")]
struct Cli {
    /// Worker threads for library parallelism (defaults to FJL_THREADS, then
    /// all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic point-set file (FJLM, or CSV by extension).
    Gen(GenArgs),
    /// Embed every point of an input file.
    Embed(EmbedArgs),
    /// Measure the empirical failure rate of a transform family.
    Verify(VerifyArgs),
    /// Time the pipeline stages and emit plot-ready CSV.
    Bench(BenchArgs),
    /// Search the calibration grid for working constants.
    Calibrate(CalibrateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dist {
    Gaussian,
    Sphere,
    /// Near-duplicate columns; a worst-case-flavored test set.
    Hard,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum TransformKind {
    Composed,
    Dense,
    Fjlt,
    Identity,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[clap(rename_all = "snake_case")]
#[serde(rename_all = "snake_case")]
enum StrategyArg {
    Auto,
    PerPoint,
    BlockedFast,
    Naive,
}

#[derive(Args)]
struct GenArgs {
    /// Ambient dimension N.
    #[arg(long)]
    dim: usize,
    /// Number of points p (columns).
    #[arg(long)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Dist::Gaussian)]
    dist: Dist,
    /// Output path; `.csv` selects CSV, anything else FJLM.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    eta: f64,
    /// Calibration constant for the output dimension m.
    #[arg(long, default_value_t = 4.0)]
    c1: f64,
    /// Calibration constant for the intermediate dimension n.
    #[arg(long, default_value_t = 4.0)]
    c2: f64,
    /// FJLT sparsity constant.
    #[arg(long, default_value_t = 1.0)]
    c_q: f64,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// JSON metadata (plan, seed, per-stage timings).
    #[arg(long)]
    meta: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TransformKind::Composed)]
    transform: TransformKind,
    #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    plan: PlanArgs,
    /// Strassen cutoff override for the blocked strategy.
    #[arg(long, default_value_t = DEFAULT_STRASSEN_CUTOFF)]
    cutoff: usize,
    /// Also write the sampled transform as an FJL1 container (with a JSON
    /// plan sidecar at `<path>.plan.json`).
    #[arg(long)]
    save_transform: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = TransformKind::Composed)]
    transform: TransformKind,
    #[arg(long, default_value_t = 200)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    plan: PlanArgs,
    /// Force the output dimension instead of planning it (stress knob).
    #[arg(long)]
    force_m: Option<usize>,
    #[arg(long)]
    report_json: Option<PathBuf>,
    /// Per-trial CSV: trial,seed,max_distortion,mean_distortion,failed
    #[arg(long)]
    report_csv: Option<PathBuf>,
    /// Per-point ratio CSV from the first trial: point,ratio
    #[arg(long)]
    points_csv: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    plan: PlanArgs,
    /// Repetitions per measurement (median is reported).
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long, default_value_t = 1)]
    warmup: usize,
    #[arg(long, default_value_t = DEFAULT_STRASSEN_CUTOFF)]
    cutoff: usize,
    /// CSV output path (stdout when omitted):
    /// N,p,m,n,strategy,stage,wall_ns,flop_estimate
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    points: usize,
    #[arg(long, default_value_t = 0.3)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.05)]
    eta: f64,
    #[arg(long, default_value_t = 300)]
    max_trials: u64,
    #[arg(long, default_value_t = 25)]
    batch: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated grid override, e.g. "1,2,4".
    #[arg(long)]
    grid: Option<String>,
    /// Recommendation JSON output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("FJL_THREADS").ok().and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        if t > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
        }
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

/// 1 for verification/calibration failures, 2 for config/usage/data errors.
fn classify(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<fastjl_core::Error>() {
        Some(fastjl_core::Error::Calibration(_)) => 1,
        _ => 2,
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Embed(args) => cmd_embed(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Calibrate(args) => cmd_calibrate(args),
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().map(|e| e == "csv").unwrap_or(false)
}

fn read_points(path: &Path) -> Result<DenseMatrix> {
    let m = if is_csv(path) {
        io::read_matrix_csv(path)?
    } else {
        io::read_matrix(path)?.0
    };
    Ok(m)
}

fn write_points(path: &Path, m: &DenseMatrix) -> Result<()> {
    if is_csv(path) {
        io::write_matrix_csv(path, m)?;
    } else {
        io::write_matrix(path, m, 0)?;
    }
    Ok(())
}

fn cmd_gen(args: GenArgs) -> Result<ExitCode> {
    if args.dim < 1 || args.points < 1 {
        anyhow::bail!("--dim and --points must be >= 1");
    }
    let m = match args.dist {
        Dist::Gaussian => gaussian_matrix(args.dim, args.points, args.seed),
        Dist::Sphere => unit_sphere_matrix(args.dim, args.points, args.seed),
        Dist::Hard => near_duplicate_matrix(args.dim, args.points, 1e-3, args.seed),
    };
    write_points(&args.out, &m)
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!("wrote {} ({} x {})", args.out.display(), m.rows(), m.cols());
    Ok(ExitCode::SUCCESS)
}

fn make_plan(plan: &PlanArgs, p: u64, dim: usize) -> Result<DimensionPlan> {
    Ok(plan_dimensions_capped(p, plan.epsilon, plan.eta, dim, plan.c1, plan.c2)?)
}

#[derive(Serialize)]
struct StageTimings {
    m1_ns: u64,
    m2_ns: u64,
    m3_ns: u64,
    total_ns: u64,
}

#[derive(Serialize)]
struct EmbedMeta<'a> {
    input: String,
    output: String,
    transform: TransformKind,
    strategy_requested: StrategyArg,
    strategy_resolved: &'a str,
    seed: u64,
    plan: &'a DimensionPlan,
    rows_in: usize,
    rows_out: usize,
    cols: usize,
    timings: StageTimings,
}

fn cmd_embed(args: EmbedArgs) -> Result<ExitCode> {
    let points = read_points(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let plan = make_plan(&args.plan, points.cols() as u64, points.rows())?;
    let (embedded, resolved, timings) = match args.transform {
        TransformKind::Composed => {
            let t = ComposedTransform::sample(&plan, args.seed)?;
            let resolved = match args.strategy {
                StrategyArg::Auto => match route_batch(&plan) {
                    BatchRoute::PerPoint => StrategyArg::PerPoint,
                    BatchRoute::BlockedFast => StrategyArg::BlockedFast,
                },
                other => other,
            };
            let t0 = Instant::now();
            let m1 = t.stage_m1(&points)?;
            let t1 = Instant::now();
            let m2 = t.stage_m2(m1)?;
            let t2 = Instant::now();
            let m3 = match resolved {
                StrategyArg::PerPoint => t.stage_m3_per_column(&m2)?,
                StrategyArg::Naive => t.stage_m3(&m2, &MultiplyPlan::naive())?,
                StrategyArg::BlockedFast => t.stage_m3(
                    &m2,
                    &MultiplyPlan::blocked(plan.m).with_cutoff(args.cutoff),
                )?,
                StrategyArg::Auto => unreachable!("auto already resolved"),
            };
            let t3 = Instant::now();
            if let Some(path) = &args.save_transform {
                let record = io::TransformRecord::Composed {
                    n_input: points.rows(),
                    m: plan.m,
                    n: plan.n,
                    seed: args.seed,
                };
                io::write_transform(path, &record)?;
                io::write_plan_json(&path.with_extension("plan.json"), &plan)?;
            }
            let name = match resolved {
                StrategyArg::PerPoint => "per_point",
                StrategyArg::Naive => "naive",
                StrategyArg::BlockedFast => "blocked_fast",
                StrategyArg::Auto => unreachable!(),
            };
            (
                m3,
                name,
                StageTimings {
                    m1_ns: (t1 - t0).as_nanos() as u64,
                    m2_ns: (t2 - t1).as_nanos() as u64,
                    m3_ns: (t3 - t2).as_nanos() as u64,
                    total_ns: (t3 - t0).as_nanos() as u64,
                },
            )
        }
        TransformKind::Dense => {
            let g = sample_dense_baseline(plan.m, points.rows(), args.seed);
            let t0 = Instant::now();
            let out = g.embed_batch(&points)?;
            let dt = t0.elapsed().as_nanos() as u64;
            if let Some(path) = &args.save_transform {
                let record = io::TransformRecord::Dense {
                    n_input: points.rows(),
                    m: plan.m,
                    seed: args.seed,
                };
                io::write_transform(path, &record)?;
                io::write_plan_json(&path.with_extension("plan.json"), &plan)?;
            }
            (out, "naive", StageTimings { m1_ns: 0, m2_ns: 0, m3_ns: dt, total_ns: dt })
        }
        TransformKind::Fjlt => {
            let f = FjltTransform::sample(
                points.cols() as u64,
                plan.epsilon,
                points.rows(),
                plan.m,
                args.plan.c_q,
                args.seed,
            )?;
            let t0 = Instant::now();
            let out = f.embed_batch(&points)?;
            let dt = t0.elapsed().as_nanos() as u64;
            if let Some(path) = &args.save_transform {
                let record = io::TransformRecord::Fjlt {
                    n_input: points.rows(),
                    m: plan.m,
                    p_points: points.cols() as u64,
                    c_q: args.plan.c_q,
                    seed: args.seed,
                };
                io::write_transform(path, &record)?;
                io::write_plan_json(&path.with_extension("plan.json"), &plan)?;
            }
            (out, "per_point", StageTimings { m1_ns: 0, m2_ns: 0, m3_ns: dt, total_ns: dt })
        }
        TransformKind::Identity => {
            let out = points.clone();
            (out, "identity", StageTimings { m1_ns: 0, m2_ns: 0, m3_ns: 0, total_ns: 0 })
        }
    };
    write_points(&args.out, &embedded)
        .with_context(|| format!("writing {}", args.out.display()))?;
    if let Some(meta_path) = &args.meta {
        let meta = EmbedMeta {
            input: args.input.display().to_string(),
            output: args.out.display().to_string(),
            transform: args.transform,
            strategy_requested: args.strategy,
            strategy_resolved: resolved,
            seed: args.seed,
            plan: &plan,
            rows_in: points.rows(),
            rows_out: embedded.rows(),
            cols: embedded.cols(),
            timings,
        };
        std::fs::write(meta_path, serde_json::to_string_pretty(&meta)? + "\n")
            .with_context(|| format!("writing {}", meta_path.display()))?;
    }
    println!(
        "embedded {} points: {} -> {} dims ({resolved})",
        embedded.cols(),
        points.rows(),
        embedded.rows()
    );
    Ok(ExitCode::SUCCESS)
}

fn build_embedding(
    kind: TransformKind,
    plan: &DimensionPlan,
    ambient: usize,
    p: u64,
    c_q: f64,
    seed: u64,
) -> Result<Box<dyn Embedding>> {
    Ok(match kind {
        TransformKind::Composed => Box::new(ComposedTransform::sample(plan, seed)?),
        TransformKind::Dense => Box::new(sample_dense_baseline(plan.m, ambient, seed)),
        TransformKind::Fjlt => Box::new(FjltTransform::sample(
            p, plan.epsilon, ambient, plan.m, c_q, seed,
        )?),
        TransformKind::Identity => Box::new(IdentityEmbedding { dim: ambient }),
    })
}

/// The plan for a verify run. The identity transform needs no planning (it
/// is the trivial embedding with m = N), and `--force-m` deliberately
/// sidesteps the feasibility of the planned m to stress the failure path.
fn verify_plan(args: &VerifyArgs, p: u64, ambient: usize) -> Result<DimensionPlan> {
    if args.transform == TransformKind::Identity {
        let n_pad = ambient.max(1).next_power_of_two();
        return Ok(DimensionPlan {
            p,
            epsilon: args.plan.epsilon,
            eta: args.plan.eta,
            ambient_dim: ambient,
            c1: args.plan.c1,
            c2: args.plan.c2,
            m: ambient,
            n: n_pad,
            n_capped: false,
        });
    }
    if let Some(m) = args.force_m {
        let (_, n_raw) = fastjl_core::transform::formula_dims(
            p,
            args.plan.epsilon,
            args.plan.eta,
            ambient,
            args.plan.c1,
            args.plan.c2,
        );
        let n_pad = ambient.max(1).next_power_of_two() as u64;
        let n = n_raw.min(n_pad) as usize;
        if m < 1 || m > n {
            anyhow::bail!("--force-m must lie in [1, n={n}]");
        }
        return Ok(DimensionPlan {
            p,
            epsilon: args.plan.epsilon,
            eta: args.plan.eta,
            ambient_dim: ambient,
            c1: args.plan.c1,
            c2: args.plan.c2,
            m,
            n,
            n_capped: n_raw > n_pad,
        });
    }
    make_plan(&args.plan, p, ambient)
}

#[derive(Serialize)]
struct TrialRow {
    trial: u64,
    seed: u64,
    max_distortion: f64,
    mean_distortion: f64,
    failed: bool,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    input: String,
    transform: TransformKind,
    plan: &'a DimensionPlan,
    trials: u64,
    failures: u64,
    failure_rate: f64,
    cp95_upper: f64,
    pass: bool,
    per_trial: Vec<TrialRow>,
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode> {
    let points = read_points(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    if args.trials < 1 {
        anyhow::bail!("--trials must be >= 1");
    }
    let plan = verify_plan(&args, points.cols() as u64, points.rows())?;
    let mut rows = Vec::with_capacity(args.trials as usize);
    let mut failures = 0u64;
    let mut first_ratios: Option<Vec<f64>> = None;
    for t in 0..args.trials {
        let trial_seed = derive_seed(args.seed, t);
        let embedding = build_embedding(
            args.transform,
            &plan,
            points.rows(),
            points.cols() as u64,
            args.plan.c_q,
            trial_seed,
        )?;
        let rep = distortion_report(embedding.as_ref(), &points, plan.epsilon)?;
        if !rep.pass {
            failures += 1;
        }
        if first_ratios.is_none() {
            first_ratios = Some(rep.per_point_ratio.clone());
        }
        rows.push(TrialRow {
            trial: t,
            seed: trial_seed,
            max_distortion: rep.max_distortion,
            mean_distortion: rep.mean_distortion,
            failed: !rep.pass,
        });
    }
    let rate = failures as f64 / args.trials as f64;
    let cp_upper = clopper_pearson_upper(failures, args.trials, 0.95);
    let pass = cp_upper <= plan.eta;
    if let Some(path) = &args.report_csv {
        let mut csv = String::from("trial,seed,max_distortion,mean_distortion,failed\n");
        for r in &rows {
            csv.push_str(&format!(
                "{},{},{:?},{:?},{}\n",
                r.trial, r.seed, r.max_distortion, r.mean_distortion, r.failed as u8
            ));
        }
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.points_csv {
        let mut csv = String::from("point,ratio\n");
        for (i, r) in first_ratios.iter().flatten().enumerate() {
            csv.push_str(&format!("{i},{r:?}\n"));
        }
        std::fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.report_json {
        let report = VerifyReport {
            input: args.input.display().to_string(),
            transform: args.transform,
            plan: &plan,
            trials: args.trials,
            failures,
            failure_rate: rate,
            cp95_upper: cp_upper,
            pass,
            per_trial: rows,
        };
        std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    println!(
        "{} failures in {} trials (rate {rate:.4}, CP95 upper {cp_upper:.4}, eta {}): {}",
        failures,
        args.trials,
        plan.eta,
        if pass { "PASS" } else { "FAIL" }
    );
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn median_ns(samples: &mut [u64]) -> u64 {
    samples.sort_unstable();
    samples[samples.len() / 2]
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode> {
    if args.reps < 1 {
        anyhow::bail!("--reps must be >= 1");
    }
    let plan = make_plan(&args.plan, args.points as u64, args.dim)?;
    let points = gaussian_matrix(args.dim, args.points, args.seed);
    let transform = ComposedTransform::sample(&plan, args.seed)?;
    let n_pad = transform.padded_dim();
    let fwht_ops = fastjl_core::hadamard::fwht_op_count(
        fastjl_core::hadamard::HadamardDim::covering(args.dim),
        transform.rows(),
    )? * args.points as u64;

    let mut lines = vec!["N,p,m,n,strategy,stage,wall_ns,flop_estimate".to_string()];
    for strategy in ["per_point", "blocked_fast", "naive"] {
        let mult_plan = match strategy {
            "blocked_fast" => Some(MultiplyPlan::blocked(plan.m).with_cutoff(args.cutoff)),
            "naive" => Some(MultiplyPlan::naive()),
            _ => None,
        };
        let mut m1_t = Vec::new();
        let mut m2_t = Vec::new();
        let mut m3_t = Vec::new();
        for rep in 0..args.warmup + args.reps {
            let t0 = Instant::now();
            let m1 = transform.stage_m1(&points)?;
            let t1 = Instant::now();
            let m2 = transform.stage_m2(m1)?;
            let t2 = Instant::now();
            let _m3 = match &mult_plan {
                Some(p) => transform.stage_m3(&m2, p)?,
                None => transform.stage_m3_per_column(&m2)?,
            };
            let t3 = Instant::now();
            if rep >= args.warmup {
                m1_t.push((t1 - t0).as_nanos() as u64);
                m2_t.push((t2 - t1).as_nanos() as u64);
                m3_t.push((t3 - t2).as_nanos() as u64);
            }
        }
        let m3_flops = match &mult_plan {
            Some(p) => flop_estimate(plan.m, plan.n, args.points, p),
            None => flop_estimate(plan.m, plan.n, args.points, &MultiplyPlan::naive()),
        };
        let m1 = median_ns(&mut m1_t);
        let m2 = median_ns(&mut m2_t);
        let m3 = median_ns(&mut m3_t);
        let stage_rows = [
            ("m1", m1, (args.points * n_pad) as u64),
            ("m2", m2, fwht_ops),
            ("m3", m3, m3_flops),
            ("total", m1 + m2 + m3, (args.points * n_pad) as u64 + fwht_ops + m3_flops),
        ];
        for (stage, ns, flops) in stage_rows {
            lines.push(format!(
                "{},{},{},{},{strategy},{stage},{ns},{flops}",
                args.dim, args.points, plan.m, plan.n
            ));
        }
    }
    let csv = lines.join("\n") + "\n";
    match &args.out {
        Some(path) => std::fs::write(path, csv)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_calibrate(args: CalibrateArgs) -> Result<ExitCode> {
    let grid = match &args.grid {
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| anyhow::anyhow!("bad --grid: {e}"))?,
        None => DEFAULT_GRID.to_vec(),
    };
    let config = CalibrationConfig {
        p: args.points as u64,
        epsilon: args.epsilon,
        eta: args.eta,
        ambient_dim: args.dim,
        grid,
        max_trials: args.max_trials,
        batch: args.batch,
        confidence: 0.95,
    };
    let points = gaussian_matrix(args.dim, args.points, args.seed);
    let outcome = calibrate(&config, &points, args.seed).map_err(anyhow::Error::from)?;
    println!(
        "calibrated c1={}, c2={} (m={}, n={}): {}/{} failures, CP95 upper {:.4}",
        outcome.c1, outcome.c2, outcome.plan.m, outcome.plan.n, outcome.failures,
        outcome.trials, outcome.cp_upper
    );
    if let Some(path) = &args.out {
        std::fs::write(path, serde_json::to_string_pretty(&outcome)? + "\n")
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}
