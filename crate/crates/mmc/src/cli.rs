//! Command-line driver.
//!
//! Exit codes: `0` success, `1` runtime or I/O failure, `2` usage error.
//! Input models that cannot be loaded count as usage errors.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mmc_core::analysis::{
    displacement_field, hidden_profile, DEFAULT_PROFILE_SAMPLES, DEFAULT_SWEEP_LENGTH,
};
use mmc_core::bench::{
    BenchSetup, BenchmarkResult, Mode, DEFAULT_ITERATIONS, DEFAULT_OVERSHOOT_THRESHOLD,
    START_POSE_ITERATIONS,
};
use mmc_core::dynamics::{
    solve_inverse_dynamic, DynConfig, DEFAULT_VELOCITY_DAMPING, DEFAULT_VELOCITY_DECAY,
};
use mmc_core::mlp::{evaluate_mse, generate_norm_dataset, run_protocol, MlpModel, TrainConfig};
use mmc_core::mmc::{
    initial_state, solve_forward, solve_inverse, MmcConfig, Normalization, DEFAULT_DAMPING,
};
use mmc_core::Vec2;

use crate::{data_file, model_file, parallel, results, Error};

/// Forward solves settle on a slower mode than reaching movements; 400
/// iterations bring the end-effector within about 1e-10 of the segment sum.
pub const FORWARD_ITERATIONS: usize = 400;

#[derive(Debug, Parser)]
#[command(
    name = "mmc",
    version,
    about = "Mean-of-multiple-computations body model for a three-segment planar arm"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a normalization training set as CSV.
    GenData(GenDataArgs),
    /// Train a normalization network and write it as JSON.
    Train(TrainArgs),
    /// Report the MSE of a model on a dataset.
    Eval(EvalArgs),
    /// Inverse kinematics to a target, or forward kinematics of given angles.
    Solve(SolveArgs),
    /// Run the 420-movement reaching benchmark.
    Benchmark(BenchmarkArgs),
    /// Hidden-unit angle profiles and the displacement field of a model.
    Profile(ProfileArgs),
}

#[derive(Debug, Args)]
pub struct GenDataArgs {
    /// Number of samples.
    #[arg(long, default_value_t = 3600)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "data.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Hidden layer sizes, comma separated.
    #[arg(long, default_value = "16,16", value_parser = parse_hidden)]
    pub hidden: Hidden,
    #[arg(long, default_value_t = 400)]
    pub epochs: usize,
    #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
    pub batch: u64,
    #[arg(long, default_value_t = 0.001)]
    pub lr: f64,
    /// Drives data generation, split, initialization and shuffling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Generated samples.
    #[arg(long, default_value_t = 3600)]
    pub n: usize,
    /// Training fraction of the samples.
    #[arg(long, default_value_t = 0.8)]
    pub split: f64,
    #[arg(long, default_value = "model.json")]
    pub out: PathBuf,
    /// Loss history CSV [default: <out> with extension .loss.csv].
    #[arg(long)]
    pub loss_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Dataset CSV; generated from --n and --seed when absent.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = 3600)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct DynamicsArgs {
    /// Damping weight of the mean update.
    #[arg(long, default_value_t = DEFAULT_DAMPING)]
    pub d: f64,
    /// Velocity damping of the dynamic modes.
    #[arg(long, default_value_t = DEFAULT_VELOCITY_DAMPING)]
    pub d_vel: f64,
    /// Velocity decay of the dynamic mode (dynamic_no_decay forces 1).
    #[arg(long, default_value_t = DEFAULT_VELOCITY_DECAY)]
    pub decay: f64,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// classical, neural, dynamic or dynamic_no_decay.
    #[arg(long, default_value = "classical")]
    pub mode: Mode,
    /// Target end-effector position X,Y.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point, conflicts_with = "forward", required_unless_present = "forward")]
    pub target: Option<Vec2>,
    /// Segment angles a1,a2,a3 in radians; prints the settled end-effector.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angles)]
    pub forward: Option<[f64; 3]>,
    /// Starting segment angles in radians for inverse kinematics.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_angles, default_value = "0,0,0")]
    pub start: [f64; 3],
    /// Network iterations [default: 100 for --target, 400 for --forward].
    #[arg(long)]
    pub iters: Option<usize>,
    /// Normalization network (required for neural mode; used by dynamic modes when given).
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Directory for trace.csv and arm.svg.
    #[arg(long, default_value = "solve_out")]
    pub out: PathBuf,
    /// Iterations between arm snapshots in arm.svg.
    #[arg(long, default_value_t = 10)]
    pub snapshot_every: usize,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    /// Comma-separated modes, or `all`.
    #[arg(long, default_value = "classical", value_parser = parse_modes)]
    pub mode: Modes,
    /// Normalization network (required for neural mode; used by dynamic modes when given).
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    pub iters: usize,
    /// Worker threads [default: available cores].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,
    #[arg(long, default_value = "bench_out")]
    pub out: PathBuf,
    /// Rebound above the running minimum, relative to start distance, that counts as overshoot.
    #[arg(long, default_value_t = DEFAULT_OVERSHOOT_THRESHOLD)]
    pub threshold: f64,
    #[command(flatten)]
    pub dynamics: DynamicsArgs,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Hidden layer, 0 is the first.
    #[arg(long, default_value_t = 0)]
    pub layer: usize,
    /// Sweep angles over the full circle.
    #[arg(long, default_value_t = DEFAULT_PROFILE_SAMPLES)]
    pub samples: usize,
    /// Input length of the sweep.
    #[arg(long, default_value_t = DEFAULT_SWEEP_LENGTH)]
    pub length: f64,
    /// Also write the displacement field.
    #[arg(long)]
    pub field: bool,
    /// Field grid half-width.
    #[arg(long, default_value_t = 2.0)]
    pub extent: f64,
    /// Field grid points per axis.
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
    #[arg(long, default_value = "profile_out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hidden(pub Vec<usize>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modes(pub Vec<Mode>);

fn parse_hidden(s: &str) -> Result<Hidden, String> {
    let sizes = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if sizes.contains(&0) {
        return Err("hidden layer sizes must be ≥ 1".into());
    }
    Ok(Hidden(sizes))
}

fn parse_floats<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let arr: [f64; N] = v
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected {N} comma-separated numbers, got {}", v.len()))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err("values must be finite".into());
    }
    Ok(arr)
}

fn parse_point(s: &str) -> Result<Vec2, String> {
    parse_floats::<2>(s).map(|[x, y]| Vec2::new(x, y))
}

fn parse_angles(s: &str) -> Result<[f64; 3], String> {
    parse_floats::<3>(s)
}

fn parse_modes(s: &str) -> Result<Modes, String> {
    if s.trim() == "all" {
        return Ok(Modes(Mode::ALL.to_vec()));
    }
    let mut modes = Vec::new();
    for p in s.split(',') {
        let m: Mode = p.trim().parse().map_err(|_| {
            format!("unknown mode `{p}` (classical, neural, dynamic, dynamic_no_decay, all)")
        })?;
        if !modes.contains(&m) {
            modes.push(m);
        }
    }
    Ok(Modes(modes))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<mmc_core::Error> for Failure {
    fn from(e: mmc_core::Error) -> Self {
        match e {
            mmc_core::Error::InvalidConfig(_)
            | mmc_core::Error::MissingModel
            | mmc_core::Error::LayerOutOfRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Runtime(Error::Core(other)),
        }
    }
}

type CliResult<T = ()> = Result<T, Failure>;

pub fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()))
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let outcome = match cli.command {
        Command::GenData(a) => gen_data(a),
        Command::Train(a) => train(a),
        Command::Eval(a) => eval(a),
        Command::Solve(a) => solve(a),
        Command::Benchmark(a) => benchmark(a),
        Command::Profile(a) => profile(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn load_input_model(path: &Path) -> CliResult<MlpModel> {
    model_file::load_model(path).map_err(|e| Failure::Usage(e.to_string()))
}

fn gen_data(a: GenDataArgs) -> CliResult {
    if a.n == 0 {
        return Err(Failure::Usage("--n must be ≥ 1".into()));
    }
    let data = generate_norm_dataset(a.n, a.seed);
    data_file::write_dataset(&data, &a.out)?;
    println!("wrote {} samples to {}", data.len(), a.out.display());
    Ok(())
}

fn train(a: TrainArgs) -> CliResult {
    if !(a.split > 0.0 && a.split < 1.0) {
        return Err(Failure::Usage("--split must lie in (0, 1)".into()));
    }
    let cfg = TrainConfig {
        epochs: a.epochs,
        batch_size: a.batch as usize,
        learning_rate: a.lr,
        ..TrainConfig::default()
    };
    cfg.validate()?;
    let run = run_protocol(&a.hidden.0, a.n, a.split, a.seed, &cfg)?;
    model_file::save_model(&run.model, &a.out)?;
    let loss_out = a
        .loss_out
        .unwrap_or_else(|| a.out.with_extension("loss.csv"));
    data_file::write_loss_history(&run.loss_history, &loss_out)?;
    println!("train_mse {}", run.train_mse);
    println!("test_mse {}", run.test_mse);
    println!("wrote {} and {}", a.out.display(), loss_out.display());
    Ok(())
}

fn eval(a: EvalArgs) -> CliResult {
    let model = load_input_model(&a.model)?;
    let data = match &a.data {
        Some(p) => data_file::read_dataset(p)?,
        None => generate_norm_dataset(a.n, a.seed),
    };
    println!("mse {}", evaluate_mse(&model, &data)?);
    Ok(())
}

fn mmc_config<'m>(d: &DynamicsArgs, model: Option<&'m MlpModel>) -> MmcConfig<'m> {
    MmcConfig {
        damping: d.d,
        normalization: model.map_or(Normalization::Euclidean, Normalization::Neural),
        ..MmcConfig::default()
    }
}

fn dyn_config(d: &DynamicsArgs) -> DynConfig {
    DynConfig {
        velocity_damping: d.d_vel,
        decay: d.decay,
    }
}

fn solve(a: SolveArgs) -> CliResult {
    if a.mode == Mode::Neural && a.model.is_none() {
        return Err(Failure::Usage("neural mode needs --model".into()));
    }
    let model = a.model.as_deref().map(load_input_model).transpose()?;
    let setup = BenchSetup {
        mmc: mmc_config(&a.dynamics, model.as_ref()),
        dynamics: dyn_config(&a.dynamics),
        ..BenchSetup::default()
    };
    let (mmc, dynamics) = setup.configs(a.mode)?;

    if let Some(angles) = a.forward {
        let r = solve_forward(&mmc, angles, a.iters.unwrap_or(FORWARD_ITERATIONS))?;
        println!("{} {}", r.x, r.y);
        return Ok(());
    }
    let target = a.target.expect("clap requires --target or --forward");
    let iters = a.iters.unwrap_or(DEFAULT_ITERATIONS);
    let start = initial_state(&mmc, a.start);
    let trace = match dynamics {
        None => solve_inverse(&mmc, &start, target, iters)?,
        Some(dc) => solve_inverse_dynamic(&mmc, &dc, &start, target, iters)?,
    };
    results::write_trace(&trace, &a.out, a.snapshot_every)?;
    let tip = trace.final_state().end_effector();
    let norm = trace.normalized_distances();
    println!("end_effector {} {}", tip.x, tip.y);
    println!(
        "final_distance {}",
        trace.distances[trace.distances.len() - 1]
    );
    println!("final_norm_distance {}", norm[norm.len() - 1]);
    Ok(())
}

fn benchmark(a: BenchmarkArgs) -> CliResult {
    let modes = a.mode.0;
    if modes.contains(&Mode::Neural) && a.model.is_none() {
        return Err(Failure::Usage("neural mode needs --model".into()));
    }
    let model = a.model.as_deref().map(load_input_model).transpose()?;
    let setup = BenchSetup {
        mmc: mmc_config(&a.dynamics, model.as_ref()),
        dynamics: dyn_config(&a.dynamics),
        iterations: a.iters,
        start_iterations: START_POSE_ITERATIONS,
        overshoot_threshold: a.threshold,
    };
    for m in &modes {
        setup.configs(*m)?;
    }
    if a.iters == 0 {
        return Err(Failure::Usage("--iters must be ≥ 1".into()));
    }
    let jobs = a.jobs.map_or_else(parallel::default_jobs, |j| j as usize);

    let mut all: Vec<BenchmarkResult> = Vec::with_capacity(modes.len());
    for mode in &modes {
        let r = parallel::run_benchmark_parallel(&setup, *mode, jobs)?;
        results::write_results(&r, &a.out.join(mode.name()))?;
        all.push(r);
    }
    results::write_summary(&all, &a.out.join("summary.csv"))?;
    if all.len() > 1 {
        results::write_comparison(&all, &a.out)?;
    }

    println!("{}", results::SUMMARY_HEADER.join(","));
    for r in &all {
        println!("{}", results::summary_row(r).join(","));
    }
    println!("movements {}", all[0].movements.len());
    let peak = |m: Mode| all.iter().find(|r| r.mode == m).map(|r| r.peak_velocity);
    if let (Some(c), Some(d)) = (peak(Mode::Classical), peak(Mode::Dynamic)) {
        let rel = if d < c { "<" } else { ">=" };
        println!("peak velocity dynamic {d} {rel} classical {c}");
    }
    Ok(())
}

fn profile(a: ProfileArgs) -> CliResult {
    let model = load_input_model(&a.model)?;
    let p = hidden_profile(&model, a.layer, a.samples, a.length)?;
    results::write_profile(&p, &a.out)?;
    println!("units {}", p.unit_count());
    if a.field {
        let f = displacement_field(&model, a.extent, a.steps)?;
        results::write_field(&f, &a.out)?;
        println!("field_points {}", f.grid_points.len());
    }
    println!("wrote {}", a.out.display());
    Ok(())
}
