//! Acceptance checks: each function evaluates one criterion at a pinned
//! threshold and reports pass or fail with the measured values.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mmc_core::analysis::{circular_gaps, hidden_profile, min_angle_separation, peak_angles};
use mmc_core::bench::{run_benchmark, BenchSetup, BenchmarkResult, Mode, Stats};
use mmc_core::dynamics::{DynConfig, DynState};
use mmc_core::mlp::{
    evaluate_mse, init_model, loss_and_gradient, run_protocol, Dataset, MlpModel, Sample,
    TrainConfig,
};
use mmc_core::mmc::{initial_state, solve_forward, MmcConfig};
use mmc_core::Vec2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SINGLE_16_MAX_MSE: f64 = 0.01;
pub const SINGLE_16_MAX_SECONDS: f64 = 120.0;
pub const TWO_LAYER_MAX_MSE: f64 = 0.002;
pub const GRADIENT_MODELS: usize = 100;
pub const GRADIENT_STEP: f64 = 1e-6;
pub const GRADIENT_MAX_RELATIVE: f64 = 1e-4;
/// Denominator floor of the relative gradient error.
pub const GRADIENT_ABS_FLOOR: f64 = 1e-5;
pub const FIXED_POINT_STATES: usize = 1000;
pub const FIXED_POINT_TOL: f64 = 1e-12;
pub const FORWARD_TRIPLES: usize = 100;
pub const FORWARD_ITERATIONS: usize = 100;
pub const FORWARD_TOL: f64 = 1e-6;
pub const BENCH_MAX_SECONDS: f64 = 30.0;
pub const MONOTONE_TOL: f64 = 1e-3;
pub const CLASSICAL_MAX_FINAL: f64 = 0.05;
pub const NEURAL_MAX_GAP: f64 = 0.05;
pub const DYNAMIC_MIN_PEAK_ITERATION: usize = 3;
pub const SEGMENT_MAX_ERROR: f64 = 0.05;
pub const POPULATION_MIN_RANGE: f64 = 0.1;
pub const POPULATION_MIN_SEPARATION_DEG: f64 = 1.0;

pub const SWEEP_SEEDS: [u64; 5] = [0, 1, 2, 3, 4];
pub const SWEEP_ARCHS: [&[usize]; 5] = [&[4], &[8], &[16], &[32], &[16, 16]];

#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(label: impl Into<String>, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            label: label.into(),
            passed,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!("[{status}] criterion {:<3} {}", self.label, self.detail)
    }
}

/// One architecture trained under the full protocol for every sweep seed.
#[derive(Debug, Clone)]
pub struct ArchRuns {
    pub hidden: Vec<usize>,
    pub test_mse: Vec<f64>,
    pub seconds: f64,
    /// Model trained with seed 0.
    pub seed0: MlpModel,
}

impl ArchRuns {
    pub fn stats(&self) -> Stats {
        Stats::of(&self.test_mse)
    }

    fn summary(&self) -> String {
        let s = self.stats();
        format!("{:?}: {:.5} ± {:.5}", self.hidden, s.mean, s.std)
    }
}

pub fn train_arch(hidden: &[usize]) -> ArchRuns {
    let t = Instant::now();
    let mut test_mse = Vec::new();
    let mut seed0 = None;
    for seed in SWEEP_SEEDS {
        let run = run_protocol(hidden, 3600, 0.8, seed, &TrainConfig::default()).expect("training");
        test_mse.push(run.test_mse);
        if seed == 0 {
            seed0 = Some(run.model);
        }
    }
    ArchRuns {
        hidden: hidden.to_vec(),
        test_mse,
        seconds: t.elapsed().as_secs_f64(),
        seed0: seed0.expect("seed 0 in sweep"),
    }
}

pub fn sweep() -> Vec<ArchRuns> {
    SWEEP_ARCHS.iter().map(|h| train_arch(h)).collect()
}

fn arch<'a>(runs: &'a [ArchRuns], hidden: &[usize]) -> &'a ArchRuns {
    runs.iter()
        .find(|r| r.hidden == hidden)
        .expect("architecture in sweep")
}

pub fn two_layer_model(runs: &[ArchRuns]) -> &MlpModel {
    &arch(runs, &[16, 16]).seed0
}

pub fn criterion_1(runs: &[ArchRuns]) -> Check {
    let r = arch(runs, &[16]);
    let mean = r.stats().mean;
    Check::new(
        "1",
        mean <= SINGLE_16_MAX_MSE && r.seconds < SINGLE_16_MAX_SECONDS,
        format!(
            "single 16: mean test MSE {mean:.5} (≤ {SINGLE_16_MAX_MSE}), 5 runs in {:.1} s (< {SINGLE_16_MAX_SECONDS} s)",
            r.seconds
        ),
    )
}

pub fn criterion_2(runs: &[ArchRuns]) -> Check {
    let m = |h: &[usize]| arch(runs, h).stats().mean;
    let two = m(&[16, 16]);
    let shape = m(&[16]) < m(&[8]) && m(&[8]) < m(&[4]) && two < m(&[16]);
    let table: Vec<String> = runs.iter().map(ArchRuns::summary).collect();
    Check::new(
        "2",
        two <= TWO_LAYER_MAX_MSE && shape,
        format!(
            "16,16 mean test MSE {two:.5} (≤ {TWO_LAYER_MAX_MSE}); ordering 16<8<4 and 16,16<16 {}; sweep {}",
            if shape { "holds" } else { "violated" },
            table.join(", ")
        ),
    )
}

fn relative_error(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(GRADIENT_ABS_FLOOR)
}

pub fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for k in 0..GRADIENT_MODELS {
        let model = init_model(&[3], 1000 + k as u64).expect("model");
        let n = rng.gen_range(1..=8);
        let batch: Vec<Sample> = (0..n)
            .map(|_| Sample {
                input: Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                target: Vec2::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            })
            .collect();
        let (_, grad) = loss_and_gradient(&model, &batch).expect("gradient");
        let data = Dataset::new(batch);
        let base = model.params();
        let loss_at = |p: &[f64]| {
            let mut m = model.clone();
            m.set_params(p).expect("params");
            evaluate_mse(&m, &data).expect("loss")
        };
        for i in 0..base.len() {
            let mut plus = base.clone();
            let mut minus = base.clone();
            plus[i] += GRADIENT_STEP;
            minus[i] -= GRADIENT_STEP;
            let numeric = (loss_at(&plus) - loss_at(&minus)) / (2.0 * GRADIENT_STEP);
            worst = worst.max(relative_error(grad[i], numeric));
        }
    }
    Check::new(
        "3",
        worst <= GRADIENT_MAX_RELATIVE,
        format!("{GRADIENT_MODELS} random 2→3→2 models: worst relative gradient error {worst:.2e} (≤ {GRADIENT_MAX_RELATIVE:e})"),
    )
}

fn random_angles(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [0; 3].map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

pub fn criterion_4() -> Check {
    let cfg = MmcConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for _ in 0..FIXED_POINT_STATES {
        let mut s = initial_state(&cfg, random_angles(&mut rng));
        let tip = s.end_effector();
        s.clamp_effector(tip);
        let before = s;
        s.iterate(&cfg);
        let pairs = before
            .segments
            .iter()
            .zip(&s.segments)
            .chain(before.diagonals.iter().zip(&s.diagonals))
            .chain([(&before.effector, &s.effector)]);
        for (a, b) in pairs {
            worst = worst.max((a.x - b.x).abs()).max((a.y - b.y).abs());
        }
    }
    Check::new(
        "4",
        worst <= FIXED_POINT_TOL,
        format!("{FIXED_POINT_STATES} consistent states: worst component change {worst:.2e} (≤ {FIXED_POINT_TOL:e})"),
    )
}

pub fn criterion_5() -> Check {
    let cfg = MmcConfig::default();
    let mut s = initial_state(&cfg, [0.0; 3]);
    s.clamp_effector(Vec2::new(0.0, 3.0));
    let mut probe = s;
    probe.linear_step(&cfg);
    let proposal = probe.proposals[0];
    let exact = proposal == Vec2::new(0.7, 0.3);

    let mut d = DynState::at_rest(s);
    d.dynamic_iterate(&cfg, &DynConfig::default());
    let v = d.velocities[0];
    let v_ok = (v.x + 0.06).abs() <= 1e-15 && (v.y - 0.06).abs() <= 1e-15;
    Check::new(
        "5",
        exact && v_ok,
        format!(
            "first L1 proposal ({}, {}) (exactly (0.7, 0.3)), first velocity ({}, {}) ((−0.06, 0.06) within 1e-15)",
            proposal.x, proposal.y, v.x, v.y
        ),
    )
}

pub fn criterion_6() -> Check {
    let cfg = MmcConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for _ in 0..FORWARD_TRIPLES {
        let a = random_angles(&mut rng);
        let r = solve_forward(&cfg, a, FORWARD_ITERATIONS).expect("forward");
        let sum = a
            .iter()
            .fold(Vec2::ZERO, |acc, t| acc + Vec2::from_angle(*t, 1.0));
        worst = worst.max(r.distance(sum));
    }
    Check::new(
        "6",
        worst <= FORWARD_TOL,
        format!("{FORWARD_TRIPLES} random triples, {FORWARD_ITERATIONS} iterations: worst |R − ΣLi| {worst:.2e} (≤ {FORWARD_TOL:e})"),
    )
}

/// Benchmark runs shared by criteria 7 to 10.
#[derive(Debug, Clone)]
pub struct BenchRuns {
    pub classical: BenchmarkResult,
    pub classical_seconds: f64,
    pub neural: BenchmarkResult,
    pub dynamic: BenchmarkResult,
    pub dynamic_no_decay: BenchmarkResult,
}

pub fn bench_runs(model: &MlpModel) -> BenchRuns {
    let setup = BenchSetup::with_model(model);
    let t = Instant::now();
    let classical = run_benchmark(&setup, Mode::Classical).expect("classical");
    let classical_seconds = t.elapsed().as_secs_f64();
    BenchRuns {
        classical,
        classical_seconds,
        neural: run_benchmark(&setup, Mode::Neural).expect("neural"),
        dynamic: run_benchmark(&setup, Mode::Dynamic).expect("dynamic"),
        dynamic_no_decay: run_benchmark(&setup, Mode::DynamicNoDecay).expect("dynamic_no_decay"),
    }
}

fn final_mean(r: &BenchmarkResult) -> f64 {
    r.mean_norm_distance[r.mean_norm_distance.len() - 1]
}

pub fn criterion_7(b: &BenchRuns) -> Check {
    let c = &b.classical;
    let split = c
        .mean_norm_distance
        .windows(2)
        .skip(1)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let ok = c.movements.len() == 420
        && b.classical_seconds < BENCH_MAX_SECONDS
        && c.mean_norm_distance[0] == 1.0
        && split <= MONOTONE_TOL
        && final_mean(c) <= CLASSICAL_MAX_FINAL;
    Check::new(
        "7",
        ok,
        format!(
            "{} movements in {:.2} s (< {BENCH_MAX_SECONDS} s); mean at 0 = {}; largest rise after 1 = {split:.2e} (≤ {MONOTONE_TOL:e}); mean at {} = {:.4} (≤ {CLASSICAL_MAX_FINAL})",
            c.movements.len(),
            b.classical_seconds,
            c.mean_norm_distance[0],
            c.iterations,
            final_mean(c)
        ),
    )
}

pub fn criterion_8(b: &BenchRuns) -> Check {
    let gap = (final_mean(&b.neural) - final_mean(&b.classical)).abs();
    Check::new(
        "8",
        gap <= NEURAL_MAX_GAP,
        format!(
            "mean at 100: neural {:.4}, classical {:.4}, gap {gap:.4} (≤ {NEURAL_MAX_GAP})",
            final_mean(&b.neural),
            final_mean(&b.classical)
        ),
    )
}

pub fn criterion_9(b: &BenchRuns) -> [Check; 4] {
    let (c, d, n) = (&b.classical, &b.dynamic, &b.dynamic_no_decay);
    [
        Check::new(
            "9a",
            d.peak_velocity < c.peak_velocity,
            format!(
                "peak mean velocity dynamic {:.4} < classical {:.4}",
                d.peak_velocity, c.peak_velocity
            ),
        ),
        Check::new(
            "9b",
            c.peak_velocity_iteration == 1
                && d.peak_velocity_iteration >= DYNAMIC_MIN_PEAK_ITERATION,
            format!(
                "peak iteration classical {} (= 1), dynamic {} (≥ {DYNAMIC_MIN_PEAK_ITERATION})",
                c.peak_velocity_iteration, d.peak_velocity_iteration
            ),
        ),
        Check::new(
            "9c",
            d.overshoot_count < n.overshoot_count,
            format!(
                "overshoots decay 0.92: {} < decay 1.0: {}",
                d.overshoot_count, n.overshoot_count
            ),
        ),
        Check::new(
            "9d",
            final_mean(d) <= final_mean(n),
            format!(
                "mean final distance decay 0.92: {:.4} ≤ decay 1.0: {:.4}",
                final_mean(d),
                final_mean(n)
            ),
        ),
    ]
}

pub fn criterion_10(b: &BenchRuns) -> Check {
    let e = b.dynamic.max_segment_error;
    Check::new(
        "10",
        e <= SEGMENT_MAX_ERROR,
        format!(
            "dynamic mode max |length(Li) − 1| {e:.4} (≤ {SEGMENT_MAX_ERROR}); decay 1.0 run {:.4}",
            b.dynamic_no_decay.max_segment_error
        ),
    )
}

pub fn criterion_11(runs: &[ArchRuns]) -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for h in [4usize, 8] {
        let p = hidden_profile(&arch(runs, &[h]).seed0, 0, 360, 1.0).expect("profile");
        let min_range = p.ranges().into_iter().fold(f64::INFINITY, f64::min);
        let peaks = peak_angles(&p);
        let sep = min_angle_separation(&peaks).to_degrees();
        let gap = circular_gaps(&peaks)
            .into_iter()
            .fold(0.0, f64::max)
            .to_degrees();
        // peaks sit on the 1° sweep grid, so distinct peaks are ≥ 1° apart
        ok &= min_range > POPULATION_MIN_RANGE
            && sep >= POPULATION_MIN_SEPARATION_DEG - 1e-9
            && gap < 180.0;
        parts.push(format!(
            "{h} units: min range {min_range:.3} (> {POPULATION_MIN_RANGE}), min peak separation {sep:.0}° (≥ {POPULATION_MIN_SEPARATION_DEG}°), max gap {gap:.0}° (< 180°)"
        ));
    }
    Check::new("11", ok, format!("seed-0 models: {}", parts.join("; ")))
}

fn files_under(root: &Path) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = walkdir::WalkDir::new(root)
        .into_iter()
        .map(|e| e.expect("walk output dir"))
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            e.path()
                .strip_prefix(root)
                .expect("under root")
                .to_path_buf()
        })
        .collect();
    out.sort();
    out
}

/// Seeded CLI commands run into each of `dirs`; every written file must match.
pub fn criterion_12(dirs: [&Path; 2]) -> Check {
    let mut exit_ok = true;
    for dir in dirs {
        let p = |f: &str| dir.join(f).to_string_lossy().into_owned();
        let commands: [Vec<String>; 5] = [
            vec![
                "gen-data".into(),
                "--n".into(),
                "500".into(),
                "--seed".into(),
                "9".into(),
                "--out".into(),
                p("data.csv"),
            ],
            vec![
                "train".into(),
                "--hidden".into(),
                "8".into(),
                "--epochs".into(),
                "30".into(),
                "--n".into(),
                "800".into(),
                "--seed".into(),
                "9".into(),
                "--out".into(),
                p("model.json"),
            ],
            vec![
                "solve".into(),
                "--mode".into(),
                "dynamic".into(),
                "--model".into(),
                p("model.json"),
                "--target".into(),
                "-1,2".into(),
                "--out".into(),
                p("solve"),
            ],
            vec![
                "benchmark".into(),
                "--mode".into(),
                "all".into(),
                "--model".into(),
                p("model.json"),
                "--jobs".into(),
                "2".into(),
                "--out".into(),
                p("bench"),
            ],
            vec![
                "profile".into(),
                "--model".into(),
                p("model.json"),
                "--field".into(),
                "--out".into(),
                p("profile"),
            ],
        ];
        for c in commands {
            let args = std::iter::once("mmc".to_string()).chain(c);
            exit_ok &= mmc::cli::run(args) == 0;
        }
    }
    let (a, b) = (files_under(dirs[0]), files_under(dirs[1]));
    let csv_count = a
        .iter()
        .filter(|f| f.extension().is_some_and(|e| e == "csv"))
        .count();
    let differing: Vec<String> = a
        .iter()
        .filter(|f| fs::read(dirs[0].join(f)).ok() != fs::read(dirs[1].join(f)).ok())
        .map(|f| f.display().to_string())
        .collect();
    Check::new(
        "12",
        exit_ok && a == b && differing.is_empty() && csv_count > 0,
        format!(
            "5 seeded commands twice: {} files ({csv_count} CSV), {} differing{}",
            a.len(),
            differing.len(),
            if differing.is_empty() {
                String::new()
            } else {
                format!(": {}", differing.join(", "))
            }
        ),
    )
}
