//! Reaching benchmark: 21 targets on three half-circles, every point used as
//! start and as target once against all others, 420 movements in total.
//!
//! Start postures are obtained by relaxing the classical network from the
//! resting posture onto the start point. Each movement then clamps the
//! end-effector to the target and records the distance of the arm tip to the
//! target at every iteration.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::dynamics::{solve_inverse_dynamic, DynConfig};
use crate::mmc::{
    initial_state, solve_inverse, MmcConfig, MmcState, MovementTrace, Normalization, REST_ANGLES,
};
use crate::{Error, Result, Vec2};

pub const GRID_RADII: [f64; 3] = [1.0, 2.0, 3.0];
pub const GRID_ANGLES_DEG: [f64; 7] = [0.0, 30.0, 60.0, 90.0, 120.0, 150.0, 180.0];
pub const DEFAULT_ITERATIONS: usize = 100;
pub const START_POSE_ITERATIONS: usize = 300;
pub const DEFAULT_OVERSHOOT_THRESHOLD: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct TargetGrid {
    pub points: Vec<Vec2>,
}

/// The 21 benchmark points, radius-major then angle-minor, upper half-plane.
pub fn target_grid() -> TargetGrid {
    let mut points = Vec::with_capacity(21);
    for r in GRID_RADII {
        for deg in GRID_ANGLES_DEG {
            let p = Vec2::from_angle(deg.to_radians(), r);
            // snap sin(π) and cos(π/2) round-off so the grid sits exactly on the axes
            let snap = |c: f64| if c.abs() < 1e-12 { 0.0 } else { c };
            points.push(Vec2::new(snap(p.x), snap(p.y)));
        }
    }
    TargetGrid { points }
}

/// Converged posture at `point`: classical inverse kinematics from
/// [`REST_ANGLES`] for `iterations` steps, clamps released.
pub fn start_pose_for(point: Vec2, cfg: &MmcConfig, iterations: usize) -> Result<MmcState> {
    let classical = MmcConfig {
        normalization: Normalization::Euclidean,
        ..*cfg
    };
    let rest = initial_state(&classical, REST_ANGLES);
    let trace = solve_inverse(&classical, &rest, point, iterations)?;
    let mut state = *trace.final_state();
    state.release();
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Euclidean normalization, kinematic update.
    Classical,
    /// Neural normalization, kinematic update.
    Neural,
    /// Velocity extension with decay; neural normalization when a model is given.
    Dynamic,
    /// Velocity extension with decay forced to 1.
    DynamicNoDecay,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::Classical,
        Mode::Neural,
        Mode::Dynamic,
        Mode::DynamicNoDecay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Classical => "classical",
            Mode::Neural => "neural",
            Mode::Dynamic => "dynamic",
            Mode::DynamicNoDecay => "dynamic_no_decay",
        }
    }

    pub fn is_dynamic(self) -> bool {
        matches!(self, Mode::Dynamic | Mode::DynamicNoDecay)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or(Error::InvalidConfig("unknown mode"))
    }
}

/// Shared configuration for benchmark runs.
#[derive(Debug, Clone, Copy)]
pub struct BenchSetup<'m> {
    /// Damping, segment lengths and the normalization used by neural and
    /// dynamic modes.
    pub mmc: MmcConfig<'m>,
    pub dynamics: DynConfig,
    pub iterations: usize,
    pub start_iterations: usize,
    pub overshoot_threshold: f64,
}

impl Default for BenchSetup<'_> {
    fn default() -> Self {
        BenchSetup {
            mmc: MmcConfig::default(),
            dynamics: DynConfig::default(),
            iterations: DEFAULT_ITERATIONS,
            start_iterations: START_POSE_ITERATIONS,
            overshoot_threshold: DEFAULT_OVERSHOOT_THRESHOLD,
        }
    }
}

impl<'m> BenchSetup<'m> {
    pub fn with_model(model: &'m crate::mlp::MlpModel) -> Self {
        BenchSetup {
            mmc: MmcConfig::neural(model),
            ..BenchSetup::default()
        }
    }

    /// Network configuration that `mode` runs with.
    pub fn configs(&self, mode: Mode) -> Result<(MmcConfig<'m>, Option<DynConfig>)> {
        let classical = MmcConfig {
            normalization: Normalization::Euclidean,
            ..self.mmc
        };
        let out = match mode {
            Mode::Classical => (classical, None),
            Mode::Neural => {
                if !self.mmc.normalization.is_neural() {
                    return Err(Error::MissingModel);
                }
                (self.mmc, None)
            }
            Mode::Dynamic => (self.mmc, Some(self.dynamics)),
            Mode::DynamicNoDecay => (self.mmc, Some(self.dynamics.without_decay())),
        };
        out.0.validate()?;
        if let Some(d) = &out.1 {
            d.validate()?;
        }
        Ok(out)
    }
}

/// One reaching movement from `start` to `target` in the given mode.
pub fn run_movement(
    setup: &BenchSetup,
    mode: Mode,
    start: &MmcState,
    target: Vec2,
) -> Result<MovementTrace> {
    if setup.iterations == 0 {
        return Err(Error::InvalidConfig("iterations must be ≥ 1"));
    }
    match setup.configs(mode)? {
        (mmc, None) => solve_inverse(&mmc, start, target, setup.iterations),
        (mmc, Some(dynamics)) => {
            solve_inverse_dynamic(&mmc, &dynamics, start, target, setup.iterations)
        }
    }
}

/// `v[k−1] = (d[k−1] − d[k]) / start_distance` for `k ≥ 1`.
pub fn velocity_profile(distances: &[f64], start_distance: f64) -> Vec<f64> {
    distances
        .windows(2)
        .map(|w| (w[0] - w[1]) / start_distance)
        .collect()
}

/// True once the running minimum has dropped below half the start distance
/// and the distance later climbs more than `threshold · start_distance` above
/// that running minimum.
pub fn detect_overshoot(distances: &[f64], start_distance: f64, threshold: f64) -> bool {
    let mut running_min = f64::INFINITY;
    let mut armed = false;
    for &d in distances {
        if armed && d - running_min > threshold * start_distance {
            return true;
        }
        if d < running_min {
            running_min = d;
        }
        if running_min < 0.5 * start_distance {
            armed = true;
        }
    }
    false
}

/// Reduced per-movement record kept by the benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct MovementRecord {
    pub id: usize,
    /// Nominal grid start point.
    pub start_point: Vec2,
    pub target: Vec2,
    pub distances: Vec<f64>,
    pub start_distance: f64,
    pub overshoot: bool,
    /// Largest segment length error over all iterations.
    pub max_segment_error: f64,
    /// Tip displacement per iteration, `0` at iteration 0.
    pub path_speed: Vec<f64>,
}

impl MovementRecord {
    pub fn from_trace(
        id: usize,
        start_point: Vec2,
        trace: &MovementTrace,
        cfg: &MmcConfig,
        overshoot_threshold: f64,
    ) -> Self {
        let mut path_speed = Vec::with_capacity(trace.states.len());
        path_speed.push(0.0);
        path_speed.extend(
            trace
                .states
                .windows(2)
                .map(|w| w[1].end_effector().distance(w[0].end_effector())),
        );
        MovementRecord {
            id,
            start_point,
            target: trace.target,
            distances: trace.distances.clone(),
            start_distance: trace.start_distance,
            overshoot: detect_overshoot(
                &trace.distances,
                trace.start_distance,
                overshoot_threshold,
            ),
            max_segment_error: trace
                .states
                .iter()
                .map(|s| s.segment_length_error(cfg))
                .fold(0.0, f64::max),
            path_speed,
        }
    }

    pub fn normalized_distances(&self) -> Vec<f64> {
        self.distances
            .iter()
            .map(|d| d / self.start_distance)
            .collect()
    }

    /// Velocity per iteration with a leading `0` for iteration 0.
    pub fn velocities(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.distances.len());
        v.push(0.0);
        v.extend(velocity_profile(&self.distances, self.start_distance));
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stats {
    pub mean: f64,
    /// Sample standard deviation (n − 1).
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl Stats {
    pub fn of(values: &[f64]) -> Stats {
        if values.is_empty() {
            return Stats::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            libm::sqrt(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0))
        } else {
            0.0
        };
        Stats {
            mean,
            std,
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkResult {
    pub mode: Mode,
    pub iterations: usize,
    pub movements: Vec<MovementRecord>,
    /// Curves indexed by iteration, `iterations + 1` long (empty without movements).
    pub mean_norm_distance: Vec<f64>,
    pub std_norm_distance: Vec<f64>,
    pub mean_velocity: Vec<f64>,
    pub mean_path_speed: Vec<f64>,
    pub peak_velocity: f64,
    pub peak_velocity_iteration: usize,
    pub overshoot_count: usize,
    /// Normalized distance at the last iteration.
    pub final_norm_distance: Stats,
    pub max_segment_error: f64,
}

impl BenchmarkResult {
    /// Reduces movement records in their given order.
    pub fn aggregate(mode: Mode, iterations: usize, movements: Vec<MovementRecord>) -> Self {
        let n_points = if movements.is_empty() {
            0
        } else {
            iterations + 1
        };
        let norm: Vec<Vec<f64>> = movements.iter().map(|m| m.normalized_distances()).collect();
        let vel: Vec<Vec<f64>> = movements.iter().map(|m| m.velocities()).collect();
        let column =
            |rows: &[Vec<f64>], k: usize| -> Vec<f64> { rows.iter().map(|r| r[k]).collect() };

        let mut mean_norm_distance = Vec::with_capacity(n_points);
        let mut std_norm_distance = Vec::with_capacity(n_points);
        let mut mean_velocity = Vec::with_capacity(n_points);
        let mut mean_path_speed = Vec::with_capacity(n_points);
        let speeds: Vec<Vec<f64>> = movements.iter().map(|m| m.path_speed.clone()).collect();
        for k in 0..n_points {
            let s = Stats::of(&column(&norm, k));
            mean_norm_distance.push(s.mean);
            std_norm_distance.push(s.std);
            mean_velocity.push(Stats::of(&column(&vel, k)).mean);
            mean_path_speed.push(Stats::of(&column(&speeds, k)).mean);
        }

        let (peak_velocity_iteration, peak_velocity) =
            mean_velocity.iter().copied().enumerate().skip(1).fold(
                (0, f64::NEG_INFINITY),
                |best, (k, v)| if v > best.1 { (k, v) } else { best },
            );
        let finals: Vec<f64> = norm.iter().map(|r| r[r.len() - 1]).collect();

        BenchmarkResult {
            mode,
            iterations,
            overshoot_count: movements.iter().filter(|m| m.overshoot).count(),
            max_segment_error: movements
                .iter()
                .map(|m| m.max_segment_error)
                .fold(0.0, f64::max),
            final_norm_distance: Stats::of(&finals),
            movements,
            mean_norm_distance,
            std_norm_distance,
            mean_velocity,
            mean_path_speed,
            peak_velocity: if peak_velocity.is_finite() {
                peak_velocity
            } else {
                0.0
            },
            peak_velocity_iteration,
        }
    }
}

/// Every ordered `(start, target)` index pair with `start ≠ target`.
pub fn movement_pairs(n_points: usize) -> Vec<(usize, usize)> {
    (0..n_points)
        .flat_map(|i| (0..n_points).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect()
}

pub fn start_poses(setup: &BenchSetup, grid: &TargetGrid) -> Result<Vec<MmcState>> {
    grid.points
        .iter()
        .map(|p| start_pose_for(*p, &setup.mmc, setup.start_iterations))
        .collect()
}

/// Runs and reduces movement `id` between grid points `pair`.
pub fn run_pair(
    setup: &BenchSetup,
    mode: Mode,
    grid: &TargetGrid,
    starts: &[MmcState],
    id: usize,
    (i, j): (usize, usize),
) -> Result<MovementRecord> {
    let trace = run_movement(setup, mode, &starts[i], grid.points[j])?;
    let (mmc, _) = setup.configs(mode)?;
    Ok(MovementRecord::from_trace(
        id,
        grid.points[i],
        &trace,
        &mmc,
        setup.overshoot_threshold,
    ))
}

/// All 420 movements, sequentially.
pub fn run_benchmark(setup: &BenchSetup, mode: Mode) -> Result<BenchmarkResult> {
    setup.configs(mode)?;
    let grid = target_grid();
    let starts = start_poses(setup, &grid)?;
    let records = movement_pairs(grid.points.len())
        .into_iter()
        .enumerate()
        .map(|(id, pair)| run_pair(setup, mode, &grid, &starts, id, pair))
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchmarkResult::aggregate(mode, setup.iterations, records))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn grid_layout() {
        let g = target_grid();
        assert_eq!(g.points.len(), 21);
        assert!(g.points.contains(&Vec2::new(3.0, 0.0)));
        assert!(g.points.contains(&Vec2::new(-3.0, 0.0)));
        assert!(g.points.contains(&Vec2::new(0.0, 2.0)));
        for (k, r) in GRID_RADII.iter().enumerate() {
            let ring = &g.points[k * 7..(k + 1) * 7];
            assert!(ring
                .iter()
                .all(|p| (p.length() - r).abs() < 1e-12 && p.y >= 0.0));
        }
    }

    #[test]
    fn start_poses_reach_their_points() {
        let cfg = MmcConfig::default();
        let s = start_pose_for(Vec2::new(3.0, 0.0), &cfg, START_POSE_ITERATIONS).unwrap();
        assert!(s.end_effector().distance(Vec2::new(3.0, 0.0)) <= 0.05);
        assert!(s.segments.iter().all(|l| l.x > 0.9));
        assert!(s.clamps.is_empty());
        let s = start_pose_for(Vec2::new(0.0, 3.0), &cfg, START_POSE_ITERATIONS).unwrap();
        assert!(s.segments.iter().all(|l| l.y > 0.9));
        for p in target_grid().points {
            let s = start_pose_for(p, &cfg, START_POSE_ITERATIONS).unwrap();
            assert!((s.effector - s.end_effector()).length() <= 0.05);
        }
    }

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
        }
        assert!("fast".parse::<Mode>().is_err());
    }

    #[test]
    fn neural_mode_needs_model() {
        let setup = BenchSetup::default();
        assert_eq!(
            setup.configs(Mode::Neural).unwrap_err(),
            Error::MissingModel
        );
        assert!(setup.configs(Mode::Dynamic).is_ok());
    }

    #[test]
    fn velocity_profile_examples() {
        assert_eq!(velocity_profile(&[1.0, 0.5, 0.25], 1.0), vec![0.5, 0.25]);
        assert_eq!(velocity_profile(&[0.7; 5], 0.7), vec![0.0; 4]);
    }

    #[test]
    fn overshoot_examples() {
        assert!(!detect_overshoot(&[1.0, 0.8, 0.4, 0.1, 0.05], 1.0, 0.01));
        assert!(detect_overshoot(&[1.0, 0.5, 0.1, 0.2], 1.0, 0.01));
        // rebound before reaching half the start distance does not count
        assert!(!detect_overshoot(&[1.0, 0.7, 0.9, 0.3], 1.0, 0.01));
        // rebound below the threshold does not count
        assert!(!detect_overshoot(&[2.0, 0.2, 0.21], 2.0, 0.01));
    }

    #[test]
    fn movement_pairs_cover_420() {
        let p = movement_pairs(21);
        assert_eq!(p.len(), 420);
        assert!(p.iter().all(|(i, j)| i != j));
    }

    #[test]
    fn empty_aggregate() {
        let r = BenchmarkResult::aggregate(Mode::Classical, 100, Vec::new());
        assert!(r.mean_norm_distance.is_empty());
        assert_eq!(r.overshoot_count, 0);
    }

    #[test]
    fn sample_std() {
        let s = Stats::of(&[1.0, 3.0]);
        assert_eq!(s.mean, 2.0);
        assert!((s.std - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(Stats::of(&[4.0]).std, 0.0);
    }

    #[test]
    fn single_movement_record() {
        let setup = BenchSetup::default();
        let grid = target_grid();
        let start = start_pose_for(grid.points[0], &setup.mmc, 300).unwrap();
        let trace = run_movement(&setup, Mode::Classical, &start, grid.points[10]).unwrap();
        let rec = MovementRecord::from_trace(0, grid.points[0], &trace, &setup.mmc, 0.01);
        assert_eq!(rec.normalized_distances()[0], 1.0);
        let v = rec.velocities();
        let total: f64 = v.iter().sum();
        let last = *rec.normalized_distances().last().unwrap();
        assert!((total - (1.0 - last)).abs() < 1e-9);
        assert_eq!(rec.path_speed.len(), 101);
    }
}
