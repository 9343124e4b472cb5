//! The MMC recurrent network for a three-segment planar arm.
//!
//! Variables are the segments `L1..L3`, the diagonals `D1 = L1 + L2`,
//! `D2 = L2 + L3` and the end-effector `R = L1 + L2 + L3`. Each one is computed
//! by two closed chains and updated as their damped mean
//!
//! ```text
//! V(t+1) = (c₁(t) + c₂(t) + (d − 2)·V(t)) / d
//! ```
//!
//! The x and y coordinates form two independent scalar networks; they are
//! evaluated together through [`Vec2`]. After the linear step, segment
//! proposals are pulled back to their fixed length by Euclidean rescaling or by
//! a trained normalization network.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use crate::mlp::MlpModel;
use crate::{Error, Result, Vec2};

/// Default damping weight.
pub const DEFAULT_DAMPING: f64 = 10.0;

/// Proposals shorter than this keep the previous segment value.
pub const DEFAULT_ZERO_LENGTH_EPSILON: f64 = 1e-9;

/// Canonical resting posture: pointing up, bent into a symmetric arch
/// (60°, 90°, 120°). A fully stretched arm is singular for targets on its own
/// axis, the network cannot bend out of it.
pub const REST_ANGLES: [f64; 3] = [FRAC_PI_3, FRAC_PI_2, 2.0 * FRAC_PI_3];

/// How segment proposals are mapped back to their fixed length.
#[derive(Debug, Clone, Copy)]
pub enum Normalization<'m> {
    Euclidean,
    /// A trained `2 → … → 2` network mapping vectors onto the unit circle.
    Neural(&'m MlpModel),
}

impl Normalization<'_> {
    pub fn is_neural(&self) -> bool {
        matches!(self, Normalization::Neural(_))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MmcConfig<'m> {
    pub damping: f64,
    pub segment_lengths: [f64; 3],
    pub normalization: Normalization<'m>,
    pub zero_length_epsilon: f64,
}

impl Default for MmcConfig<'_> {
    fn default() -> Self {
        MmcConfig {
            damping: DEFAULT_DAMPING,
            segment_lengths: [1.0; 3],
            normalization: Normalization::Euclidean,
            zero_length_epsilon: DEFAULT_ZERO_LENGTH_EPSILON,
        }
    }
}

impl<'m> MmcConfig<'m> {
    pub fn neural(model: &'m MlpModel) -> Self {
        MmcConfig {
            normalization: Normalization::Neural(model),
            ..MmcConfig::default()
        }
    }

    pub fn with_damping(self, damping: f64) -> Self {
        MmcConfig { damping, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 2.0 && self.damping.is_finite()) {
            return Err(Error::InvalidConfig("damping must be > 2"));
        }
        if self
            .segment_lengths
            .iter()
            .any(|l| !(*l > 0.0 && l.is_finite()))
        {
            return Err(Error::InvalidConfig("segment lengths must be > 0"));
        }
        if let Normalization::Neural(model) = self.normalization {
            model.check_planar()?;
        }
        Ok(())
    }

    /// `(1/d, (d − 2)/d)`: the weight of each computation and the self weight.
    pub fn mean_weights(&self) -> (f64, f64) {
        let d = self.damping;
        (1.0 / d, (d - 2.0) / d)
    }

    #[inline]
    fn damped_mean(&self, c1: Vec2, c2: Vec2, current: Vec2) -> Vec2 {
        let d = self.damping;
        (c1 + c2 + current * (d - 2.0)) / d
    }
}

/// A network variable that can be held at an injected value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variable {
    L1,
    L2,
    L3,
    D1,
    D2,
    R,
}

impl Variable {
    pub fn segment(i: usize) -> Variable {
        [Variable::L1, Variable::L2, Variable::L3][i]
    }

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

/// Set of clamped variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Clamps(u8);

impl Clamps {
    pub const NONE: Clamps = Clamps(0);

    pub fn contains(self, v: Variable) -> bool {
        self.0 & v.bit() != 0
    }

    pub fn insert(&mut self, v: Variable) {
        self.0 |= v.bit();
    }

    pub fn remove(&mut self, v: Variable) {
        self.0 &= !v.bit();
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn segment_clamped(self, i: usize) -> bool {
        self.contains(Variable::segment(i))
    }
}

/// Activation state of the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmcState {
    /// Current normalized segments `L1..L3`.
    pub segments: [Vec2; 3],
    /// Post-integration segment proposals, before normalization.
    pub proposals: [Vec2; 3],
    /// `D1`, `D2`.
    pub diagonals: [Vec2; 2],
    /// The network's end-effector variable `R`.
    pub effector: Vec2,
    pub clamps: Clamps,
}

/// Geometrically consistent state with segment `i` at absolute angle `angles[i]`.
pub fn initial_state(cfg: &MmcConfig, segment_angles: [f64; 3]) -> MmcState {
    let l = [0, 1, 2].map(|i| Vec2::from_angle(segment_angles[i], cfg.segment_lengths[i]));
    MmcState::from_segments(l)
}

impl MmcState {
    /// Consistent state built from segment vectors.
    pub fn from_segments(l: [Vec2; 3]) -> Self {
        MmcState {
            segments: l,
            proposals: l,
            diagonals: [l[0] + l[1], l[1] + l[2]],
            effector: l[0] + l[1] + l[2],
            clamps: Clamps::NONE,
        }
    }

    /// Tip of the arm, `L1 + L2 + L3`. During transients this differs from
    /// the network variable `R`.
    #[inline]
    pub fn end_effector(&self) -> Vec2 {
        self.segments[0] + self.segments[1] + self.segments[2]
    }

    /// Holds `R` at `target`.
    pub fn clamp_effector(&mut self, target: Vec2) {
        self.effector = target;
        self.clamps.insert(Variable::R);
    }

    /// Holds all three segments at the given vectors.
    pub fn clamp_segments(&mut self, segments: [Vec2; 3]) {
        for (i, s) in segments.into_iter().enumerate() {
            self.segments[i] = s;
            self.proposals[i] = s;
            self.clamps.insert(Variable::segment(i));
        }
    }

    pub fn release(&mut self) {
        self.clamps = Clamps::NONE;
    }

    /// Largest residual of the four closed chains.
    pub fn chain_residual(&self) -> f64 {
        let [l1, l2, l3] = self.segments;
        let [d1, d2] = self.diagonals;
        let r = self.effector;
        [l1 + l2 - d1, l2 + l3 - d2, d1 + l3 - r, l1 + d2 - r]
            .iter()
            .map(|v| v.length())
            .fold(0.0, f64::max)
    }

    /// Largest `|length(Li) − segment_lengthᵢ|`.
    pub fn segment_length_error(&self, cfg: &MmcConfig) -> f64 {
        self.segments
            .iter()
            .zip(cfg.segment_lengths)
            .map(|(s, len)| (s.length() - len).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.segments
            .iter()
            .chain(&self.proposals)
            .chain(&self.diagonals)
            .all(|v| v.is_finite())
            && self.effector.is_finite()
    }

    /// Every variable rotated by `phi` about the base.
    pub fn rotated(&self, phi: f64) -> Self {
        MmcState {
            segments: self.segments.map(|v| v.rotated(phi)),
            proposals: self.proposals.map(|v| v.rotated(phi)),
            diagonals: self.diagonals.map(|v| v.rotated(phi)),
            effector: self.effector.rotated(phi),
            clamps: self.clamps,
        }
    }

    /// Damped multiple-computation update of every variable from the values
    /// at time `t`.
    ///
    /// Segment results go to [`MmcState::proposals`]; diagonals and `R` are
    /// overwritten. Clamped variables keep their held values.
    pub fn linear_step(&mut self, cfg: &MmcConfig) {
        let [l1, l2, l3] = self.segments;
        let [d1, d2] = self.diagonals;
        let r = self.effector;
        let c = self.clamps;

        let next_l = [
            cfg.damped_mean(d1 - l2, r - d2, l1),
            cfg.damped_mean(d1 - l1, d2 - l3, l2),
            cfg.damped_mean(d2 - l2, r - d1, l3),
        ];
        for (i, next) in next_l.into_iter().enumerate() {
            self.proposals[i] = if c.segment_clamped(i) {
                self.segments[i]
            } else {
                next
            };
        }
        if !c.contains(Variable::D1) {
            self.diagonals[0] = cfg.damped_mean(l1 + l2, r - l3, d1);
        }
        if !c.contains(Variable::D2) {
            self.diagonals[1] = cfg.damped_mean(l2 + l3, r - l1, d2);
        }
        if !c.contains(Variable::R) {
            self.effector = cfg.damped_mean(l1 + d2, d1 + l3, r);
        }
    }

    /// One full kinematic iteration: [`MmcState::linear_step`], then each free
    /// segment is normalized from its proposal.
    pub fn iterate(&mut self, cfg: &MmcConfig) {
        self.linear_step(cfg);
        for i in 0..3 {
            if !self.clamps.segment_clamped(i) {
                self.segments[i] = normalize_segment(
                    self.proposals[i],
                    cfg.segment_lengths[i],
                    self.segments[i],
                    cfg,
                );
            }
        }
    }
}

/// Maps a segment proposal back to length `target_len`.
///
/// Proposals shorter than `cfg.zero_length_epsilon` have no direction; the
/// `previous` segment value is returned instead. Neural normalization works on
/// the proposal in units of `target_len`.
pub fn normalize_segment(v: Vec2, target_len: f64, previous: Vec2, cfg: &MmcConfig) -> Vec2 {
    let len = v.length();
    if len < cfg.zero_length_epsilon {
        return previous;
    }
    match cfg.normalization {
        Normalization::Euclidean => v * (target_len / len),
        Normalization::Neural(model) => model.forward(v / target_len) * target_len,
    }
}

/// Per-iteration record of a reaching movement.
#[derive(Debug, Clone, PartialEq)]
pub struct MovementTrace {
    /// End-effector at iteration 0.
    pub start: Vec2,
    pub target: Vec2,
    /// `states[k]` after `k` iterations; `states[0]` is the clamped start.
    pub states: Vec<MmcState>,
    /// Segment velocities per iteration; empty for kinematic runs.
    pub velocities: Vec<[Vec2; 3]>,
    /// `|end_effector(states[k]) − target|`.
    pub distances: Vec<f64>,
    pub start_distance: f64,
}

impl MovementTrace {
    pub(crate) fn begin(start_state: MmcState, target: Vec2, capacity: usize) -> Self {
        let start = start_state.end_effector();
        let d0 = start.distance(target);
        let mut states = Vec::with_capacity(capacity);
        states.push(start_state);
        let mut distances = Vec::with_capacity(capacity);
        distances.push(d0);
        MovementTrace {
            start,
            target,
            states,
            velocities: Vec::new(),
            distances,
            start_distance: d0,
        }
    }

    pub(crate) fn record(&mut self, state: MmcState) {
        self.distances
            .push(state.end_effector().distance(self.target));
        self.states.push(state);
    }

    pub fn iterations(&self) -> usize {
        self.states.len() - 1
    }

    pub fn final_state(&self) -> &MmcState {
        self.states.last().expect("trace holds the start state")
    }

    /// Distances divided by the start distance. Undefined (non-finite) when
    /// start and target coincide.
    pub fn normalized_distances(&self) -> Vec<f64> {
        self.distances
            .iter()
            .map(|d| d / self.start_distance)
            .collect()
    }
}

/// Inverse kinematics: holds `R` at `target` and relaxes for `iterations` steps.
pub fn solve_inverse(
    cfg: &MmcConfig,
    start: &MmcState,
    target: Vec2,
    iterations: usize,
) -> Result<MovementTrace> {
    cfg.validate()?;
    if iterations == 0 {
        return Err(Error::InvalidConfig("iterations must be ≥ 1"));
    }
    let mut state = *start;
    state.clamp_effector(target);
    let mut trace = MovementTrace::begin(state, target, iterations + 1);
    for _ in 0..iterations {
        state.iterate(cfg);
        trace.record(state);
    }
    Ok(trace)
}

/// Forward kinematics from an arbitrary prior network state: segments are
/// held at the given absolute angles and the settled `R` is returned.
pub fn solve_forward_from(
    cfg: &MmcConfig,
    start: &MmcState,
    segment_angles: [f64; 3],
    iterations: usize,
) -> Result<Vec2> {
    cfg.validate()?;
    if iterations == 0 {
        return Err(Error::InvalidConfig("iterations must be ≥ 1"));
    }
    let mut state = *start;
    state.release();
    let held = [0, 1, 2].map(|i| Vec2::from_angle(segment_angles[i], cfg.segment_lengths[i]));
    state.clamp_segments(held);
    for _ in 0..iterations {
        state.iterate(cfg);
    }
    Ok(state.effector)
}

/// Forward kinematics starting from the resting posture ([`REST_ANGLES`]).
pub fn solve_forward(cfg: &MmcConfig, segment_angles: [f64; 3], iterations: usize) -> Result<Vec2> {
    let rest = initial_state(cfg, REST_ANGLES);
    solve_forward_from(cfg, &rest, segment_angles, iterations)
}
