//! Velocity extension of the MMC network.
//!
//! Each segment carries an explicit velocity that integrates the change
//! proposed by the multiple-computation step with its own previous value:
//!
//! ```text
//! v' = (L̃ − L) / d_vel  +  decay · (d_vel − 1) / d_vel · v
//! L̂  = L + v'
//! ```
//!
//! `L̂` is then normalized into the new segment. The decay factor acts like a
//! constant friction; `decay = 1` gives the plain low-pass velocity filter.
//! Diagonals and the end-effector stay purely kinematic.

use crate::mmc::{normalize_segment, MmcConfig, MmcState, MovementTrace};
use crate::{Error, Result, Vec2};

pub const DEFAULT_VELOCITY_DAMPING: f64 = 5.0;
pub const DEFAULT_VELOCITY_DECAY: f64 = 0.92;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynConfig {
    pub velocity_damping: f64,
    pub decay: f64,
}

impl Default for DynConfig {
    fn default() -> Self {
        DynConfig {
            velocity_damping: DEFAULT_VELOCITY_DAMPING,
            decay: DEFAULT_VELOCITY_DECAY,
        }
    }
}

impl DynConfig {
    pub fn without_decay(self) -> Self {
        DynConfig { decay: 1.0, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.velocity_damping > 1.0 && self.velocity_damping.is_finite()) {
            return Err(Error::InvalidConfig("velocity damping must be > 1"));
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) {
            return Err(Error::InvalidConfig("velocity decay must lie in (0, 1]"));
        }
        Ok(())
    }

    /// `(1/d_vel, decay·(d_vel − 1)/d_vel)`.
    pub fn coefficients(&self) -> (f64, f64) {
        let d = self.velocity_damping;
        (1.0 / d, self.decay * (d - 1.0) / d)
    }

    /// Factor by which an undisturbed velocity shrinks each step.
    pub fn retention(&self) -> f64 {
        self.coefficients().1
    }
}

pub fn velocity_update(v: Vec2, proposal: Vec2, current: Vec2, cfg: &DynConfig) -> Vec2 {
    let d = cfg.velocity_damping;
    ((proposal - current) + v * (cfg.decay * (d - 1.0))) / d
}

#[inline]
pub fn position_update(current: Vec2, v: Vec2) -> Vec2 {
    current + v
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynState {
    pub base: MmcState,
    pub velocities: [Vec2; 3],
    /// `L̂ᵢ = Lᵢ + vᵢ` before normalization.
    pub dynamic_proposals: [Vec2; 3],
}

impl DynState {
    /// Wraps a kinematic state with zero velocities.
    pub fn at_rest(base: MmcState) -> Self {
        DynState {
            base,
            velocities: [Vec2::ZERO; 3],
            dynamic_proposals: base.segments,
        }
    }

    /// One dynamic step: linear MMC step, velocity update, position update,
    /// normalization. Clamped segments are held with zero velocity.
    pub fn dynamic_iterate(&mut self, mmc: &MmcConfig, dynamics: &DynConfig) {
        self.base.linear_step(mmc);
        for i in 0..3 {
            let current = self.base.segments[i];
            if self.base.clamps.segment_clamped(i) {
                self.velocities[i] = Vec2::ZERO;
                self.dynamic_proposals[i] = current;
                continue;
            }
            let v = velocity_update(
                self.velocities[i],
                self.base.proposals[i],
                current,
                dynamics,
            );
            self.velocities[i] = v;
            let moved = position_update(current, v);
            self.dynamic_proposals[i] = moved;
            self.base.segments[i] = normalize_segment(moved, mmc.segment_lengths[i], current, mmc);
        }
    }
}

/// Inverse kinematics with the velocity extension, starting at rest.
pub fn solve_inverse_dynamic(
    mmc: &MmcConfig,
    dynamics: &DynConfig,
    start: &MmcState,
    target: Vec2,
    iterations: usize,
) -> Result<MovementTrace> {
    mmc.validate()?;
    dynamics.validate()?;
    if iterations == 0 {
        return Err(Error::InvalidConfig("iterations must be ≥ 1"));
    }
    let mut state = DynState::at_rest(*start);
    state.base.clamp_effector(target);
    let mut trace = MovementTrace::begin(state.base, target, iterations + 1);
    trace.velocities.reserve(iterations + 1);
    trace.velocities.push(state.velocities);
    for _ in 0..iterations {
        state.dynamic_iterate(mmc, dynamics);
        trace.record(state.base);
        trace.velocities.push(state.velocities);
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmc::initial_state;
    use proptest::prelude::*;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol
    }

    #[test]
    fn velocity_update_examples() {
        let cfg = DynConfig::default();
        let l = Vec2::new(0.3, 0.4);
        let v = velocity_update(Vec2::new(1.0, 0.0), l, l, &cfg);
        assert!(close(v, Vec2::new(0.736, 0.0), 1e-15));
        let v = velocity_update(Vec2::ZERO, Vec2::new(1.5, 0.0), Vec2::new(1.0, 0.0), &cfg);
        assert!(close(v, Vec2::new(0.1, 0.0), 1e-15));
        let v = velocity_update(
            Vec2::new(0.2, -0.1),
            Vec2::new(1.1, 0.3),
            Vec2::new(1.0, 0.0),
            &cfg,
        );
        assert!(close(v, Vec2::new(0.1672, -0.0136), 1e-15));
    }

    #[test]
    fn position_update_examples() {
        assert_eq!(
            position_update(Vec2::new(1.0, 0.0), Vec2::ZERO),
            Vec2::new(1.0, 0.0)
        );
        assert_eq!(
            position_update(Vec2::new(1.0, 0.0), Vec2::new(0.0, 0.1)),
            Vec2::new(1.0, 0.1)
        );
    }

    #[test]
    fn coefficients_and_retention() {
        let cfg = DynConfig::default();
        assert!((cfg.retention() - 0.736).abs() < 1e-15);
        // decay 1 is the plain low-pass filter: 1/d and (d − 1)/d
        let plain = cfg.without_decay();
        let d = plain.velocity_damping;
        assert_eq!(plain.coefficients(), (1.0 / d, (d - 1.0) / d));
    }

    #[test]
    fn validation() {
        assert!(DynConfig::default().validate().is_ok());
        assert!(DynConfig {
            velocity_damping: 1.0,
            ..DynConfig::default()
        }
        .validate()
        .is_err());
        assert!(DynConfig {
            decay: 0.0,
            ..DynConfig::default()
        }
        .validate()
        .is_err());
        assert!(DynConfig {
            decay: 1.01,
            ..DynConfig::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn dynamic_fixed_point() {
        let mmc = MmcConfig::default();
        let mut s = DynState::at_rest(initial_state(&mmc, [0.4, 1.3, -0.7]));
        let tip = s.base.end_effector();
        s.base.clamp_effector(tip);
        let before = s;
        s.dynamic_iterate(&mmc, &DynConfig::default());
        for (a, b) in s.base.segments.iter().zip(&before.base.segments) {
            assert!(close(*a, *b, 1e-12));
        }
        assert!(s.velocities.iter().all(|v| v.length() < 1e-12));
    }

    #[test]
    fn first_dynamic_velocity_hand_evaluation() {
        let mmc = MmcConfig::default();
        let mut s = DynState::at_rest(initial_state(&mmc, [0.0; 3]));
        s.base.clamp_effector(Vec2::new(0.0, 3.0));
        s.dynamic_iterate(&mmc, &DynConfig::default());
        // (1/5)·((0.7, 0.3) − (1, 0))
        assert!(close(s.velocities[0], Vec2::new(-0.06, 0.06), 1e-15));
        assert!((s.base.segments[0].length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn undisturbed_velocity_decays_geometrically() {
        let cfg = DynConfig::default();
        let l = Vec2::new(0.0, 1.0);
        let mut v = Vec2::new(1.0, 0.0);
        for _ in 0..10 {
            v = velocity_update(v, l, l, &cfg);
        }
        assert!((v.length() - 0.736f64.powi(10)).abs() < 1e-15);
        assert!((v.length() - 0.0466).abs() < 1e-4);
    }

    #[test]
    fn clamped_segments_have_zero_velocity() {
        let mmc = MmcConfig::default();
        let mut s = DynState::at_rest(initial_state(&mmc, [0.0; 3]));
        s.base.clamp_segments([
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, -1.0),
        ]);
        s.velocities = [Vec2::new(0.5, 0.5); 3];
        s.dynamic_iterate(&mmc, &DynConfig::default());
        assert_eq!(s.velocities, [Vec2::ZERO; 3]);
        assert_eq!(s.base.segments[0], Vec2::new(0.0, 1.0));
    }

    #[test]
    fn dynamic_inverse_records_velocities() {
        let mmc = MmcConfig::default();
        let start = initial_state(&mmc, [0.0; 3]);
        let t = solve_inverse_dynamic(&mmc, &DynConfig::default(), &start, Vec2::new(0.0, 3.0), 50)
            .unwrap();
        assert_eq!(t.velocities.len(), 51);
        assert_eq!(t.states.len(), 51);
        assert!(t.distances[50] < t.distances[0]);
    }

    proptest! {
        #[test]
        fn velocity_retention_is_exact(
            vx in -1.0f64..1.0, vy in -1.0f64..1.0,
            d in 1.5f64..20.0, decay in 0.05f64..1.0, k in 1usize..30,
        ) {
            let cfg = DynConfig { velocity_damping: d, decay };
            let l = Vec2::new(0.6, 0.8);
            let v0 = Vec2::new(vx, vy);
            let mut v = v0;
            for _ in 0..k {
                v = velocity_update(v, l, l, &cfg);
            }
            let expect = v0.length() * cfg.retention().powi(k as i32);
            prop_assert!((v.length() - expect).abs() <= 1e-12);
        }
    }
}
