//! Mean of Multiple Computations (MMC) body model for a three-segment planar arm.
//!
//! The arm is encoded as a recurrent network over vector variables: three
//! segments, two diagonals and the end-effector. Every variable is updated as
//! the damped mean of the closed kinematic chains that compute it, so the
//! network relaxes into geometrically valid postures. Clamping the
//! end-effector solves inverse kinematics, clamping the segments solves
//! forward kinematics.
//!
//! Segment lengths are enforced either by explicit Euclidean rescaling or by a
//! small trained feedforward network ([`mlp`]) embedded in the loop. The
//! [`dynamics`] module adds per-segment velocities with a friction-like decay.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, plotting and the
//! command-line driver live in the companion `mmc` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]

extern crate alloc;

pub mod analysis;
pub mod bench;
pub mod dynamics;
mod error;
pub mod geom;
pub mod mlp;
pub mod mmc;

pub use error::{Error, Result};
pub use geom::Vec2;
