//! Planar vectors in segment-length units.

use core::f64::consts::TAU;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Euclidean norm.
    #[inline]
    pub fn length(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    /// Counter-clockwise angle from the positive x-axis, in `[0, 2π)`.
    pub fn angle(self) -> Result<f64> {
        if self.x == 0.0 && self.y == 0.0 {
            return Err(Error::ZeroVector);
        }
        let mut a = libm::atan2(self.y, self.x);
        if a < 0.0 {
            a += TAU;
        }
        // -tiny + 2π rounds up to 2π
        if a >= TAU {
            a = 0.0;
        }
        Ok(a)
    }

    /// `(len·cos θ, len·sin θ)`.
    #[inline]
    pub fn from_angle(theta: f64, len: f64) -> Self {
        let (s, c) = libm::sincos(theta);
        Vec2::new(len * c, len * s)
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Counter-clockwise rotation by `phi`.
    pub fn rotated(self, phi: f64) -> Self {
        let (s, c) = libm::sincos(phi);
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).length()
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let mut a = theta % TAU;
    if a < 0.0 {
        a += TAU;
    }
    if a >= TAU {
        a = 0.0;
    }
    a
}

/// Smallest absolute difference between two angles, in `[0, π]`.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > core::f64::consts::PI {
        TAU - d
    } else {
        d
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl From<(f64, f64)> for Vec2 {
    fn from((x, y): (f64, f64)) -> Self {
        Vec2::new(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};
    use proptest::prelude::*;

    #[test]
    fn length_examples() {
        assert_eq!(Vec2::new(3.0, 4.0).length(), 5.0);
        assert_eq!(Vec2::ZERO.length(), 0.0);
        assert_eq!(Vec2::new(1.0, 0.0).length(), 1.0);
    }

    #[test]
    fn angle_examples() {
        assert_eq!(Vec2::new(1.0, 0.0).angle().unwrap(), 0.0);
        assert_abs_diff_eq!(Vec2::new(0.0, 1.0).angle().unwrap(), FRAC_PI_2);
        assert_abs_diff_eq!(Vec2::new(-1.0, 0.0).angle().unwrap(), PI);
        assert_abs_diff_eq!(Vec2::new(0.0, -1.0).angle().unwrap(), 1.5 * PI);
        assert_eq!(Vec2::ZERO.angle(), Err(Error::ZeroVector));
    }

    #[test]
    fn angle_never_returns_two_pi() {
        let a = Vec2::new(1.0, -1e-300).angle().unwrap();
        assert!((0.0..TAU).contains(&a));
    }

    #[test]
    fn from_angle_examples() {
        assert_eq!(Vec2::from_angle(0.0, 2.0), Vec2::new(2.0, 0.0));
        let v = Vec2::from_angle(FRAC_PI_2, 1.0);
        assert_abs_diff_eq!(v.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.y, 1.0, epsilon = 1e-15);
        let v = Vec2::from_angle(FRAC_PI_6, 3.0);
        assert_abs_diff_eq!(v.x, 3.0 * 3f64.sqrt() / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.y, 1.5, epsilon = 1e-14);
    }

    #[test]
    fn angle_difference_wraps() {
        assert_abs_diff_eq!(angle_difference(0.1, TAU - 0.1), 0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(angle_difference(PI, 0.0), PI);
    }

    proptest! {
        #[test]
        fn from_angle_has_requested_length(theta in -10.0f64..10.0, r in 0.0f64..3.0) {
            prop_assert!((Vec2::from_angle(theta, r).length() - r).abs() <= 1e-12);
        }

        #[test]
        fn angle_inverts_from_angle(theta in 0.0f64..TAU) {
            let back = Vec2::from_angle(theta, 1.0).angle().unwrap();
            prop_assert!(angle_difference(back, theta) <= 1e-12);
        }

        #[test]
        fn rotation_preserves_length(x in -3.0f64..3.0, y in -3.0f64..3.0, phi in -7.0f64..7.0) {
            let v = Vec2::new(x, y);
            prop_assert!((v.rotated(phi).length() - v.length()).abs() <= 1e-12);
        }
    }
}
