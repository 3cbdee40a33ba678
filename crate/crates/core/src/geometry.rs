//! Planar vectors and angles.
//!
//! Angles live in the half-open interval (-pi, pi], the range returned by
//! `atan2`. Nothing in here applies a tolerance.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    /// Builds a vector; debug builds assert both components are finite.
    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite(), "non-finite Vec2 ({x}, {y})");
        Vec2 { x, y }
    }

    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Vec2 { x, y })
        } else {
            Err(Error::NonFinite("Vec2"))
        }
    }

    /// Unit vector at angle `theta` from the +x axis.
    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2 { x: c, y: s }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        cross2(self, other)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction, `None` for the zero vector.
    #[inline]
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0).then(|| self / n)
    }

    /// Rotates anti-clockwise by `phi` radians.
    #[inline]
    pub fn rotate(self, phi: f64) -> Vec2 {
        let (s, c) = phi.sin_cos();
        Vec2 {
            x: c * self.x - s * self.y,
            y: s * self.x + c * self.y,
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2 {
            x: self.x + rhs.x,
            y: self.y + rhs.y,
        }
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2 {
            x: self.x - rhs.x,
            y: self.y - rhs.y,
        }
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, rhs: Vec2) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, k: f64) -> Vec2 {
        Vec2 {
            x: self.x * k,
            y: self.y * k,
        }
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, k: f64) -> Vec2 {
        Vec2 {
            x: self.x / k,
            y: self.y / k,
        }
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2 { x: -self.x, y: -self.y }
    }
}

/// Position and heading of a robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose {
    pub position: Vec2,
    /// Radians in (-pi, pi].
    pub heading: f64,
}

impl Pose {
    pub fn new(position: Vec2, heading: f64) -> Result<Self> {
        Ok(Pose {
            position,
            heading: normalize_angle(heading)?,
        })
    }
}

/// Wraps an angle into (-pi, pi].
pub fn normalize_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("angle"));
    }
    Ok(wrap_angle(theta))
}

/// Infallible form of [`normalize_angle`] for angles already known finite.
#[inline]
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// z-component of the 3D cross product of two planar vectors.
#[inline]
pub fn cross2(a: Vec2, b: Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Direction of `v` measured anti-clockwise from +x, in (-pi, pi].
pub fn heading_of(v: Vec2) -> Result<f64> {
    if v.x == 0.0 && v.y == 0.0 {
        return Err(Error::Degenerate("heading of the zero vector"));
    }
    if !v.is_finite() {
        return Err(Error::NonFinite("heading_of"));
    }
    // atan2 yields -pi for (-x, -0.0); fold it onto the closed top end.
    Ok(wrap_angle(v.y.atan2(v.x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_angle(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(normalize_angle(3.0 * PI).unwrap(), PI, epsilon = 1e-12);
        assert_eq!(normalize_angle(-PI).unwrap(), PI);
        assert_eq!(normalize_angle(PI).unwrap(), PI);
        assert!(normalize_angle(f64::NAN).is_err());
        assert!(normalize_angle(f64::INFINITY).is_err());
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross2(Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)), 1.0);
        assert_eq!(cross2(Vec2::new(1.0, 0.0), Vec2::new(1.0, 0.0)), 0.0);
        assert_eq!(cross2(Vec2::new(2.0, 1.0), Vec2::new(3.0, 4.0)), 5.0);
    }

    #[test]
    fn heading_examples() {
        assert_eq!(heading_of(Vec2::new(1.0, 0.0)).unwrap(), 0.0);
        assert_eq!(heading_of(Vec2::new(0.0, 1.0)).unwrap(), FRAC_PI_2);
        assert_abs_diff_eq!(
            heading_of(Vec2::new(-1.0, -1.0)).unwrap(),
            -3.0 * PI / 4.0,
            epsilon = 1e-15
        );
        assert_eq!(heading_of(Vec2::new(-1.0, -0.0)).unwrap(), PI);
        assert!(matches!(heading_of(Vec2::ZERO), Err(Error::Degenerate(_))));
    }

    #[test]
    fn try_new_rejects_non_finite() {
        assert!(Vec2::try_new(f64::NAN, 0.0).is_err());
        assert!(Vec2::try_new(0.0, f64::NEG_INFINITY).is_err());
        assert!(Vec2::try_new(1.0, 2.0).is_ok());
    }

    fn angle_diff(a: f64, b: f64) -> f64 {
        wrap_angle(a - b).abs()
    }

    proptest! {
        #[test]
        fn normalize_range_and_congruence(theta in -1e4f64..1e4) {
            let n = normalize_angle(theta).unwrap();
            prop_assert!(n > -PI && n <= PI);
            let k = ((theta - n) / TAU).round();
            prop_assert!((theta - n - k * TAU).abs() < 1e-9);
        }

        #[test]
        fn normalize_idempotent(theta in -1e4f64..1e4) {
            let once = normalize_angle(theta).unwrap();
            prop_assert_eq!(normalize_angle(once).unwrap(), once);
        }

        #[test]
        fn cross_antisymmetric(ax in -1e3f64..1e3, ay in -1e3f64..1e3, bx in -1e3f64..1e3, by in -1e3f64..1e3) {
            let a = Vec2::new(ax, ay);
            let b = Vec2::new(bx, by);
            prop_assert_eq!(cross2(a, b), -cross2(b, a));
        }

        #[test]
        fn heading_rotates_with_vector(x in -1e2f64..1e2, y in -1e2f64..1e2, phi in -10.0f64..10.0) {
            let v = Vec2::new(x, y);
            prop_assume!(v.norm() > 1e-6);
            let rotated = heading_of(v.rotate(phi)).unwrap();
            let expected = normalize_angle(heading_of(v).unwrap() + phi).unwrap();
            prop_assert!(angle_diff(rotated, expected) < 1e-9);
        }
    }
}
