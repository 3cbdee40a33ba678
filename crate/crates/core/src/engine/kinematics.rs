//! Force-to-motion mappings. A force's direction sets where the robot wants
//! to go and its magnitude, capped at `v_max`, sets how fast.

use crate::geometry::{wrap_angle, Pose, Vec2};

/// Omnidirectional robot: moves along the force at `min(v_max, |F|)` and
/// faces its direction of travel. A zero force leaves the pose unchanged.
pub fn step_holonomic(pose: Pose, force: Vec2, v_max: f64, dt: f64) -> Pose {
    let magnitude = force.norm();
    if magnitude == 0.0 {
        return pose;
    }
    let dir = force / magnitude;
    Pose {
        position: pose.position + dir * (magnitude.min(v_max) * dt),
        heading: wrap_angle(dir.y.atan2(dir.x)),
    }
}

/// Differential-drive robot integrated with forward Euler. Turns towards the
/// force at `k_r` times the heading error and only drives forward while the
/// error is under a quarter turn.
pub fn step_unicycle(pose: Pose, force: Vec2, v_max: f64, k_r: f64, dt: f64) -> Pose {
    let magnitude = force.norm();
    if magnitude == 0.0 {
        return pose;
    }
    let error = wrap_angle(force.y.atan2(force.x) - pose.heading);
    let omega = k_r * error;
    let v = magnitude.min(v_max) * error.cos().max(0.0);
    let (sin, cos) = pose.heading.sin_cos();
    Pose {
        position: pose.position + Vec2::new(cos, sin) * (v * dt),
        heading: wrap_angle(pose.heading + omega * dt),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn pose(x: f64, y: f64, h: f64) -> Pose {
        Pose::new(Vec2::new(x, y), h).unwrap()
    }

    #[test]
    fn holonomic_examples() {
        let p = pose(1.0, 2.0, 0.3);
        assert_eq!(step_holonomic(p, Vec2::ZERO, 1.0, 0.1), p);
        let q = step_holonomic(p, Vec2::new(2.5, 0.0), 1.0, 0.1);
        assert_abs_diff_eq!(q.position.x, 1.1, epsilon = 1e-15);
        assert_eq!(q.position.y, 2.0);
        assert_eq!(q.heading, 0.0);
        let q = step_holonomic(p, Vec2::new(0.5, 0.0), 1.0, 0.1);
        assert_abs_diff_eq!(q.position.x, 1.05, epsilon = 1e-15);
    }

    #[test]
    fn unicycle_examples() {
        let q = step_unicycle(pose(0.0, 0.0, 0.0), Vec2::new(0.5, 0.0), 1.0, 3.0, 0.1);
        assert_abs_diff_eq!(q.position.x, 0.05, epsilon = 1e-15);
        assert_eq!(q.heading, 0.0);

        let q = step_unicycle(pose(0.0, 0.0, 0.0), Vec2::new(-1.0, 0.0), 1.0, 3.0, 0.1);
        assert_eq!(q.position, Vec2::ZERO);
        assert_abs_diff_eq!(q.heading, 3.0 * PI * 0.1, epsilon = 1e-12);

        let q = step_unicycle(pose(0.0, 0.0, 0.0), Vec2::new(0.0, 2.0), 1.0, 3.0, 0.1);
        assert_abs_diff_eq!(q.position.norm(), 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(q.heading, 3.0 * FRAC_PI_2 * 0.1, epsilon = 1e-12);

        let p = pose(4.0, 4.0, 1.0);
        assert_eq!(step_unicycle(p, Vec2::ZERO, 1.0, 3.0, 0.1), p);
    }

    proptest! {
        #[test]
        fn speed_cap(fx in -50.0f64..50.0, fy in -50.0f64..50.0, h in -3.0f64..3.0, dt in 0.01f64..0.5) {
            let p = pose(0.0, 0.0, h);
            let f = Vec2::new(fx, fy);
            prop_assert!(step_holonomic(p, f, 1.0, dt).position.norm() <= dt * (1.0 + 1e-12));
            prop_assert!(step_unicycle(p, f, 1.0, 3.0, dt).position.norm() <= dt * (1.0 + 1e-12));
        }
    }
}
