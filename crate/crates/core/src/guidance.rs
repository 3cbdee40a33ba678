//! Path-following vector fields: straight segments and anti-clockwise
//! circular arcs. Both return a force of fixed magnitude plus a progress
//! value the caller uses to decide when the path piece is finished.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use crate::error::{check_positive, Error, Result};
use crate::geometry::{cross2, Pose, Vec2};
use crate::params::check_exponent;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceParams {
    /// Exponent for the straight-line field, > 1.
    pub k_s: f64,
    /// Exponent for the orbit field, > 1.
    pub k_o: f64,
    /// Proportional angular-speed gain, 1/s.
    pub k_r: f64,
    /// Maximum linear speed, m/s.
    pub v_max: f64,
    /// Default influence radius, metres. Sets the straight-line transition band.
    pub i_default: f64,
}

impl GuidanceParams {
    pub fn validate(&self) -> Result<()> {
        check_exponent("k_s", self.k_s)?;
        check_exponent("k_o", self.k_o)?;
        check_positive("k_r", self.k_r)?;
        check_positive("v_max", self.v_max)?;
        check_positive("i_default", self.i_default)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GuidanceOutput {
    pub force: Vec2,
    /// Straight line: 0 at the start waypoint, 1 at the end. Orbit: positive
    /// until the robot crosses the ray from the centre through the end waypoint.
    pub progress: f64,
}

impl GuidanceOutput {
    fn finished(progress: f64) -> Self {
        GuidanceOutput {
            force: Vec2::ZERO,
            progress,
        }
    }
}

fn nan_to_zero(x: f64) -> f64 {
    if x.is_nan() {
        0.0
    } else {
        x
    }
}

/// Straight-line following from `w_i` to `w_f`.
///
/// Outside a band of half-width `tau = I_d / 5` the field points straight at
/// the line; inside the band the heading bends smoothly onto the segment
/// direction. The near-band powers of the signed cross-track error go NaN on
/// one side of the line and are replaced by zero.
pub fn straight_path_following(
    k_force: f64,
    pose: Pose,
    w_i: Vec2,
    w_f: Vec2,
    params: &GuidanceParams,
) -> Result<GuidanceOutput> {
    let seg = w_f - w_i;
    let len_sq = seg.norm_squared();
    if len_sq == 0.0 {
        return Err(Error::Degenerate("straight path with identical waypoints"));
    }
    let rel = pose.position - w_i;
    let t = rel.dot(seg) / len_sq;
    if t >= 1.0 {
        return Ok(GuidanceOutput::finished(t));
    }

    let path_heading = seg.y.atan2(seg.x);
    let mut eps = (rel - seg * t).norm();
    let rho = if cross2(seg, rel) < 0.0 { -1.0 } else { 1.0 };
    let tau = params.i_default / 5.0;
    let entry = FRAC_PI_2;

    let command = if eps > tau {
        path_heading - rho * entry
    } else {
        eps *= rho;
        let p1 = nan_to_zero((eps / tau).powf(params.k_s));
        let p2 = nan_to_zero(eps.powf(params.k_s - 1.0));
        let gain = params.k_s * entry * params.v_max / (params.k_r * tau.powf(params.k_s));
        path_heading - entry * p1 - gain * p2 * pose.heading.sin()
    };

    Ok(GuidanceOutput {
        force: Vec2::from_angle(command) * k_force,
        progress: t,
    })
}

/// Anti-clockwise orbit following around `centre` with radius `radius`,
/// stopping at the ray from `centre` through `w_f`.
///
/// The bearing of the robot from the centre is taken clockwise from +y
/// (`atan2(q.x, q.y)`), and the commanded angle is converted back to the
/// usual anti-clockwise-from-x convention when building the force.
pub fn orbit_path_following(
    k_force: f64,
    centre: Vec2,
    radius: f64,
    pose: Pose,
    w_f: Vec2,
    params: &GuidanceParams,
) -> Result<GuidanceOutput> {
    if !(radius > 0.0) {
        return Err(Error::Degenerate("orbit with non-positive radius"));
    }
    let q = pose.position - centre;
    if q.x == 0.0 && q.y == 0.0 {
        return Err(Error::Degenerate("robot at orbit centre"));
    }
    let stop = w_f - centre;
    if stop.x == 0.0 && stop.y == 0.0 {
        return Err(Error::Degenerate("orbit end waypoint at orbit centre"));
    }
    let t = cross2(q, stop);
    if t <= 0.0 {
        return Ok(GuidanceOutput::finished(t));
    }

    let gamma = q.x.atan2(q.y);
    let dist = q.norm();
    let v = params.v_max;
    let (sin_rel, cos_rel) = (pose.heading - gamma).sin_cos();

    let command = if dist > 2.0 * radius {
        gamma - 5.0 * PI / 6.0 + v / dist * sin_rel
    } else {
        let p1 = nan_to_zero(((dist - radius) / radius).powf(params.k_o));
        let p2 = nan_to_zero((dist - radius).powf(params.k_o - 1.0));
        gamma
            - FRAC_PI_2
            - FRAC_PI_3 * p1
            - v / (params.k_r * dist) * sin_rel
            - params.k_o * v * PI / (3.0 * radius.powf(params.k_o) * params.k_r) * p2 * cos_rel
    };

    Ok(GuidanceOutput {
        force: Vec2::from_angle(FRAC_PI_2 - command) * k_force,
        progress: t,
    })
}
