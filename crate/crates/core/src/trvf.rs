//! Touch and Run Vector Fields.
//!
//! The plane around a target is split into `K` angular sectors. A robot
//! commits to the lane of the sector it starts in: it circles the working
//! radius to the lane entrance, runs down a straight entry segment parallel
//! to the sector's entering ray, swings round a turning circle tangent to the
//! target, and leaves along a straight segment parallel to the exiting ray.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::fields::{attractive_force, target_disc_repulsion};
use crate::geometry::{heading_of, Pose, Vec2};
use crate::guidance::{orbit_path_following, straight_path_following, GuidanceParams};
use crate::params::Params;
use crate::target::Target;

pub const MIN_LANES: usize = 3;
pub const MAX_LANES: usize = 6;

/// Weight of the attraction blended into the curved states, relative to `K_TRVF`.
const CURVE_ATTRACTION: f64 = 1.5;

pub fn check_lanes(lanes: usize) -> Result<()> {
    if (MIN_LANES..=MAX_LANES).contains(&lanes) {
        Ok(())
    } else {
        Err(Error::LaneCount(lanes))
    }
}

/// 1-based sector of `p` around `o` for `lanes` equal sectors, counted
/// anti-clockwise from +x.
pub fn compute_sector(p: Vec2, o: Vec2, lanes: usize) -> Result<usize> {
    check_lanes(lanes)?;
    let mut eta = heading_of(p - o)?;
    if eta < 0.0 {
        eta += TAU;
    }
    let alpha = TAU / lanes as f64;
    let index = ((eta / alpha).floor() as usize).min(lanes - 1);
    Ok(index + 1)
}

/// Radius of the circle tangent to the target (radius `s`) and to two lines
/// running `spacing / 2` inside the rays bounding a sector of angle `alpha`.
///
/// Results within rounding of zero are returned as exactly `0.0`.
pub fn compute_turning_radius(s: f64, spacing: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < std::f64::consts::PI) || !(s > 0.0) || !(spacing > 0.0) {
        return Err(Error::InvalidParam {
            name: "turning_radius",
            reason: format!("need s > 0, spacing > 0, 0 < alpha < pi (s = {s}, spacing = {spacing}, alpha = {alpha})"),
        });
    }
    let half_sin = (alpha / 2.0).sin();
    let r = (s * half_sin - spacing / 2.0) / (1.0 - half_sin);
    if r.abs() <= 1e-9 * s.max(spacing) {
        return Ok(0.0);
    }
    if r < 0.0 {
        return Err(Error::InfeasibleLane {
            radius: r,
            target_radius: s,
            spacing,
            alpha,
        });
    }
    Ok(r)
}

/// Waypoints and turning circle for one sector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaneGeometry {
    pub sector: usize,
    /// Entry segment start, on the working-radius circle.
    pub w1: Vec2,
    /// Entry segment end, where the turn begins.
    pub w2: Vec2,
    /// Turn end, start of the exit segment.
    pub w3: Vec2,
    /// Exit segment end, on the working-radius circle.
    pub w4: Vec2,
    pub turn_centre: Vec2,
    pub turn_radius: f64,
}

/// Builds the lane for `sector` of a target at `o` with radius `s`.
///
/// Entry and exit segments run `I_d / 2` inside the sector's entering
/// (angle `i * alpha`) and exiting (angle `(i - 1) * alpha`) rays, so both
/// are tangent to the turning circle.
pub fn compute_lane(o: Vec2, s: f64, d_work: f64, i_default: f64, sector: usize, lanes: usize) -> Result<LaneGeometry> {
    check_lanes(lanes)?;
    if sector == 0 || sector > lanes {
        return Err(Error::InvalidParam {
            name: "sector",
            reason: format!("{sector} outside 1..={lanes}"),
        });
    }
    if !(d_work > s) {
        return Err(Error::InvalidParam {
            name: "working_radius",
            reason: format!("must exceed target radius {s}, got {d_work}"),
        });
    }
    let alpha = TAU / lanes as f64;
    let r = compute_turning_radius(s, i_default, alpha)?;
    let half = i_default / 2.0;
    let turn_start = ((r + s).powi(2) - (r + half).powi(2)).max(0.0).sqrt();

    let entering = Vec2::from_angle(sector as f64 * alpha);
    let exiting = Vec2::from_angle((sector - 1) as f64 * alpha);
    // unit normals pointing into the sector
    let entering_in = Vec2::new(entering.y, -entering.x);
    let exiting_in = Vec2::new(-exiting.y, exiting.x);

    Ok(LaneGeometry {
        sector,
        w1: o + entering * d_work + entering_in * half,
        w2: o + entering * turn_start + entering_in * half,
        w3: o + exiting * turn_start + exiting_in * half,
        w4: o + exiting * d_work + exiting_in * half,
        turn_centre: o + Vec2::from_angle((sector as f64 - 0.5) * alpha) * (r + s),
        turn_radius: r,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TrvfMode {
    GoingToTarget,
    GoingToEntranceStraight,
    OnEntranceStraight,
    OnEntranceCurved,
    OnExitCurved,
    OnExitStraight,
}

impl TrvfMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TrvfMode::GoingToTarget => "going_to_target",
            TrvfMode::GoingToEntranceStraight => "going_to_entrance_straight_path",
            TrvfMode::OnEntranceStraight => "on_entrance_straight_path",
            TrvfMode::OnEntranceCurved => "on_entrance_curved_path",
            TrvfMode::OnExitCurved => "on_exit_curved_path",
            TrvfMode::OnExitStraight => "on_exit_straight_path",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrvfState {
    pub mode: TrvfMode,
    pub target_index: usize,
    /// Lane in use together with the target index it was built for. The exit
    /// states keep the lane of the target just reached.
    pub lane: Option<(usize, LaneGeometry)>,
}

impl Default for TrvfState {
    fn default() -> Self {
        TrvfState {
            mode: TrvfMode::GoingToTarget,
            target_index: 0,
            lane: None,
        }
    }
}

impl TrvfState {
    pub fn is_complete(&self, route_len: usize) -> bool {
        self.target_index >= route_len
    }

    pub fn lane_geometry(&self) -> Option<&LaneGeometry> {
        self.lane.as_ref().map(|(_, lane)| lane)
    }

    /// One control update. Returns the policy force; inter-robot repulsion is
    /// added by the caller.
    pub fn step(&mut self, pose: Pose, route: &[Target], d_work: f64, lanes: usize, params: &Params) -> Result<Vec2> {
        if route.len() < 2 {
            return Err(Error::ShortRoute(route.len()));
        }
        if self.is_complete(route.len()) {
            return Err(Error::RouteComplete);
        }
        let p = pose.position;
        let k = params.k_trvf;
        let guidance = params.guidance();

        if self.mode == TrvfMode::GoingToTarget && self.lane.is_none_or(|(j, _)| j != self.target_index) {
            let target = route[self.target_index];
            let sector = compute_sector(p, target.centre, lanes)?;
            let lane = compute_lane(target.centre, target.radius, d_work, params.i_default, sector, lanes)?;
            self.lane = Some((self.target_index, lane));
        }
        let lane = self.lane.map(|(_, lane)| lane).expect("lane computed above");

        loop {
            let o = route[self.target_index].centre;
            match self.mode {
                TrvfMode::GoingToTarget => {
                    if p.distance(o) <= d_work {
                        self.mode = TrvfMode::GoingToEntranceStraight;
                        continue;
                    }
                    return self.seek_next(p, route, d_work, params);
                }
                TrvfMode::GoingToEntranceStraight => {
                    let out = orbit_path_following(k, o, d_work, pose, lane.w1, &guidance)?;
                    if out.progress <= 0.0 {
                        self.mode = TrvfMode::OnEntranceStraight;
                        continue;
                    }
                    return Ok(out.force);
                }
                TrvfMode::OnEntranceStraight => {
                    let out = straight_path_following(k, pose, lane.w1, lane.w2, &guidance)?;
                    if out.progress >= 1.0 {
                        self.mode = TrvfMode::OnEntranceCurved;
                        continue;
                    }
                    return Ok(out.force);
                }
                TrvfMode::OnEntranceCurved => {
                    if route[self.target_index].contains(p) {
                        self.target_index += 1;
                        self.mode = TrvfMode::OnExitCurved;
                        if self.is_complete(route.len()) {
                            return Ok(Vec2::ZERO);
                        }
                        continue;
                    }
                    let turn = curve_force(k, pose, &lane, &guidance)?;
                    return Ok(blend(k, turn, attractive_force(p, o, CURVE_ATTRACTION * k)?));
                }
                TrvfMode::OnExitCurved | TrvfMode::OnExitStraight => {
                    let prev = route[self.target_index - 1].centre;
                    if p.distance(prev) > d_work {
                        self.mode = TrvfMode::GoingToTarget;
                        return self.seek_next(p, route, d_work, params);
                    }
                    if self.mode == TrvfMode::OnExitCurved {
                        // a zero radius turn has no arc to follow
                        if lane.turn_radius > 0.0 {
                            let out =
                                orbit_path_following(k, lane.turn_centre, lane.turn_radius, pose, lane.w3, &guidance)?;
                            if out.progress > 0.0 {
                                let pull = (lane.w3 - p).normalized().unwrap_or(Vec2::ZERO) * (CURVE_ATTRACTION * k);
                                return Ok(blend(k, out.force, pull));
                            }
                        }
                        self.mode = TrvfMode::OnExitStraight;
                    }
                    let out = straight_path_following(k, pose, lane.w3, lane.w4, &guidance)?;
                    return Ok(out.force);
                }
            }
        }
    }

    /// Attraction to the current target pushed away from the previous
    /// target's working disc, renormalised to `K_TRVF`.
    fn seek_next(&self, p: Vec2, route: &[Target], d_work: f64, params: &Params) -> Result<Vec2> {
        let k = params.k_trvf;
        let o = route[self.target_index].centre;
        let attraction = attractive_force(p, o, k)?;
        let Some(prev) = self.target_index.checked_sub(1).map(|j| route[j].centre) else {
            return Ok(attraction);
        };
        let push = match target_disc_repulsion(p, prev, d_work, params.k_rep) {
            Ok(f) => f,
            // pushed back onto the old disc: head straight out
            Err(Error::InsideTargetDisc(_)) => {
                return Ok((p - prev)
                    .normalized()
                    .ok_or(Error::Degenerate("robot at previous target centre"))?
                    * k)
            }
            Err(e) => return Err(e),
        };
        Ok(blend(k, attraction, push))
    }
}

fn curve_force(k: f64, pose: Pose, lane: &LaneGeometry, guidance: &GuidanceParams) -> Result<Vec2> {
    if lane.turn_radius > 0.0 {
        Ok(orbit_path_following(k, lane.turn_centre, lane.turn_radius, pose, lane.w3, guidance)?.force)
    } else {
        Ok(Vec2::ZERO)
    }
}

/// `k * (a + b) / |a + b|`, or zero when the sum vanishes.
fn blend(k: f64, a: Vec2, b: Vec2) -> Vec2 {
    (a + b).normalized().map_or(Vec2::ZERO, |u| u * k)
}
