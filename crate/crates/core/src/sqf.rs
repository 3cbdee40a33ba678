//! Single Queue Former: robots inside the working radius are rotated towards
//! a corridor directly above the target, descend it under pure attraction,
//! and leave through a second rotational field biased towards their next
//! target. Inside the corridor the repulsion influence radius shrinks so
//! robots can pack tighter.

use crate::error::{Error, Result};
use crate::fields::{attractive_force, sqf_entry_rotational, sqf_exit_rotational, FieldParams};
use crate::geometry::Vec2;
use crate::target::Target;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SqfMode {
    GoingToTarget,
    GoingToCorridor,
    LeavingTarget,
}

impl SqfMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SqfMode::GoingToTarget => "going_to_target",
            SqfMode::GoingToCorridor => "going_to_corridor",
            SqfMode::LeavingTarget => "leaving_target",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqfState {
    pub mode: SqfMode,
    pub target_index: usize,
    /// Fixed at arrival: whether the next target lies right of (or level with) the one reached.
    pub next_is_right: bool,
}

impl Default for SqfState {
    fn default() -> Self {
        SqfState {
            mode: SqfMode::GoingToTarget,
            target_index: 0,
            next_is_right: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqfOutput {
    pub force: Vec2,
    /// Influence radius to use for inter-robot repulsion this step.
    pub influence: f64,
}

impl SqfState {
    pub fn is_complete(&self, route_len: usize) -> bool {
        self.target_index >= route_len
    }

    /// One control update at position `p`. Mutates the state machine and
    /// returns the policy force and influence radius.
    ///
    /// Reaching the last target of `route` leaves the state complete and
    /// returns a zero force; calling again afterwards is an error.
    pub fn step(&mut self, p: Vec2, route: &[Target], d_work: f64, params: &FieldParams) -> Result<SqfOutput> {
        if route.len() < 2 {
            return Err(Error::ShortRoute(route.len()));
        }
        if self.is_complete(route.len()) {
            return Err(Error::RouteComplete);
        }

        let reached = route[self.target_index];
        if reached.contains(p) {
            self.mode = SqfMode::LeavingTarget;
            if let Some(next) = route.get(self.target_index + 1) {
                self.next_is_right = next.centre.x >= reached.centre.x;
            }
            self.target_index += 1;
            if self.is_complete(route.len()) {
                return Ok(SqfOutput {
                    force: Vec2::ZERO,
                    influence: params.i_min,
                });
            }
        }

        let Target { centre: o, radius: s } = route[self.target_index];
        let k = params.k_sqf;
        let force = if self.mode != SqfMode::LeavingTarget {
            let off_axis = (p.x - o.x).abs();
            if p.distance(o) <= d_work && (p.y < o.y || off_axis > s) {
                self.mode = SqfMode::GoingToCorridor;
                sqf_entry_rotational(p, o, k)?
            } else {
                self.mode = SqfMode::GoingToTarget;
                attractive_force(p, o, k)?
            }
        } else {
            let prev = route[self.target_index - 1].centre;
            if p.distance(prev) <= d_work {
                sqf_exit_rotational(p, prev, d_work, self.next_is_right, k)?
            } else {
                self.mode = SqfMode::GoingToTarget;
                attractive_force(p, o, k)?
            }
        };

        Ok(SqfOutput {
            force,
            influence: self.influence(p, o, d_work, params),
        })
    }

    fn influence(&self, p: Vec2, o: Vec2, d_work: f64, params: &FieldParams) -> f64 {
        let off_axis = (p.x - o.x).abs();
        match self.mode {
            // the controller only acts within D; approaching robots keep the default radius
            SqfMode::GoingToTarget if p.distance(o) > d_work => params.i_default,
            SqfMode::GoingToTarget | SqfMode::LeavingTarget => params.i_min,
            SqfMode::GoingToCorridor if p.y > o.y && off_axis < params.i_default - params.i_min => {
                params.i_min + off_axis
            }
            SqfMode::GoingToCorridor => params.i_default,
        }
    }
}
