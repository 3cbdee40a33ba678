//! Uniform interface over the three controllers the engine can run.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fields::attractive_force;
use crate::geometry::{Pose, Vec2};
use crate::params::Params;
use crate::sqf::SqfState;
use crate::target::Target;
use crate::trvf::{check_lanes, TrvfState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    Sqf,
    Trvf {
        lanes: usize,
    },
    /// Pure attraction to the current target, default influence radius.
    Baseline,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Sqf => "sqf",
            Policy::Trvf { .. } => "trvf",
            Policy::Baseline => "baseline",
        }
    }

    pub fn lanes(self) -> Option<usize> {
        match self {
            Policy::Trvf { lanes } => Some(lanes),
            _ => None,
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            Policy::Trvf { lanes } => check_lanes(lanes),
            _ => Ok(()),
        }
    }

    pub fn initial_state(self) -> PolicyState {
        match self {
            Policy::Sqf => PolicyState::Sqf(SqfState::default()),
            Policy::Trvf { lanes } => PolicyState::Trvf(TrvfState::default(), lanes),
            Policy::Baseline => PolicyState::Baseline { target_index: 0 },
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::Trvf { lanes } => write!(f, "trvf(K={lanes})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Parses `sqf`, `baseline`, `trvf` (five lanes) or `trvf:<K>`.
impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let policy = match lower.as_str() {
            "sqf" => Policy::Sqf,
            "baseline" => Policy::Baseline,
            "trvf" => Policy::Trvf { lanes: 5 },
            other => match other.strip_prefix("trvf:").map(str::parse::<usize>) {
                Some(Ok(lanes)) => Policy::Trvf { lanes },
                _ => {
                    return Err(Error::InvalidParam {
                        name: "policy",
                        reason: format!("unknown policy {s:?}"),
                    })
                }
            },
        };
        policy.validate()?;
        Ok(policy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicyOutput {
    pub force: Vec2,
    /// Influence radius for inter-robot repulsion.
    pub influence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolicyState {
    Sqf(SqfState),
    Trvf(TrvfState, usize),
    Baseline { target_index: usize },
}

impl PolicyState {
    pub fn target_index(&self) -> usize {
        match self {
            PolicyState::Sqf(s) => s.target_index,
            PolicyState::Trvf(s, _) => s.target_index,
            PolicyState::Baseline { target_index } => *target_index,
        }
    }

    pub fn is_complete(&self, route_len: usize) -> bool {
        self.target_index() >= route_len
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            PolicyState::Sqf(s) => s.mode.as_str(),
            PolicyState::Trvf(s, _) => s.mode.as_str(),
            PolicyState::Baseline { .. } => "attract",
        }
    }

    pub fn step(&mut self, pose: Pose, route: &[Target], d_work: f64, params: &Params) -> Result<PolicyOutput> {
        match self {
            PolicyState::Sqf(state) => {
                let out = state.step(pose.position, route, d_work, &params.field())?;
                Ok(PolicyOutput {
                    force: out.force,
                    influence: out.influence,
                })
            }
            PolicyState::Trvf(state, lanes) => {
                let force = state.step(pose, route, d_work, *lanes, params)?;
                Ok(PolicyOutput {
                    force,
                    influence: params.i_default,
                })
            }
            PolicyState::Baseline { target_index } => {
                if route.len() < 2 {
                    return Err(Error::ShortRoute(route.len()));
                }
                if *target_index >= route.len() {
                    return Err(Error::RouteComplete);
                }
                if route[*target_index].contains(pose.position) {
                    *target_index += 1;
                    if *target_index >= route.len() {
                        return Ok(PolicyOutput {
                            force: Vec2::ZERO,
                            influence: params.i_default,
                        });
                    }
                }
                let force = attractive_force(pose.position, route[*target_index].centre, params.k_sqf)?;
                Ok(PolicyOutput {
                    force,
                    influence: params.i_default,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_policies() {
        assert_eq!("sqf".parse::<Policy>().unwrap(), Policy::Sqf);
        assert_eq!("Baseline".parse::<Policy>().unwrap(), Policy::Baseline);
        assert_eq!("trvf".parse::<Policy>().unwrap(), Policy::Trvf { lanes: 5 });
        assert_eq!("trvf:3".parse::<Policy>().unwrap(), Policy::Trvf { lanes: 3 });
        assert_eq!("trvf:7".parse::<Policy>(), Err(Error::LaneCount(7)));
        assert!("potential".parse::<Policy>().is_err());
    }

    #[test]
    fn baseline_advances_on_arrival() {
        let route = [Target::new(Vec2::ZERO, 3.0), Target::new(Vec2::new(47.0, 0.0), 3.0)];
        let params = Params::default();
        let mut st = Policy::Baseline.initial_state();
        let out = st
            .step(Pose::new(Vec2::new(0.0, 10.0), 0.0).unwrap(), &route, 13.0, &params)
            .unwrap();
        assert_eq!(out.force, Vec2::new(0.0, -2.5));
        assert_eq!(out.influence, 3.0);
        let out = st
            .step(Pose::new(Vec2::new(0.0, 2.0), 0.0).unwrap(), &route, 13.0, &params)
            .unwrap();
        assert_eq!(st.target_index(), 1);
        assert!(out.force.x > 0.0);
        assert_eq!(st.mode_name(), "attract");
    }
}
