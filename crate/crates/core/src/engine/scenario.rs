//! Experiment setup: one common target, robots scattered on an annulus
//! around it, each with a second target far away on the left or right.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_positive, Error, Result};
use crate::geometry::{Pose, Vec2};
use crate::params::DEFAULT_WORKING_RADIUS;
use crate::target::Target;

pub const SPAWN_INNER_RADIUS: f64 = 13.0;
pub const SPAWN_OUTER_RADIUS: f64 = 21.0;
/// Half the 0.44 m footprint.
pub const ROBOT_RADIUS: f64 = 0.22;
pub const DEFAULT_DT: f64 = 0.1;
/// One hour of simulated time.
pub const DEFAULT_TIMEOUT: f64 = 3600.0;
/// Draws allowed per robot before spawning gives up.
const MAX_SPAWN_ATTEMPTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Kinematics {
    #[default]
    Holonomic,
    Unicycle,
}

impl Kinematics {
    pub fn name(self) -> &'static str {
        match self {
            Kinematics::Holonomic => "holo",
            Kinematics::Unicycle => "nonholo",
        }
    }
}

impl fmt::Display for Kinematics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Kinematics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "holo" | "holonomic" => Ok(Kinematics::Holonomic),
            "nonholo" | "nonholonomic" | "unicycle" => Ok(Kinematics::Unicycle),
            _ => Err(Error::InvalidParam {
                name: "kinematics",
                reason: format!("unknown kinematics {s:?}"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    /// The target every robot has to visit.
    pub target: Target,
    pub d_work: f64,
    pub n_robots: usize,
    pub robot_radius: f64,
    pub kinematics: Kinematics,
    pub seed: u64,
    pub dt: f64,
    pub timeout: f64,
}

/// Starting pose and ordered target list of one robot.
#[derive(Debug, Clone, PartialEq)]
pub struct RobotSpawn {
    pub pose: Pose,
    pub route: Vec<Target>,
}

impl Scenario {
    /// Default-sized scenario centred at the origin.
    pub fn new(seed: u64, n_robots: usize, target_radius: f64, kinematics: Kinematics) -> Self {
        Scenario {
            target: Target::new(Vec2::ZERO, target_radius),
            d_work: DEFAULT_WORKING_RADIUS,
            n_robots,
            robot_radius: ROBOT_RADIUS,
            kinematics,
            seed,
            dt: DEFAULT_DT,
            timeout: DEFAULT_TIMEOUT,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_robots == 0 {
            return Err(Error::InvalidParam {
                name: "n_robots",
                reason: "need at least one robot".into(),
            });
        }
        check_positive("target_radius", self.target.radius)?;
        check_positive("robot_radius", self.robot_radius)?;
        check_positive("dt", self.dt)?;
        check_positive("timeout", self.timeout)?;
        if !(self.d_work > self.target.radius) || !self.d_work.is_finite() {
            return Err(Error::InvalidParam {
                name: "working_radius",
                reason: format!("must exceed target radius {}, got {}", self.target.radius, self.d_work),
            });
        }
        if !self.target.centre.is_finite() {
            return Err(Error::NonFinite("target centre"));
        }
        Ok(())
    }

    /// Offset along x of the far targets; keeps them more than `2 D` from the
    /// common target and beyond the spawn annulus.
    pub fn far_offset(&self) -> f64 {
        2.0 * self.d_work + SPAWN_OUTER_RADIUS
    }

    /// Draws the initial poses and routes. The same scenario always yields
    /// the same robots.
    pub fn spawn(&self) -> Result<Vec<RobotSpawn>> {
        self.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let o = self.target.centre;
        let min_gap = 2.0 * self.robot_radius;
        let mut robots: Vec<RobotSpawn> = Vec::with_capacity(self.n_robots);
        for placed in 0..self.n_robots {
            let mut position = None;
            for _ in 0..MAX_SPAWN_ATTEMPTS {
                let angle: f64 = rng.random_range(0.0..TAU);
                let radius: f64 = rng.random_range(SPAWN_INNER_RADIUS..=SPAWN_OUTER_RADIUS);
                let p = o + Vec2::from_angle(angle) * radius;
                if robots.iter().all(|r| r.pose.position.distance(p) >= min_gap) {
                    position = Some(p);
                    break;
                }
            }
            let Some(p) = position else {
                return Err(Error::SpawnFailed {
                    placed,
                    requested: self.n_robots,
                });
            };
            // (-pi, pi]
            let heading = PI - rng.random_range(0.0..TAU);
            let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let far = Target::new(o + Vec2::new(side * self.far_offset(), 0.0), self.target.radius);
            robots.push(RobotSpawn {
                pose: Pose::new(p, heading)?,
                route: vec![self.target, far],
            });
        }
        Ok(robots)
    }
}

/// Builds a default scenario and draws its robots in one go.
pub fn spawn_scenario(
    seed: u64,
    n_robots: usize,
    target_radius: f64,
    d_work: f64,
    kinematics: Kinematics,
) -> Result<(Scenario, Vec<RobotSpawn>)> {
    let scenario = Scenario {
        d_work,
        ..Scenario::new(seed, n_robots, target_radius, kinematics)
    };
    let robots = scenario.spawn()?;
    Ok((scenario, robots))
}
