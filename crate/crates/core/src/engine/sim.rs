//! The synchronous simulation loop.

use crate::error::{Error, Result};
use crate::fields::repulsive_force;
use crate::geometry::{Pose, Vec2};
use crate::params::Params;
use crate::policy::{Policy, PolicyState};
use crate::target::Target;

use super::grid::SpatialGrid;
use super::kinematics::{step_holonomic, step_unicycle};
use super::scenario::{Kinematics, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct RobotBody {
    pub id: usize,
    pub pose: Pose,
    pub route: Vec<Target>,
    pub state: PolicyState,
    /// First time the robot's centre was within the common target.
    pub arrival: Option<f64>,
    /// First time after arrival the robot was outside the working radius.
    pub exit: Option<f64>,
    /// Set once the whole route is done; the robot no longer moves.
    pub parked: bool,
}

impl RobotBody {
    pub fn done(&self) -> bool {
        self.exit.is_some()
    }
}

/// Outcome of one run. Times are seconds of simulated time.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub arrivals: Vec<Option<f64>>,
    pub exits: Vec<Option<f64>>,
    /// Every robot arrived and left before the timeout.
    pub completed: bool,
    pub steps: u64,
    pub sim_time: f64,
    /// Mean distance to the closest other robot, sampled for robots inside
    /// the working radius.
    pub mean_nn_distance: Option<f64>,
    /// Mean realised speed of robots inside the working radius.
    pub mean_speed: Option<f64>,
    /// Robot-steps with two bodies overlapping, counted once per pair.
    pub overlap_events: u64,
}

impl RunRecord {
    pub fn n_robots(&self) -> usize {
        self.arrivals.len()
    }

    /// Recorded arrival times in ascending order.
    pub fn sorted_arrivals(&self) -> Vec<f64> {
        let mut times: Vec<f64> = self.arrivals.iter().flatten().copied().collect();
        times.sort_by(f64::total_cmp);
        times
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Mean {
    sum: f64,
    count: u64,
}

impl Mean {
    fn add(&mut self, x: f64) {
        self.sum += x;
        self.count += 1;
    }

    fn value(self) -> Option<f64> {
        (self.count > 0).then(|| self.sum / self.count as f64)
    }
}

/// Step-by-step driver. [`run_simulation`] wraps it; use it directly to
/// observe intermediate poses.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    params: Params,
    robots: Vec<RobotBody>,
    steps: u64,
    max_steps: u64,
    nn: Mean,
    speed: Mean,
    overlap_events: u64,
    finished: bool,
}

impl Simulation {
    pub fn new(scenario: &Scenario, policy: Policy, params: &Params) -> Result<Self> {
        params.validate()?;
        policy.validate()?;
        if let Policy::Trvf { lanes } = policy {
            // surfaces infeasible lane geometry before any robot moves
            crate::trvf::compute_lane(
                scenario.target.centre,
                scenario.target.radius,
                scenario.d_work,
                params.i_default,
                1,
                lanes,
            )?;
        }
        let robots = scenario
            .spawn()?
            .into_iter()
            .enumerate()
            .map(|(id, spawn)| RobotBody {
                id,
                pose: spawn.pose,
                route: spawn.route,
                state: policy.initial_state(),
                arrival: None,
                exit: None,
                parked: false,
            })
            .collect();
        Ok(Simulation {
            scenario: *scenario,
            params: *params,
            robots,
            steps: 0,
            max_steps: (scenario.timeout / scenario.dt).ceil() as u64,
            nn: Mean::default(),
            speed: Mean::default(),
            overlap_events: 0,
            finished: false,
        })
    }

    pub fn robots(&self) -> &[RobotBody] {
        &self.robots
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.scenario.dt
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Neighbour grid over the current positions.
    pub fn grid(&self) -> SpatialGrid {
        let positions: Vec<Vec2> = self.robots.iter().map(|r| r.pose.position).collect();
        SpatialGrid::new(&positions, self.params.i_default)
    }

    /// Advances every robot by one time step. Returns `true` once the run is over.
    pub fn step(&mut self) -> Result<bool> {
        if self.finished {
            return Ok(true);
        }
        let sc = self.scenario;
        let o = sc.target.centre;
        let grid = self.grid();
        let overlap = 2.0 * sc.robot_radius;

        let mut inside = vec![false; self.robots.len()];
        for (i, robot) in self.robots.iter().enumerate() {
            self.overlap_events += grid.neighbors_of(i, overlap).into_iter().filter(|&j| j > i).count() as u64;
            if robot.pose.position.distance(o) <= sc.d_work {
                inside[i] = true;
                if let Some(d) = grid.nearest_distance(i) {
                    self.nn.add(d);
                }
            }
        }

        let mut next = Vec::with_capacity(self.robots.len());
        for (i, robot) in self.robots.iter_mut().enumerate() {
            if robot.parked {
                next.push(robot.pose);
                continue;
            }
            let out = robot.state.step(robot.pose, &robot.route, sc.d_work, &self.params)?;
            if robot.state.is_complete(robot.route.len()) {
                robot.parked = true;
                next.push(robot.pose);
                continue;
            }
            let neighbours = grid.sense_neighbors(i, out.influence);
            let force =
                out.force + repulsive_force(robot.pose.position, &neighbours, out.influence, self.params.k_rep)?;
            if !force.is_finite() {
                return Err(Error::NonFiniteForce {
                    robot: i,
                    step: self.steps,
                });
            }
            next.push(match sc.kinematics {
                Kinematics::Holonomic => step_holonomic(robot.pose, force, self.params.v_max, sc.dt),
                Kinematics::Unicycle => step_unicycle(robot.pose, force, self.params.v_max, self.params.k_r, sc.dt),
            });
        }

        self.steps += 1;
        let now = self.time();
        for ((robot, pose), was_inside) in self.robots.iter_mut().zip(next).zip(inside) {
            if was_inside {
                self.speed.add(robot.pose.position.distance(pose.position) / sc.dt);
            }
            robot.pose = pose;
            let d = pose.position.distance(o);
            match (robot.arrival, robot.exit) {
                (None, _) if d <= sc.target.radius => robot.arrival = Some(now),
                (Some(_), None) if d > sc.d_work => robot.exit = Some(now),
                _ => {}
            }
        }

        self.finished = self.robots.iter().all(RobotBody::done) || self.steps >= self.max_steps;
        Ok(self.finished)
    }

    pub fn finish(self) -> RunRecord {
        RunRecord {
            arrivals: self.robots.iter().map(|r| r.arrival).collect(),
            exits: self.robots.iter().map(|r| r.exit).collect(),
            completed: self.robots.iter().all(RobotBody::done),
            steps: self.steps,
            sim_time: self.steps as f64 * self.scenario.dt,
            mean_nn_distance: self.nn.value(),
            mean_speed: self.speed.value(),
            overlap_events: self.overlap_events,
        }
    }
}

/// Runs `policy` on `scenario` until every robot has left the common target
/// or the timeout is reached.
pub fn run_simulation(scenario: &Scenario, policy: Policy, params: &Params) -> Result<RunRecord> {
    let mut sim = Simulation::new(scenario, policy, params)?;
    while !sim.step()? {}
    Ok(sim.finish())
}
