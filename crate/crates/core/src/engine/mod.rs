//! Scenario generation, neighbour sensing, kinematics and the simulation loop.

mod grid;
mod kinematics;
mod scenario;
mod sim;

pub use grid::SpatialGrid;
pub use kinematics::{step_holonomic, step_unicycle};
pub use scenario::{
    spawn_scenario, Kinematics, RobotSpawn, Scenario, DEFAULT_DT, DEFAULT_TIMEOUT, ROBOT_RADIUS, SPAWN_INNER_RADIUS,
    SPAWN_OUTER_RADIUS,
};
pub use sim::{run_simulation, RobotBody, RunRecord, Simulation};
