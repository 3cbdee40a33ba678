//! Decentralised congestion control for robot swarms that all need to visit
//! one circular target area.
//!
//! Two controllers are provided. [`sqf`] funnels robots into a single queue
//! above the target; [`trvf`] splits the approach into `K` lanes that each
//! touch the target and turn away. [`engine`] simulates either (or a pure
//! attraction baseline) and [`metrics`] turns the results into throughput
//! figures and compares them with analytic bounds.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod guidance;
pub mod metrics;
pub mod params;
pub mod policy;
pub mod sqf;
pub mod target;
pub mod trvf;

pub use engine::{run_simulation, Kinematics, RunRecord, Scenario, Simulation};
pub use error::{Error, Result};
pub use geometry::{normalize_angle, Pose, Vec2};
pub use metrics::{hex_packing_bound, summarize, throughput, touch_and_run_bound, BoundParams, RunMetrics, Summary};
pub use params::{Params, DEFAULT_TARGET_RADIUS, DEFAULT_WORKING_RADIUS};
pub use policy::{Policy, PolicyState};
pub use target::Target;
