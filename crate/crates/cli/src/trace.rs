//! Per-step pose export as JSON lines.

use std::io::Write;

use serde::Serialize;
use swarmgate_core::{Params, Policy, Scenario, Simulation};

#[derive(Debug, Serialize)]
struct TraceLine<'a> {
    step: u64,
    t: f64,
    id: usize,
    x: f64,
    y: f64,
    heading: f64,
    mode: &'a str,
}

/// Runs the simulation, writing one line per robot for the initial state and
/// every `every`-th step after it. Returns the number of steps simulated.
pub fn write_trace<W: Write>(
    scenario: &Scenario,
    policy: Policy,
    params: &Params,
    every: u64,
    mut out: W,
) -> anyhow::Result<u64> {
    let mut sim = Simulation::new(scenario, policy, params)?;
    let every = every.max(1);
    emit(&sim, &mut out)?;
    loop {
        let finished = sim.step()?;
        if finished || sim.steps() % every == 0 {
            emit(&sim, &mut out)?;
        }
        if finished {
            break;
        }
    }
    out.flush()?;
    Ok(sim.steps())
}

fn emit<W: Write>(sim: &Simulation, out: &mut W) -> anyhow::Result<()> {
    for robot in sim.robots() {
        let line = TraceLine {
            step: sim.steps(),
            t: sim.time(),
            id: robot.id,
            x: robot.pose.position.x,
            y: robot.pose.position.y,
            heading: robot.pose.heading,
            mode: robot.state.mode_name(),
        };
        serde_json::to_writer(&mut *out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
