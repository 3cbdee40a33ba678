//! Benchmark fixtures shared by the criterion targets.

use swarmgate_core::{Kinematics, Scenario};

/// Holonomic scenario with a short timeout, sized for timing a fixed amount of work.
pub fn bench_scenario(n_robots: usize, seed: u64, timeout: f64) -> Scenario {
    Scenario {
        timeout,
        ..Scenario::new(seed, n_robots, 3.0, Kinematics::Holonomic)
    }
}
