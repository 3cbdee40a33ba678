//! Experiment plans: a TOML file describing which cells to run.
//!
//! ```toml
//! kinematics = "nonholo"
//! seeds = 10
//! timeout_s = 1200
//!
//! [sweep]
//! policy = ["sqf", "baseline"]
//! robots = [30]
//! target_radius = [0.3]
//!
//! [params]
//! k_rep = 0.5
//!
//! [output]
//! dir = "results"
//! ```
//!
//! `policy`, `robots`, `target_radius` and `lanes` may also be given as a
//! single top-level value instead of a `[sweep]` list.

use std::f64::consts::TAU;
use std::path::PathBuf;

use serde::Deserialize;
use swarmgate_core::engine::{DEFAULT_DT, DEFAULT_TIMEOUT};
use swarmgate_core::trvf::{check_lanes, compute_turning_radius};
use swarmgate_core::{Kinematics, Params, Policy, DEFAULT_TARGET_RADIUS, DEFAULT_WORKING_RADIUS};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("malformed plan: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("invalid `{field}`: {reason}")]
    Field { field: &'static str, reason: String },
}

fn field_error(field: &'static str, reason: impl Into<String>) -> PlanError {
    PlanError::Field {
        field,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    Sqf,
    Trvf,
    Baseline,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Sqf => "sqf",
            PolicyKind::Trvf => "trvf",
            PolicyKind::Baseline => "baseline",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sqf" => Some(PolicyKind::Sqf),
            "trvf" => Some(PolicyKind::Trvf),
            "baseline" => Some(PolicyKind::Baseline),
            _ => None,
        }
    }

    pub fn with_lanes(self, lanes: usize) -> Policy {
        match self {
            PolicyKind::Sqf => Policy::Sqf,
            PolicyKind::Trvf => Policy::Trvf { lanes },
            PolicyKind::Baseline => Policy::Baseline,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub policies: Vec<PolicyKind>,
    pub robots: Vec<usize>,
    pub target_radii: Vec<f64>,
    /// Lane counts; only TRVF cells are multiplied by this sweep.
    pub lanes: Vec<usize>,
    pub seeds: u64,
    pub first_seed: u64,
    pub kinematics: Kinematics,
    pub timeout_s: f64,
    pub dt: f64,
    pub working_radius: f64,
    pub params: Params,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            policies: vec![PolicyKind::Sqf],
            robots: vec![20],
            target_radii: vec![DEFAULT_TARGET_RADIUS],
            lanes: vec![5],
            seeds: 1,
            first_seed: 0,
            kinematics: Kinematics::Holonomic,
            timeout_s: DEFAULT_TIMEOUT,
            dt: DEFAULT_DT,
            working_radius: DEFAULT_WORKING_RADIUS,
            params: Params::default(),
            output_dir: None,
        }
    }
}

/// One simulation to run: a cell of the sweep plus a seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Job {
    pub policy: Policy,
    pub robots: usize,
    pub target_radius: f64,
    pub seed: u64,
}

impl ExperimentPlan {
    /// Sweep cells in output order: policy, robots, target radius, lanes.
    pub fn cells(&self) -> Vec<(Policy, usize, f64)> {
        let mut cells = Vec::new();
        for &kind in &self.policies {
            for &n in &self.robots {
                for &s in &self.target_radii {
                    if kind == PolicyKind::Trvf {
                        cells.extend(self.lanes.iter().map(|&k| (kind.with_lanes(k), n, s)));
                    } else {
                        cells.push((kind.with_lanes(0), n, s));
                    }
                }
            }
        }
        cells
    }

    pub fn seed_list(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.seeds).map(move |i| self.first_seed.wrapping_add(i))
    }

    pub fn jobs(&self) -> Vec<Job> {
        self.cells()
            .into_iter()
            .flat_map(|(policy, robots, target_radius)| {
                self.seed_list().map(move |seed| Job {
                    policy,
                    robots,
                    target_radius,
                    seed,
                })
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), PlanError> {
        let nonempty = |field, len: usize| {
            if len == 0 {
                Err(field_error(field, "sweep must not be empty"))
            } else {
                Ok(())
            }
        };
        nonempty("policy", self.policies.len())?;
        nonempty("robots", self.robots.len())?;
        nonempty("target_radius", self.target_radii.len())?;
        nonempty("lanes", self.lanes.len())?;
        if self.seeds == 0 {
            return Err(field_error("seeds", "need at least one seed per cell"));
        }
        if self.robots.contains(&0) {
            return Err(field_error("robots", "robot counts must be at least 1"));
        }
        for (field, value) in [
            ("timeout_s", self.timeout_s),
            ("dt", self.dt),
            ("working_radius", self.working_radius),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(field_error(field, format!("must be finite and > 0, got {value}")));
            }
        }
        for &s in &self.target_radii {
            if !(s.is_finite() && s > 0.0) {
                return Err(field_error("target_radius", format!("must be finite and > 0, got {s}")));
            }
            if s >= self.working_radius {
                return Err(field_error(
                    "target_radius",
                    format!("{s} must be below the working radius {}", self.working_radius),
                ));
            }
        }
        for &k in &self.lanes {
            check_lanes(k).map_err(|e| field_error("lanes", e.to_string()))?;
        }
        self.params
            .validate()
            .map_err(|e| field_error("params", e.to_string()))?;
        if self.policies.contains(&PolicyKind::Trvf) {
            for &s in &self.target_radii {
                for &k in &self.lanes {
                    compute_turning_radius(s, self.params.i_default, TAU / k as f64).map_err(|e| {
                        field_error(
                            "target_radius",
                            format!("TRVF with lanes = {k} cannot serve target_radius = {s}: {e}"),
                        )
                    })?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPlan {
    policy: Option<String>,
    robots: Option<usize>,
    target_radius: Option<f64>,
    lanes: Option<usize>,
    kinematics: Option<String>,
    seeds: Option<u64>,
    first_seed: Option<u64>,
    timeout_s: Option<f64>,
    dt: Option<f64>,
    working_radius: Option<f64>,
    sweep: Option<RawSweep>,
    params: Option<RawParams>,
    output: Option<RawOutput>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    policy: Option<Vec<String>>,
    robots: Option<Vec<usize>>,
    target_radius: Option<Vec<f64>>,
    lanes: Option<Vec<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawParams {
    k_rep: Option<f64>,
    i_default: Option<f64>,
    i_min: Option<f64>,
    k_sqf: Option<f64>,
    k_trvf: Option<f64>,
    k_r: Option<f64>,
    v_max: Option<f64>,
    k_s: Option<f64>,
    k_o: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

/// A sweep value given either at the top level or under `[sweep]`, not both.
fn pick<T>(field: &'static str, scalar: Option<T>, list: Option<Vec<T>>, default: Vec<T>) -> Result<Vec<T>, PlanError> {
    match (scalar, list) {
        (Some(_), Some(_)) => Err(field_error(field, "given both at top level and in [sweep]")),
        (Some(v), None) => Ok(vec![v]),
        (None, Some(vs)) => Ok(vs),
        (None, None) => Ok(default),
    }
}

/// Parses and validates a plan. Unspecified values take their defaults.
pub fn parse_config(text: &str) -> Result<ExperimentPlan, PlanError> {
    let raw: RawPlan = toml::from_str(text)?;
    let defaults = ExperimentPlan::default();
    let sweep = raw.sweep.unwrap_or_default();

    let policies = pick("policy", raw.policy, sweep.policy, vec!["sqf".to_string()])?
        .iter()
        .map(|name| PolicyKind::parse(name).ok_or_else(|| field_error("policy", format!("unknown policy {name:?}"))))
        .collect::<Result<Vec<_>, _>>()?;

    let kinematics = match raw.kinematics {
        Some(name) => name
            .parse()
            .map_err(|_| field_error("kinematics", format!("unknown kinematics {name:?}")))?,
        None => defaults.kinematics,
    };

    let p = raw.params.unwrap_or_default();
    let base = Params::default();
    let params = Params {
        k_rep: p.k_rep.unwrap_or(base.k_rep),
        i_default: p.i_default.unwrap_or(base.i_default),
        i_min: p.i_min.unwrap_or(base.i_min),
        k_sqf: p.k_sqf.unwrap_or(base.k_sqf),
        k_trvf: p.k_trvf.unwrap_or(base.k_trvf),
        k_r: p.k_r.unwrap_or(base.k_r),
        v_max: p.v_max.unwrap_or(base.v_max),
        k_s: p.k_s.unwrap_or(base.k_s),
        k_o: p.k_o.unwrap_or(base.k_o),
    };

    let plan = ExperimentPlan {
        policies,
        robots: pick("robots", raw.robots, sweep.robots, defaults.robots)?,
        target_radii: pick(
            "target_radius",
            raw.target_radius,
            sweep.target_radius,
            defaults.target_radii,
        )?,
        lanes: pick("lanes", raw.lanes, sweep.lanes, defaults.lanes)?,
        seeds: raw.seeds.unwrap_or(defaults.seeds),
        first_seed: raw.first_seed.unwrap_or(defaults.first_seed),
        kinematics,
        timeout_s: raw.timeout_s.unwrap_or(defaults.timeout_s),
        dt: raw.dt.unwrap_or(defaults.dt),
        working_radius: raw.working_radius.unwrap_or(defaults.working_radius),
        params,
        output_dir: raw.output.and_then(|o| o.dir),
    };
    plan.validate()?;
    Ok(plan)
}
