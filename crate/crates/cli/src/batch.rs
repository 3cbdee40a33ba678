//! Batch execution of a plan and the CSV files it produces.

use std::f64::consts::FRAC_PI_6;

use rayon::prelude::*;
use serde::Serialize;
use swarmgate_core::metrics::Stat;
use swarmgate_core::{
    hex_packing_bound, run_simulation, summarize, touch_and_run_bound, BoundParams, Kinematics, Params, Policy,
    RunMetrics, RunRecord, Scenario,
};

use crate::plan::{ExperimentPlan, Job};

/// One line of the per-run CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub policy: &'static str,
    pub kinematics: &'static str,
    pub n: usize,
    pub s: f64,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub seed: u64,
    pub completed: bool,
    pub throughput: Option<f64>,
    pub reaching_s: Option<f64>,
    pub avg_leaving_s: Option<f64>,
    pub total_s: Option<f64>,
    pub mean_nn_dist_m: Option<f64>,
    pub mean_speed_mps: Option<f64>,
    pub overlap_events: Option<u64>,
    pub error: Option<String>,
}

pub const RUN_HEADER: &str = "policy,kinematics,n,s,K,seed,completed,throughput,reaching_s,avg_leaving_s,total_s,mean_nn_dist_m,mean_speed_mps,overlap_events,error";

impl RunRow {
    pub fn new(job: &Job, kinematics: Kinematics, outcome: &Result<RunRecord, swarmgate_core::Error>) -> Self {
        let mut row = RunRow {
            policy: job.policy.name(),
            kinematics: kinematics.name(),
            n: job.robots,
            s: job.target_radius,
            k: job.policy.lanes(),
            seed: job.seed,
            completed: false,
            throughput: None,
            reaching_s: None,
            avg_leaving_s: None,
            total_s: None,
            mean_nn_dist_m: None,
            mean_speed_mps: None,
            overlap_events: None,
            error: None,
        };
        match outcome {
            Ok(record) => {
                let m = RunMetrics::from_record(record);
                row.completed = m.completed;
                row.throughput = m.throughput;
                row.reaching_s = m.reaching_time;
                row.avg_leaving_s = m.avg_leaving_time;
                row.total_s = m.total_time;
                row.mean_nn_dist_m = record.mean_nn_distance;
                row.mean_speed_mps = record.mean_speed;
                row.overlap_events = Some(record.overlap_events);
            }
            Err(e) => row.error = Some(e.to_string()),
        }
        row
    }

    fn metrics(&self) -> RunMetrics {
        RunMetrics {
            completed: self.completed,
            throughput: self.throughput,
            reaching_time: self.reaching_s,
            avg_leaving_time: self.avg_leaving_s,
            total_time: self.total_s,
        }
    }
}

/// One line of the per-cell summary CSV. Statistics cover completed runs;
/// the `bound_*` columns evaluate the policy's throughput bound at the mean
/// spacing and speed, and at one standard deviation either side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub policy: &'static str,
    pub kinematics: &'static str,
    pub n: usize,
    pub s: f64,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub runs: usize,
    pub failure_fraction: f64,
    pub throughput_mean: Option<f64>,
    pub throughput_std: Option<f64>,
    pub throughput_ci99: Option<f64>,
    pub reaching_s_mean: Option<f64>,
    pub reaching_s_ci99: Option<f64>,
    pub avg_leaving_s_mean: Option<f64>,
    pub avg_leaving_s_ci99: Option<f64>,
    pub total_s_mean: Option<f64>,
    pub total_s_ci99: Option<f64>,
    pub mean_nn_dist_m: Option<f64>,
    pub mean_speed_mps: Option<f64>,
    pub bound_mean: Option<f64>,
    pub bound_lo: Option<f64>,
    pub bound_hi: Option<f64>,
}

pub const SUMMARY_HEADER: &str = "policy,kinematics,n,s,K,runs,failure_fraction,throughput_mean,throughput_std,throughput_ci99,reaching_s_mean,reaching_s_ci99,avg_leaving_s_mean,avg_leaving_s_ci99,total_s_mean,total_s_ci99,mean_nn_dist_m,mean_speed_mps,bound_mean,bound_lo,bound_hi";

/// Throughput bound for `policy` at spacing `d` and speed `v`; the baseline has none.
pub fn policy_bound(policy: Policy, v: f64, s: f64, d: f64) -> Option<f64> {
    let p = BoundParams {
        v,
        s,
        d,
        theta: FRAC_PI_6,
        k_lanes: policy.lanes().unwrap_or(5),
    };
    match policy {
        Policy::Sqf => hex_packing_bound(&p).ok(),
        Policy::Trvf { .. } => touch_and_run_bound(&p).ok(),
        Policy::Baseline => None,
    }
}

fn summary_row(policy: Policy, kinematics: Kinematics, n: usize, s: f64, rows: &[RunRow]) -> SummaryRow {
    let metrics: Vec<RunMetrics> = rows.iter().map(RunRow::metrics).collect();
    let summary = summarize(&metrics).expect("every cell has at least one seed");
    let completed: Vec<&RunRow> = rows.iter().filter(|r| r.completed).collect();
    let nn = Stat::of(&completed.iter().filter_map(|r| r.mean_nn_dist_m).collect::<Vec<_>>());
    let speed = Stat::of(&completed.iter().filter_map(|r| r.mean_speed_mps).collect::<Vec<_>>());
    let (bound_mean, bound_lo, bound_hi) = match (nn, speed) {
        (Some(d), Some(v)) => (
            policy_bound(policy, v.mean, s, d.mean),
            // the bounds fall with spacing and rise with speed
            policy_bound(policy, v.mean - v.std, s, d.mean + d.std),
            policy_bound(policy, v.mean + v.std, s, d.mean - d.std),
        ),
        _ => (None, None, None),
    };
    let mean = |s: Option<Stat>| s.map(|s| s.mean);
    let ci = |s: Option<Stat>| s.map(|s| s.ci99);
    SummaryRow {
        policy: policy.name(),
        kinematics: kinematics.name(),
        n,
        s,
        k: policy.lanes(),
        runs: summary.runs,
        failure_fraction: summary.failure_fraction,
        throughput_mean: mean(summary.throughput),
        throughput_std: summary.throughput.map(|s| s.std),
        throughput_ci99: ci(summary.throughput),
        reaching_s_mean: mean(summary.reaching_time),
        reaching_s_ci99: ci(summary.reaching_time),
        avg_leaving_s_mean: mean(summary.avg_leaving_time),
        avg_leaving_s_ci99: ci(summary.avg_leaving_time),
        total_s_mean: mean(summary.total_time),
        total_s_ci99: ci(summary.total_time),
        mean_nn_dist_m: mean(nn),
        mean_speed_mps: mean(speed),
        bound_mean,
        bound_lo,
        bound_hi,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchOutput {
    pub runs: Vec<RunRow>,
    pub summaries: Vec<SummaryRow>,
}

impl BatchOutput {
    pub fn runs_csv(&self) -> String {
        to_csv(RUN_HEADER, &self.runs)
    }

    pub fn summary_csv(&self) -> String {
        to_csv(SUMMARY_HEADER, &self.summaries)
    }
}

/// Scenario for one job of `plan`.
pub fn scenario_for(plan: &ExperimentPlan, job: &Job) -> Scenario {
    Scenario {
        d_work: plan.working_radius,
        dt: plan.dt,
        timeout: plan.timeout_s,
        ..Scenario::new(job.seed, job.robots, job.target_radius, plan.kinematics)
    }
}

pub fn run_job(plan: &ExperimentPlan, job: &Job, params: &Params) -> RunRow {
    let outcome = run_simulation(&scenario_for(plan, job), job.policy, params);
    RunRow::new(job, plan.kinematics, &outcome)
}

/// Runs every job of `plan` on up to `workers` threads. Rows come back in
/// plan order whatever the scheduling; failed runs are recorded, not raised.
pub fn run_batch(plan: &ExperimentPlan, workers: usize) -> Result<BatchOutput, rayon::ThreadPoolBuildError> {
    let jobs = plan.jobs();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    let runs: Vec<RunRow> = pool.install(|| jobs.par_iter().map(|job| run_job(plan, job, &plan.params)).collect());

    let per_cell = plan.seeds as usize;
    let summaries = plan
        .cells()
        .into_iter()
        .zip(runs.chunks(per_cell))
        .map(|((policy, n, s), rows)| summary_row(policy, plan.kinematics, n, s, rows))
        .collect();
    Ok(BatchOutput { runs, summaries })
}

/// Serialises `rows` under `header`. Writing to memory cannot fail.
pub fn to_csv<T: Serialize>(header: &str, rows: &[T]) -> String {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for row in rows {
        out.serialize(row).expect("in-memory csv write");
    }
    let body = String::from_utf8(out.into_inner().expect("in-memory csv flush")).expect("csv output is utf-8");
    format!("{header}\n{body}")
}
