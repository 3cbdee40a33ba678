//! Experiment harness: plan files, batch runs, bound tables and traces.

pub mod batch;
pub mod bounds;
pub mod plan;
pub mod trace;

pub use batch::{run_batch, BatchOutput, RunRow, SummaryRow, RUN_HEADER, SUMMARY_HEADER};
pub use bounds::{bounds_table, BoundsRange};
pub use plan::{parse_config, ExperimentPlan, PlanError, PolicyKind};
pub use trace::write_trace;
