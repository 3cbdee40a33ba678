use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use swarmgate_cli::batch::{run_job, scenario_for, to_csv};
use swarmgate_cli::plan::{ExperimentPlan, Job};
use swarmgate_cli::{bounds_table, parse_config, run_batch, write_trace, BoundsRange, PolicyKind, RUN_HEADER};
use swarmgate_core::engine::{DEFAULT_DT, DEFAULT_TIMEOUT};
use swarmgate_core::Kinematics;

#[derive(Parser)]
#[command(
    name = "swarmgate",
    version,
    about = "Swarm congestion-control simulations and throughput bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and print its metrics as a CSV row.
    Run {
        #[command(flatten)]
        sim: SimArgs,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every cell of a plan file and write runs.csv and summary.csv.
    Batch {
        plan: PathBuf,
        /// Output directory; overrides the plan's [output] dir.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Tabulate both throughput bounds as CSV.
    Bounds {
        /// Linear speed, m/s.
        #[arg(long, default_value_t = 1.0)]
        v: f64,
        #[arg(long, default_value_t = 3.0)]
        target_radius: f64,
        /// Robot spacings to evaluate, metres.
        #[arg(long, value_delimiter = ',', default_value = "3")]
        d: Vec<f64>,
        /// Orientation samples over [0, pi/3] for the hexagonal bound.
        #[arg(long, default_value_t = 12)]
        theta_steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one simulation and export poses as JSON lines.
    Trace {
        #[command(flatten)]
        sim: SimArgs,
        /// Emit every N-th step.
        #[arg(long, default_value_t = 1)]
        every: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PolicyArg {
    Sqf,
    Trvf,
    Baseline,
}

#[derive(Clone, Copy, ValueEnum)]
enum KinematicsArg {
    Holo,
    Nonholo,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    robots: usize,
    #[arg(long, value_enum, default_value_t = PolicyArg::Sqf)]
    policy: PolicyArg,
    /// Lane count for TRVF.
    #[arg(long, default_value_t = 5)]
    lanes: usize,
    #[arg(long, value_enum, default_value_t = KinematicsArg::Holo)]
    kinematics: KinematicsArg,
    #[arg(long, default_value_t = 3.0)]
    target_radius: f64,
    #[arg(long, default_value_t = DEFAULT_TIMEOUT)]
    timeout_s: f64,
    #[arg(long, default_value_t = DEFAULT_DT)]
    dt: f64,
}

impl SimArgs {
    /// Single-cell plan, validated like a plan file.
    fn plan(&self) -> Result<(ExperimentPlan, Job)> {
        let kind = match self.policy {
            PolicyArg::Sqf => PolicyKind::Sqf,
            PolicyArg::Trvf => PolicyKind::Trvf,
            PolicyArg::Baseline => PolicyKind::Baseline,
        };
        let plan = ExperimentPlan {
            policies: vec![kind],
            robots: vec![self.robots],
            target_radii: vec![self.target_radius],
            lanes: vec![self.lanes],
            seeds: 1,
            first_seed: self.seed,
            kinematics: match self.kinematics {
                KinematicsArg::Holo => Kinematics::Holonomic,
                KinematicsArg::Nonholo => Kinematics::Unicycle,
            },
            timeout_s: self.timeout_s,
            dt: self.dt,
            ..ExperimentPlan::default()
        };
        plan.validate()?;
        let job = plan.jobs()[0];
        Ok((plan, job))
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(text.as_bytes()).context("writing to stdout"),
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { sim, out } => {
            let (plan, job) = sim.plan()?;
            let row = run_job(&plan, &job, &plan.params);
            if let Some(e) = &row.error {
                bail!("run failed: {e}");
            }
            write_output(out.as_deref(), &to_csv(RUN_HEADER, &[row]))
        }
        Command::Batch { plan, out, workers } => {
            let text = fs::read_to_string(&plan).with_context(|| format!("reading {}", plan.display()))?;
            let parsed = parse_config(&text).with_context(|| format!("in {}", plan.display()))?;
            let dir = out
                .or_else(|| parsed.output_dir.clone())
                .unwrap_or_else(|| PathBuf::from("."));
            let workers = workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            let result = run_batch(&parsed, workers)?;
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            write_output(Some(&dir.join("runs.csv")), &result.runs_csv())?;
            write_output(Some(&dir.join("summary.csv")), &result.summary_csv())?;
            let failed = result.runs.iter().filter(|r| r.error.is_some()).count();
            eprintln!(
                "{} runs in {} cells written to {}{}",
                result.runs.len(),
                result.summaries.len(),
                dir.display(),
                if failed > 0 {
                    format!(" ({failed} runs errored)")
                } else {
                    String::new()
                }
            );
            Ok(())
        }
        Command::Bounds {
            v,
            target_radius,
            d,
            theta_steps,
            out,
        } => {
            let range = BoundsRange {
                v,
                s: target_radius,
                spacings: d,
                theta_steps,
            };
            write_output(out.as_deref(), &bounds_table(&range))
        }
        Command::Trace { sim, every, out } => {
            let (plan, job) = sim.plan()?;
            let scenario = scenario_for(&plan, &job);
            match out {
                Some(path) => {
                    let file = fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?;
                    write_trace(&scenario, job.policy, &plan.params, every, io::BufWriter::new(file))?;
                }
                None => {
                    write_trace(
                        &scenario,
                        job.policy,
                        &plan.params,
                        every,
                        io::BufWriter::new(io::stdout().lock()),
                    )?;
                }
            }
            Ok(())
        }
    }
}
