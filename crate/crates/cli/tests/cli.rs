use std::fs;
use std::process::Command;

use swarmgate_cli::{parse_config, run_batch, RUN_HEADER, SUMMARY_HEADER};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_swarmgate"))
}

#[test]
fn run_header_is_stable() {
    assert_eq!(
        RUN_HEADER,
        "policy,kinematics,n,s,K,seed,completed,throughput,reaching_s,avg_leaving_s,total_s,mean_nn_dist_m,mean_speed_mps,overlap_events,error"
    );
    assert!(SUMMARY_HEADER.starts_with("policy,kinematics,n,s,K,runs,failure_fraction,"));
}

#[test]
fn two_policies_two_sizes_three_seeds() {
    let plan = parse_config("seeds = 3\n[sweep]\npolicy = [\"sqf\", \"baseline\"]\nrobots = [5, 10]\n").unwrap();
    let out = run_batch(&plan, 2).unwrap();
    assert_eq!(out.runs.len(), 12);
    assert_eq!(out.summaries.len(), 4);
    assert_eq!(out.runs_csv().lines().count(), 13);
    assert_eq!(out.summary_csv().lines().count(), 5);
    let cells: Vec<(&str, usize)> = out.summaries.iter().map(|s| (s.policy, s.n)).collect();
    assert_eq!(cells, [("sqf", 5), ("sqf", 10), ("baseline", 5), ("baseline", 10)]);
    assert!(out.runs.iter().all(|r| r.completed && r.error.is_none()));
    let seeds: Vec<u64> = out.runs[..3].iter().map(|r| r.seed).collect();
    assert_eq!(seeds, [0, 1, 2]);
    let sqf = &out.summaries[0];
    assert!(sqf.bound_lo.unwrap() <= sqf.bound_mean.unwrap() && sqf.bound_mean.unwrap() <= sqf.bound_hi.unwrap());
    assert!(out.summaries[2].bound_mean.is_none());
}

#[test]
fn batch_command_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let plan = dir.path().join("plan.toml");
    fs::write(
        &plan,
        "robots = 8\nseeds = 2\n[sweep]\npolicy = [\"trvf\"]\nlanes = [3, 6]\n[output]\ndir = \"ignored\"\n",
    )
    .unwrap();
    let out = dir.path().join("results");
    let status = binary()
        .args(["batch", plan.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let runs = fs::read_to_string(out.join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 5);
    assert!(runs.lines().nth(1).unwrap().starts_with("trvf,holo,8,3.0,3,0,true,"));
    assert!(runs.lines().nth(3).unwrap().starts_with("trvf,holo,8,3.0,6,0,true,"));
    assert_eq!(fs::read_to_string(out.join("summary.csv")).unwrap().lines().count(), 3);
}

#[test]
fn bad_plans_fail_the_command() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in ["lanes = 7", "speed = 3", "policy = \"trvf\"\ntarget_radius = 0.3"]
        .iter()
        .enumerate()
    {
        let plan = dir.path().join(format!("bad{i}.toml"));
        fs::write(&plan, text).unwrap();
        let out = binary()
            .args(["batch", plan.to_str().unwrap(), "--out", dir.path().to_str().unwrap()])
            .output()
            .unwrap();
        assert!(!out.status.success(), "{text}");
        let err = String::from_utf8_lossy(&out.stderr);
        let field = ["lanes", "speed", "target_radius"][i];
        assert!(err.contains(field), "{err}");
    }
}

#[test]
fn run_command_prints_one_row() {
    let out = binary()
        .args([
            "run",
            "--robots",
            "4",
            "--policy",
            "baseline",
            "--kinematics",
            "nonholo",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], RUN_HEADER);
    assert!(lines[1].starts_with("baseline,nonholo,4,3.0,,0,true,"));
}

#[test]
fn timed_out_run_leaves_times_blank() {
    let out = binary()
        .args(["run", "--robots", "30", "--timeout-s", "5", "--dt", "0.05"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(fields[6], "false");
    assert_eq!(fields[8], "");
    assert_eq!(fields[10], "");
}

#[test]
fn bounds_command_flags_infeasible_rows() {
    let out = binary()
        .args(["bounds", "--d", "3,5", "--theta-steps", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    // per spacing: four lane counts and three orientations
    assert_eq!(text.lines().count(), 1 + 2 * (4 + 3));
    assert!(text
        .lines()
        .any(|l| l.starts_with("touch_and_run,6,,1.0,3.0,5.0,,\"infeasible")));
}

#[test]
fn trace_command_emits_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.jsonl");
    let status = binary()
        .args([
            "trace",
            "--robots",
            "2",
            "--timeout-s",
            "1",
            "--policy",
            "trvf",
            "--out",
            path.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 2 * 11);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        for key in ["step", "t", "id", "x", "y", "heading", "mode"] {
            assert!(v.get(key).is_some(), "{line}");
        }
    }
}
