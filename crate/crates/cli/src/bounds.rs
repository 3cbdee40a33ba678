//! Tables of the analytic throughput bounds.

use std::f64::consts::PI;

use serde::Serialize;
use swarmgate_core::trvf::{MAX_LANES, MIN_LANES};
use swarmgate_core::{hex_packing_bound, touch_and_run_bound, BoundParams};

use crate::batch::to_csv;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRange {
    pub v: f64,
    pub s: f64,
    pub spacings: Vec<f64>,
    /// Lattice orientations sampled evenly over `[0, pi/3]` for the hexagonal bound.
    pub theta_steps: usize,
}

impl Default for BoundsRange {
    fn default() -> Self {
        BoundsRange {
            v: 1.0,
            s: 3.0,
            spacings: vec![3.0],
            theta_steps: 12,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundRow {
    pub bound: &'static str,
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub theta: Option<f64>,
    pub v: f64,
    pub s: f64,
    pub d: f64,
    pub value: Option<f64>,
    /// `ok`, or why no value could be computed.
    pub status: String,
}

pub const BOUNDS_HEADER: &str = "bound,K,theta,v,s,d,value,status";

pub fn bound_rows(range: &BoundsRange) -> Vec<BoundRow> {
    let mut rows = Vec::new();
    for &d in &range.spacings {
        for k in MIN_LANES..=MAX_LANES {
            let p = BoundParams {
                v: range.v,
                s: range.s,
                d,
                k_lanes: k,
                ..BoundParams::default()
            };
            let (value, status) = match touch_and_run_bound(&p) {
                Ok(x) => (Some(x), "ok".to_string()),
                Err(e) => (None, format!("infeasible: {e}")),
            };
            rows.push(BoundRow {
                bound: "touch_and_run",
                k: Some(k),
                theta: None,
                v: range.v,
                s: range.s,
                d,
                value,
                status,
            });
        }
        let steps = range.theta_steps.max(1);
        for i in 0..=steps {
            let theta = PI / 3.0 * i as f64 / steps as f64;
            let p = BoundParams {
                v: range.v,
                s: range.s,
                d,
                theta,
                ..BoundParams::default()
            };
            let (value, status) = match hex_packing_bound(&p) {
                Ok(x) => (Some(x), "ok".to_string()),
                Err(e) => (None, e.to_string()),
            };
            rows.push(BoundRow {
                bound: "hex_packing",
                k: None,
                theta: Some(theta),
                v: range.v,
                s: range.s,
                d,
                value,
                status,
            });
        }
    }
    rows
}

pub fn bounds_table(range: &BoundsRange) -> String {
    to_csv(BOUNDS_HEADER, &bound_rows(range))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_table_values() {
        let rows = bound_rows(&BoundsRange::default());
        let tr: Vec<f64> = rows
            .iter()
            .filter(|r| r.bound == "touch_and_run")
            .map(|r| r.value.unwrap())
            .collect();
        for (got, want) in tr.iter().zip([0.994, 1.200, 1.099, 1.000]) {
            assert!((got - want).abs() <= 1e-3, "{got} vs {want}");
        }
        let hex: Vec<&BoundRow> = rows.iter().filter(|r| r.bound == "hex_packing").collect();
        assert_eq!(hex.len(), 13);
        let min = hex
            .iter()
            .min_by(|a, b| a.value.unwrap().total_cmp(&b.value.unwrap()))
            .unwrap();
        assert!((min.theta.unwrap() - PI / 6.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_rows_are_kept() {
        let rows = bound_rows(&BoundsRange {
            spacings: vec![5.0],
            ..BoundsRange::default()
        });
        let k6 = rows.iter().find(|r| r.k == Some(6)).unwrap();
        assert_eq!(k6.value, None);
        assert!(k6.status.starts_with("infeasible"));
        assert_eq!(rows.iter().filter(|r| r.bound == "touch_and_run").count(), 4);
    }

    #[test]
    fn large_spacing_drives_bounds_down() {
        let rows = bound_rows(&BoundsRange {
            spacings: vec![1e6],
            s: 3.0,
            ..BoundsRange::default()
        });
        for r in rows.iter().filter_map(|r| r.value) {
            assert!(r < 1e-5);
        }
    }
}
