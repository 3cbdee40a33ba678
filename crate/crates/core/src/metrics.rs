//! Run metrics, their aggregation over repeated runs, and the analytic
//! throughput bounds for the two queueing strategies.

use std::f64::consts::{FRAC_PI_6, PI, TAU};

use crate::engine::RunRecord;
use crate::error::{check_positive, Error, Result};
use crate::trvf::{check_lanes, compute_turning_radius};

/// Two-sided 99% quantile of the standard normal.
pub const Z_99: f64 = 2.5758293035489004;

/// Arrivals per second: `(N - 1) / (t_N - t_1)` over sorted arrival times.
pub fn throughput(arrival_times: &[f64]) -> Result<f64> {
    let n = arrival_times.len();
    if n < 2 {
        return Err(Error::InsufficientArrivals(n));
    }
    if arrival_times.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite("arrival times"));
    }
    if arrival_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::UnsortedArrivals);
    }
    let span = arrival_times[n - 1] - arrival_times[0];
    if span <= 0.0 {
        return Err(Error::InsufficientArrivals(n));
    }
    Ok((n - 1) as f64 / span)
}

/// Time the last robot first reached the target.
pub fn reaching_time(record: &RunRecord) -> Result<f64> {
    if !record.completed {
        return Err(Error::IncompleteRun);
    }
    max_of(record.arrivals.iter().flatten().copied())
}

/// Time the last robot left the working radius.
pub fn total_time(record: &RunRecord) -> Result<f64> {
    if !record.completed {
        return Err(Error::IncompleteRun);
    }
    max_of(record.exits.iter().flatten().copied())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeavingTime {
    pub seconds: f64,
    /// Some robots never left; the mean covers only those that did.
    pub partial: bool,
}

/// Mean time from arrival to leaving the working radius.
pub fn avg_leaving_time(record: &RunRecord) -> Result<LeavingTime> {
    let spans: Vec<f64> = record
        .arrivals
        .iter()
        .zip(&record.exits)
        .filter_map(|(a, e)| Some((*e)? - (*a)?))
        .collect();
    if spans.is_empty() {
        return Err(Error::IncompleteRun);
    }
    Ok(LeavingTime {
        seconds: spans.iter().sum::<f64>() / spans.len() as f64,
        partial: spans.len() < record.n_robots(),
    })
}

fn max_of(times: impl Iterator<Item = f64>) -> Result<f64> {
    times.reduce(f64::max).ok_or(Error::IncompleteRun)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMetrics {
    pub completed: bool,
    pub throughput: Option<f64>,
    pub reaching_time: Option<f64>,
    pub avg_leaving_time: Option<f64>,
    pub total_time: Option<f64>,
}

impl RunMetrics {
    /// Throughput and leaving time are reported for incomplete runs when
    /// enough robots got through; reaching and total time are not.
    pub fn from_record(record: &RunRecord) -> Self {
        RunMetrics {
            completed: record.completed,
            throughput: throughput(&record.sorted_arrivals()).ok(),
            reaching_time: reaching_time(record).ok(),
            avg_leaving_time: avg_leaving_time(record).ok().map(|l| l.seconds),
            total_time: total_time(record).ok(),
        }
    }
}

/// Inputs of the throughput bounds. `d` is the spacing between robots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub v: f64,
    pub s: f64,
    pub d: f64,
    pub theta: f64,
    pub k_lanes: usize,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            v: 1.0,
            s: 3.0,
            d: 3.0,
            theta: FRAC_PI_6,
            k_lanes: 5,
        }
    }
}

/// Throughput of robots packed hexagonally at spacing `d` crossing the
/// target at speed `v`, for lattice orientation `theta`. Smallest at
/// `theta = pi / 6`. Negative values are returned unchanged.
pub fn hex_packing_bound(p: &BoundParams) -> Result<f64> {
    check_positive("d", p.d)?;
    let sqrt3 = 3f64.sqrt();
    Ok(4.0 * p.v * p.s / (sqrt3 * p.d * p.d) - 2.0 * p.v * (p.theta - FRAC_PI_6).cos() / (sqrt3 * p.d))
}

/// Asymptotic throughput of `K` lanes each carrying one robot per
/// `max(d, d')` metres of travel, where `d'` is the along-path spacing
/// needed for consecutive robots on the turning circle to stay `d` apart.
pub fn touch_and_run_bound(p: &BoundParams) -> Result<f64> {
    check_lanes(p.k_lanes)?;
    check_positive("v", p.v)?;
    check_positive("d", p.d)?;
    let alpha = TAU / p.k_lanes as f64;
    let r = compute_turning_radius(p.s, p.d, alpha)?;
    let chord = 2.0 * r * (alpha / 2.0).cos();
    let d_prime = if chord < p.d {
        r * (PI - alpha) + (p.d - chord) / (alpha / 2.0).sin()
    } else {
        2.0 * r * (p.d / (2.0 * r)).min(1.0).asin()
    };
    Ok(p.k_lanes as f64 * p.v / p.d.max(d_prime))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stat {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation, zero for a single value.
    pub std: f64,
    /// Half-width of the normal-theory 99% confidence interval.
    pub ci99: f64,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        let n = values.len();
        if n == 0 {
            return None;
        }
        let mean = values.iter().sum::<f64>() / n as f64;
        let std = if n > 1 {
            (values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Some(Stat {
            n,
            mean,
            std,
            ci99: Z_99 * std / (n as f64).sqrt(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub runs: usize,
    pub failure_fraction: f64,
    pub throughput: Option<Stat>,
    pub reaching_time: Option<Stat>,
    pub avg_leaving_time: Option<Stat>,
    pub total_time: Option<Stat>,
}

/// Per-metric statistics over the completed runs, plus the fraction of runs
/// that did not complete.
pub fn summarize(runs: &[RunMetrics]) -> Result<Summary> {
    if runs.is_empty() {
        return Err(Error::InvalidParam {
            name: "runs",
            reason: "nothing to summarize".into(),
        });
    }
    let done: Vec<&RunMetrics> = runs.iter().filter(|r| r.completed).collect();
    let stat = |get: fn(&RunMetrics) -> Option<f64>| Stat::of(&done.iter().filter_map(|r| get(r)).collect::<Vec<_>>());
    Ok(Summary {
        runs: runs.len(),
        failure_fraction: (runs.len() - done.len()) as f64 / runs.len() as f64,
        throughput: stat(|r| r.throughput),
        reaching_time: stat(|r| r.reaching_time),
        avg_leaving_time: stat(|r| r.avg_leaving_time),
        total_time: stat(|r| r.total_time),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn record(arrivals: &[Option<f64>], exits: &[Option<f64>], completed: bool) -> RunRecord {
        RunRecord {
            arrivals: arrivals.to_vec(),
            exits: exits.to_vec(),
            completed,
            steps: 0,
            sim_time: 0.0,
            mean_nn_distance: None,
            mean_speed: None,
            overlap_events: 0,
        }
    }

    fn bound(d: f64, k: usize) -> BoundParams {
        BoundParams {
            d,
            k_lanes: k,
            ..BoundParams::default()
        }
    }

    #[test]
    fn throughput_examples() {
        assert_eq!(throughput(&[10.0, 12.0, 14.0, 16.0]).unwrap(), 0.5);
        assert_eq!(throughput(&[0.0, 1.0]).unwrap(), 1.0);
        assert_abs_diff_eq!(throughput(&[5.0, 5.0 + 1e-6]).unwrap(), 1e6, epsilon = 1e-3);
        assert_eq!(throughput(&[1.0]), Err(Error::InsufficientArrivals(1)));
        assert_eq!(throughput(&[2.0, 1.0]), Err(Error::UnsortedArrivals));
        assert_eq!(throughput(&[1.0, 1.0, 2.0]).unwrap(), 2.0);
    }

    #[test]
    fn timing_examples() {
        let r = record(&[Some(10.0), Some(20.0)], &[Some(15.0), Some(30.0)], true);
        assert_eq!(reaching_time(&r).unwrap(), 20.0);
        assert_eq!(
            avg_leaving_time(&r).unwrap(),
            LeavingTime {
                seconds: 7.5,
                partial: false
            }
        );
        assert_eq!(total_time(&r).unwrap(), 30.0);

        let r = record(&[Some(10.0)], &[Some(12.0)], true);
        assert_eq!(reaching_time(&r).unwrap(), 10.0);
        assert_eq!(avg_leaving_time(&r).unwrap().seconds, 2.0);
        assert_eq!(total_time(&r).unwrap(), 12.0);

        let r = record(&[Some(10.0), Some(20.0), None], &[Some(15.0), None, None], false);
        assert_eq!(reaching_time(&r), Err(Error::IncompleteRun));
        assert_eq!(total_time(&r), Err(Error::IncompleteRun));
        assert_eq!(
            avg_leaving_time(&r).unwrap(),
            LeavingTime {
                seconds: 5.0,
                partial: true
            }
        );
        let m = RunMetrics::from_record(&r);
        assert_eq!(m.throughput, Some(0.1));
        assert_eq!(m.reaching_time, None);
    }

    #[test]
    fn hex_bound_examples() {
        let p = BoundParams {
            theta: FRAC_PI_6,
            ..bound(3.0, 5)
        };
        assert_abs_diff_eq!(hex_packing_bound(&p).unwrap(), 0.3849001794597505, epsilon = 1e-12);
        assert_abs_diff_eq!(hex_packing_bound(&bound(6.0, 5)).unwrap(), 0.0, epsilon = 1e-15);
        assert!(hex_packing_bound(&bound(0.0, 5)).is_err());
        for i in 0..=60 {
            let theta = i as f64 / 60.0 * PI / 3.0;
            let b = hex_packing_bound(&BoundParams { theta, ..p }).unwrap();
            assert!(b >= hex_packing_bound(&p).unwrap() - 1e-15);
        }
    }

    #[test]
    fn touch_and_run_reference_values() {
        let expected = [0.9943638, 1.2004218, 1.0990268, 0.99999999];
        for (k, want) in (3..=6).zip(expected) {
            assert_abs_diff_eq!(touch_and_run_bound(&bound(3.0, k)).unwrap(), want, epsilon = 1e-6);
        }
        assert_eq!(touch_and_run_bound(&bound(3.0, 7)), Err(Error::LaneCount(7)));
        assert!(matches!(
            touch_and_run_bound(&bound(4.0, 6)),
            Err(Error::InfeasibleLane { .. })
        ));
    }

    #[test]
    fn touch_and_run_branch_continuity() {
        // r and the chord 2 r cos(alpha / 2) both depend on d; find where they cross
        let k = 4;
        let alpha = TAU / k as f64;
        let gap = |d: f64| 2.0 * compute_turning_radius(3.0, d, alpha).unwrap() * (alpha / 2.0).cos() - d;
        let (mut lo, mut hi) = (0.1, 3.5);
        assert!(gap(lo) > 0.0 && gap(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if gap(mid) > 0.0 {
                lo = mid
            } else {
                hi = mid
            }
        }
        let below = touch_and_run_bound(&bound(lo - 1e-6, k)).unwrap();
        let above = touch_and_run_bound(&bound(hi + 1e-6, k)).unwrap();
        assert!((below - above).abs() < 1e-5, "{below} vs {above}");
        let r = compute_turning_radius(3.0, lo, alpha).unwrap();
        assert_abs_diff_eq!(
            2.0 * r * (lo / (2.0 * r)).min(1.0).asin(),
            r * (PI - alpha),
            epsilon = 1e-6
        );
    }

    #[test]
    fn hex_bound_decreases_with_spacing() {
        let mut last = f64::INFINITY;
        for i in 0..=450 {
            let d = 0.5 + i as f64 * 0.01;
            let b = hex_packing_bound(&bound(d, 5)).unwrap();
            assert!(b < last);
            last = b;
        }
    }

    #[test]
    fn summarize_examples() {
        let m = |t: f64, completed: bool| RunMetrics {
            completed,
            throughput: Some(t),
            reaching_time: completed.then_some(10.0),
            avg_leaving_time: Some(2.0),
            total_time: completed.then_some(12.0),
        };
        let s = summarize(&[m(0.7, true), m(0.7, true), m(0.7, true)]).unwrap();
        let t = s.throughput.unwrap();
        assert_abs_diff_eq!(t.mean, 0.7, epsilon = 1e-15);
        assert_abs_diff_eq!(t.std, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(t.ci99, 0.0, epsilon = 1e-15);

        let s = summarize(&[m(0.4, true), m(0.6, true)]).unwrap();
        let t = s.throughput.unwrap();
        assert_abs_diff_eq!(t.mean, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(t.std, 0.14142135623730953, epsilon = 1e-15);
        assert_abs_diff_eq!(t.ci99, Z_99 * 0.1, epsilon = 1e-12);

        let mut runs: Vec<RunMetrics> = (0..7).map(|_| m(1.0, true)).collect();
        runs.extend((0..3).map(|_| m(99.0, false)));
        let s = summarize(&runs).unwrap();
        assert_abs_diff_eq!(s.failure_fraction, 0.3);
        assert_eq!(s.throughput.unwrap().n, 7);
        assert_eq!(s.throughput.unwrap().mean, 1.0);
        assert!(summarize(&[]).is_err());
    }

    proptest! {
        #[test]
        fn uniform_spacing_gives_inverse(t0 in -1e3f64..1e3, c in 0.01f64..100.0, n in 2usize..200) {
            let times: Vec<f64> = (0..n).map(|i| t0 + i as f64 * c).collect();
            let got = throughput(&times).unwrap();
            prop_assert!((got - 1.0 / c).abs() <= 1e-9 / c);
        }
    }
}
