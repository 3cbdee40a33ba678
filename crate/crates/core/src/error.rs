use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("degenerate geometry: {0}")]
    Degenerate(&'static str),

    #[error("robot is on or inside the previous target disc (distance to rim {0})")]
    InsideTargetDisc(f64),

    #[error(
        "infeasible lane geometry: turning radius {radius} < 0 (s = {target_radius}, d = {spacing}, alpha = {alpha})"
    )]
    InfeasibleLane {
        radius: f64,
        target_radius: f64,
        spacing: f64,
        alpha: f64,
    },

    #[error("lane count {0} outside 3..=6")]
    LaneCount(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParam { name: &'static str, reason: String },

    #[error("route must contain at least two targets, got {0}")]
    ShortRoute(usize),

    #[error("route already completed")]
    RouteComplete,

    #[error("could not place {placed} of {requested} robots without overlap")]
    SpawnFailed { placed: usize, requested: usize },

    #[error("non-finite force for robot {robot} at step {step}")]
    NonFiniteForce { robot: usize, step: u64 },

    #[error("throughput needs at least two arrivals spread over time, got {0}")]
    InsufficientArrivals(usize),

    #[error("arrival times must be non-decreasing")]
    UnsortedArrivals,

    #[error("run did not complete")]
    IncompleteRun,
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name,
            reason: format!("must be finite and > 0, got {value}"),
        })
    }
}
