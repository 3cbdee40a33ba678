//! Potential-field primitives: attraction, inter-robot repulsion, the SQF
//! rotational fields and the repulsion from a previously visited target disc.

use crate::error::{check_positive, Error, Result};
use crate::geometry::Vec2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    pub k_rep: f64,
    pub k_sqf: f64,
    pub k_trvf: f64,
    /// Default (and maximum) influence radius, metres.
    pub i_default: f64,
    /// Minimum influence radius, metres.
    pub i_min: f64,
}

impl FieldParams {
    pub fn validate(&self) -> Result<()> {
        check_positive("k_rep", self.k_rep)?;
        check_positive("k_sqf", self.k_sqf)?;
        check_positive("k_trvf", self.k_trvf)?;
        check_positive("i_default", self.i_default)?;
        check_positive("i_min", self.i_min)?;
        if self.i_min >= self.i_default {
            return Err(Error::InvalidParam {
                name: "i_min",
                reason: format!("must be below i_default ({})", self.i_default),
            });
        }
        Ok(())
    }
}

/// Force of magnitude `k` pointing from `p` to `goal`.
pub fn attractive_force(p: Vec2, goal: Vec2, k: f64) -> Result<Vec2> {
    let dir = (goal - p)
        .normalized()
        .ok_or(Error::Degenerate("attraction towards own position"))?;
    Ok(dir * k)
}

/// Summed inter-robot repulsion
/// `-k_rep (1/d - 1/I) (q - p) / d^3` over every neighbour `q` closer than `influence`.
pub fn repulsive_force(p: Vec2, neighbors: &[Vec2], influence: f64, k_rep: f64) -> Result<Vec2> {
    check_positive("influence", influence)?;
    let inv_influence = 1.0 / influence;
    let mut total = Vec2::ZERO;
    for &q in neighbors {
        let diff = q - p;
        let d = diff.norm();
        if d == 0.0 {
            return Err(Error::Degenerate("coincident neighbour"));
        }
        if d < influence {
            total -= diff * (k_rep * (1.0 / d - inv_influence) / (d * d * d));
        }
    }
    Ok(total)
}

/// Rotational field steering robots around the target towards the corridor
/// above it: anti-clockwise on the right half (`p.x >= o.x`), clockwise on the left.
pub fn sqf_entry_rotational(p: Vec2, o: Vec2, k_sqf: f64) -> Result<Vec2> {
    let rel = p - o;
    let n = rel.norm();
    if n == 0.0 {
        return Err(Error::Degenerate("robot at target centre"));
    }
    let m = k_sqf / n;
    Ok(if p.x >= o.x {
        Vec2::new(-rel.y * m, rel.x * m)
    } else {
        Vec2::new(rel.y * m, -rel.x * m)
    })
}

/// Rotational field for robots leaving the target. Right-bound robots turn
/// anti-clockwise about `Q = o + (D, 0)`, left-bound ones clockwise about
/// `P = o - (D, 0)`.
pub fn sqf_exit_rotational(p: Vec2, o: Vec2, d_work: f64, next_is_right: bool, k_sqf: f64) -> Result<Vec2> {
    let (centre, sign) = if next_is_right {
        (Vec2::new(o.x + d_work, o.y), 1.0)
    } else {
        (Vec2::new(o.x - d_work, o.y), -1.0)
    };
    let rel = p - centre;
    let n = rel.norm();
    if n == 0.0 {
        return Err(Error::Degenerate("robot at exit rotation centre"));
    }
    let m = sign * k_sqf / n;
    Ok(Vec2::new(-rel.y * m, rel.x * m))
}

/// Repulsion away from the disc of radius `d_work` around a target already
/// visited. Influence extends `d_work` beyond the rim.
pub fn target_disc_repulsion(p: Vec2, o_prev: Vec2, d_work: f64, k_rep: f64) -> Result<Vec2> {
    let to_centre = o_prev - p;
    let dist = to_centre.norm();
    let d = dist - d_work;
    if d <= 0.0 {
        return Err(Error::InsideTargetDisc(d));
    }
    if d >= d_work {
        return Ok(Vec2::ZERO);
    }
    let magnitude = k_rep * (1.0 / d - 1.0 / d_work) / (d * d);
    Ok(to_centre * (-magnitude / dist))
}
