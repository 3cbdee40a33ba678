//! Controller constants shared by every policy, with the default values
//! used throughout the experiments.

use crate::error::{check_positive, Error, Result};
use crate::fields::FieldParams;
use crate::guidance::GuidanceParams;

/// Default target-area radius `s`, metres.
pub const DEFAULT_TARGET_RADIUS: f64 = 3.0;
/// Default working radius `D`, metres.
pub const DEFAULT_WORKING_RADIUS: f64 = 13.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub k_rep: f64,
    pub i_default: f64,
    pub i_min: f64,
    pub k_sqf: f64,
    pub k_trvf: f64,
    pub k_r: f64,
    pub v_max: f64,
    pub k_s: f64,
    pub k_o: f64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            k_rep: 0.5,
            i_default: 3.0,
            i_min: 1.0,
            k_sqf: 2.5,
            k_trvf: 2.5,
            k_r: 3.0,
            v_max: 1.0,
            k_s: 1.1,
            k_o: 1.1,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        self.field().validate()?;
        self.guidance().validate()?;
        check_positive("k_trvf", self.k_trvf)?;
        Ok(())
    }

    pub fn field(&self) -> FieldParams {
        FieldParams {
            k_rep: self.k_rep,
            k_sqf: self.k_sqf,
            k_trvf: self.k_trvf,
            i_default: self.i_default,
            i_min: self.i_min,
        }
    }

    pub fn guidance(&self) -> GuidanceParams {
        GuidanceParams {
            k_s: self.k_s,
            k_o: self.k_o,
            k_r: self.k_r,
            v_max: self.v_max,
            i_default: self.i_default,
        }
    }
}

pub(crate) fn check_exponent(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name,
            reason: format!("must be > 1, got {value}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        Params::default().validate().unwrap();
    }

    #[test]
    fn rejects_bad_influence_order() {
        let p = Params {
            i_min: 4.0,
            ..Params::default()
        };
        assert!(matches!(p.validate(), Err(Error::InvalidParam { name: "i_min", .. })));
    }

    #[test]
    fn rejects_small_exponent() {
        let p = Params {
            k_s: 1.0,
            ..Params::default()
        };
        assert!(matches!(p.validate(), Err(Error::InvalidParam { name: "k_s", .. })));
    }
}
