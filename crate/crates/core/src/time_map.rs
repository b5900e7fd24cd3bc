//! Maps between the ambient time `t` and the staircase coordinate `s`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::staircase::StaircaseTable;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum TimeMap {
    /// `s = t`.
    Identity,
    /// `s = sign(t)·|t|^α`, the power-law stand-in for the staircase.
    Surrogate { alpha: f64 },
    /// Tabulated staircase with its pseudo-inverse.
    Staircase { table: StaircaseTable },
}

impl TimeMap {
    pub fn surrogate(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::param(format!("surrogate order must be positive, got {alpha}")));
        }
        Ok(TimeMap::Surrogate { alpha })
    }

    pub fn alpha(&self) -> f64 {
        match self {
            TimeMap::Identity => 1.0,
            TimeMap::Surrogate { alpha } => *alpha,
            TimeMap::Staircase { table } => table.alpha(),
        }
    }

    pub fn to_s(&self, t: f64) -> Result<f64> {
        match self {
            TimeMap::Identity => Ok(t),
            TimeMap::Surrogate { alpha } => Ok(t.signum() * t.abs().powf(*alpha)),
            TimeMap::Staircase { table } => table.eval(t),
        }
    }

    /// Smallest `t` with `S(t) ≥ s` (exact inverse for the power maps).
    pub fn to_t(&self, s: f64) -> Result<f64> {
        match self {
            TimeMap::Identity => Ok(s),
            TimeMap::Surrogate { alpha } => Ok(s.signum() * s.abs().powf(1.0 / alpha)),
            TimeMap::Staircase { table } => table.invert(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surrogate_round_trip() {
        let m = TimeMap::surrogate(0.7).unwrap();
        for t in [-3.0, -0.5, 0.0, 0.25, 2.0, 10.0] {
            let back = m.to_t(m.to_s(t).unwrap()).unwrap();
            assert!((back - t).abs() < 1e-13 * t.abs().max(1.0));
        }
        assert!((m.to_s(2.0).unwrap() - 2f64.powf(0.7)).abs() < 1e-15);
    }

    #[test]
    fn identity_and_unit_surrogate_agree() {
        let s = TimeMap::surrogate(1.0).unwrap();
        for t in [0.0, 1.5, 7.0] {
            assert_eq!(s.to_s(t).unwrap(), TimeMap::Identity.to_s(t).unwrap());
        }
        assert!(TimeMap::surrogate(0.0).is_err());
    }

    #[test]
    fn staircase_mode_uses_table() {
        let table = StaircaseTable::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 1.0], 0.0, 0.5).unwrap();
        let m = TimeMap::Staircase { table };
        assert_eq!(m.to_s(0.5).unwrap(), 0.5);
        assert_eq!(m.to_t(1.0).unwrap(), 1.0);
        assert!(m.to_s(3.0).is_err());
        assert_eq!(m.alpha(), 0.5);
    }
}
