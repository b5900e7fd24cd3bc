use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order `α` of a mass function. Sets admit `0 < α <= 1`; curves in `R^n`
/// admit `1 <= α <= n`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AlphaOrder(f64);

impl AlphaOrder {
    pub fn for_set(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha <= 1.0 {
            Ok(AlphaOrder(alpha))
        } else {
            Err(Error::OutOfRange {
                what: "set order alpha",
                value: alpha,
                lo: 0.0,
                hi: 1.0,
            })
        }
    }

    pub fn for_curve(alpha: f64, ambient_dim: usize) -> Result<Self> {
        let n = ambient_dim as f64;
        if (1.0..=n).contains(&alpha) {
            Ok(AlphaOrder(alpha))
        } else {
            Err(Error::OutOfRange {
                what: "curve order alpha",
                value: alpha,
                lo: 1.0,
                hi: n,
            })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<AlphaOrder> for f64 {
    fn from(a: AlphaOrder) -> f64 {
        a.0
    }
}
