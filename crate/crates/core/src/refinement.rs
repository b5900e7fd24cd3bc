//! Depth-indexed refinement: turning a sequence of coarse-grained masses into
//! a limit estimate, and bisecting the order at which that limit jumps from
//! infinity to zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of successive depths the stopping rules look at.
pub const WINDOW: usize = 3;
/// Successive ratio above which a sequence is declared divergent.
pub const DIVERGENCE_RATIO: f64 = 1.5;
/// Growth (relative to depth 0) that flags divergence for slowly growing sequences.
pub const GROWTH_THRESHOLD: f64 = 1e3;
/// Ratios within this band of one mark the critical order.
pub const CRITICAL_BAND: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MassRegime {
    Vanishing,
    Critical,
    Diverging,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MassEstimate {
    pub alpha: f64,
    /// Cell width at the depth where the sweep stopped.
    pub delta: f64,
    /// Coarse-grained mass at that depth.
    pub value: f64,
    pub depth: u32,
    pub converged: bool,
    pub diverged: bool,
    /// Ratio of the last two depth values.
    pub trend: f64,
}

impl MassEstimate {
    pub fn regime(&self) -> MassRegime {
        if self.diverged {
            return MassRegime::Diverging;
        }
        if (self.trend - 1.0).abs() <= CRITICAL_BAND {
            MassRegime::Critical
        } else if self.trend < 1.0 {
            MassRegime::Vanishing
        } else {
            MassRegime::Diverging
        }
    }

    /// The mass-function limit implied by the sweep: 0, +inf, or the finite value.
    pub fn limit(&self) -> f64 {
        match self.regime() {
            MassRegime::Vanishing => 0.0,
            MassRegime::Diverging => f64::INFINITY,
            MassRegime::Critical => self.value,
        }
    }
}

/// Scans `values[n]` (mass at depth `n`, cell width `deltas[n]`) with a Cauchy
/// stop over [`WINDOW`] successive differences and the divergence rules.
pub fn analyze(alpha: f64, values: &[f64], deltas: &[f64], tol: f64) -> MassEstimate {
    assert!(!values.is_empty() && values.len() == deltas.len());
    let ratio = |n: usize| -> f64 {
        let (prev, cur) = (values[n - 1], values[n]);
        if prev == 0.0 {
            if cur == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            cur / prev
        }
    };
    let base = values[0];
    let mut stop = values.len() - 1;
    let mut converged = false;
    let mut diverged = false;
    for n in WINDOW..values.len() {
        let window = n + 1 - WINDOW..=n;
        if window.clone().all(|k| (values[k] - values[k - 1]).abs() < tol) {
            stop = n;
            converged = true;
            break;
        }
        let steep = window.clone().all(|k| ratio(k) > DIVERGENCE_RATIO);
        let growing =
            window.clone().all(|k| values[k] > values[k - 1]) && base > 0.0 && values[n] > GROWTH_THRESHOLD * base;
        if steep || growing || !values[n].is_finite() {
            stop = n;
            diverged = true;
            break;
        }
    }
    let trend = if stop == 0 { 1.0 } else { ratio(stop) };
    MassEstimate {
        alpha,
        delta: deltas[stop],
        value: values[stop],
        depth: stop as u32,
        converged,
        diverged,
        trend,
    }
}

/// Bisects the critical order in `[lo, hi]` given a regime classifier.
///
/// `lo` itself is never classified (it may be a singular endpoint such as 0).
/// After the bracket closes, one probe on each side must classify as
/// diverging / vanishing respectively; otherwise the classification is not
/// monotone and the bracket is reported.
pub fn bisect_dimension<C>(lo: f64, hi: f64, tol: f64, classify: C) -> Result<f64>
where
    C: Fn(f64) -> Result<MassRegime>,
{
    if !(tol > 0.0) {
        return Err(Error::param("dimension tolerance must be positive"));
    }
    match classify(hi)? {
        MassRegime::Critical => return Ok(hi),
        MassRegime::Diverging => return Err(Error::ClassificationInconsistent { lo, hi }),
        MassRegime::Vanishing => {}
    }
    let (mut a, mut b) = (lo, hi);
    while b - a >= tol {
        let mid = 0.5 * (a + b);
        match classify(mid)? {
            MassRegime::Critical => return Ok(mid),
            MassRegime::Vanishing => b = mid,
            MassRegime::Diverging => a = mid,
        }
    }
    let below = a - tol;
    if below > lo && classify(below)? == MassRegime::Vanishing {
        return Err(Error::ClassificationInconsistent { lo: a, hi: b });
    }
    let above = b + tol;
    if above < hi && classify(above)? == MassRegime::Diverging {
        return Err(Error::ClassificationInconsistent { lo: a, hi: b });
    }
    Ok(0.5 * (a + b))
}
