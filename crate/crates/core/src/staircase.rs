//! Sampled monotone staircase `x ↦ S(x)` with interpolated evaluation and
//! the smallest-preimage pseudo-inverse.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Values closer than this (relative to the table's value scale) count as equal
/// when inverting, so a plateau reached with rounding noise still inverts to
/// its left edge.
const PLATEAU_REL_EPS: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StaircaseTable {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    origin: f64,
    alpha: f64,
}

impl StaircaseTable {
    /// Builds a table from strictly increasing breakpoints and non-decreasing
    /// values. `origin` must be one of the breakpoints and carry value zero.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>, origin: f64, alpha: f64) -> Result<Self> {
        if breakpoints.len() < 2 || breakpoints.len() != values.len() {
            return Err(Error::param(
                "staircase needs at least two breakpoints with one value each",
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::param("staircase breakpoints must be strictly increasing"));
        }
        if values.iter().any(|v| !v.is_finite()) || values.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("staircase values must be finite and non-decreasing"));
        }
        let table = StaircaseTable {
            breakpoints,
            values,
            origin,
            alpha,
        };
        if table.domain_contains(origin) && table.eval(origin)?.abs() > table.scale() * 1e-12 {
            return Err(Error::param("staircase must vanish at its origin"));
        }
        Ok(table)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn origin(&self) -> f64 {
        self.origin
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    pub fn value_range(&self) -> (f64, f64) {
        (self.values[0], *self.values.last().unwrap())
    }

    fn domain_contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        lo <= x && x <= hi
    }

    fn scale(&self) -> f64 {
        let (lo, hi) = self.value_range();
        lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE)
    }

    /// Piecewise-linear evaluation.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo <= x && x <= hi) {
            return Err(Error::OutOfRange {
                what: "staircase argument",
                value: x,
                lo,
                hi,
            });
        }
        let i = self.breakpoints.partition_point(|&b| b <= x);
        if i == self.breakpoints.len() {
            return Ok(*self.values.last().unwrap());
        }
        let (x0, x1) = (self.breakpoints[i - 1], self.breakpoints[i]);
        let (s0, s1) = (self.values[i - 1], self.values[i]);
        if s0 == s1 {
            return Ok(s0);
        }
        Ok(s0 + (s1 - s0) * (x - x0) / (x1 - x0))
    }

    /// Smallest `x` with `S(x) >= s`.
    pub fn invert(&self, s: f64) -> Result<f64> {
        let (lo, hi) = self.value_range();
        let eps = PLATEAU_REL_EPS * self.scale();
        if !(lo - eps <= s && s <= hi + eps) {
            return Err(Error::OutOfRange {
                what: "staircase value",
                value: s,
                lo,
                hi,
            });
        }
        let i = self.values.partition_point(|&v| v < s - eps);
        if i == 0 {
            return Ok(self.breakpoints[0]);
        }
        if i == self.values.len() {
            return Ok(*self.breakpoints.last().unwrap());
        }
        let (s0, s1) = (self.values[i - 1], self.values[i]);
        let (x0, x1) = (self.breakpoints[i - 1], self.breakpoints[i]);
        if (s1 - s).abs() <= eps {
            return Ok(x1);
        }
        let frac = ((s - s0) / (s1 - s0)).clamp(0.0, 1.0);
        Ok(x0 + frac * (x1 - x0))
    }

    /// Smallest strictly positive increment between neighbouring breakpoints.
    pub fn min_positive_increment(&self) -> Option<f64> {
        self.values
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|d| *d > 0.0)
            .min_by(f64::total_cmp)
    }

    /// Writes `x,S` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "S"])?;
        for (x, s) in self.breakpoints.iter().zip(&self.values) {
            w.write_record([x.to_string(), s.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity() -> StaircaseTable {
        let xs: Vec<f64> = (0..=100).map(|i| i as f64 / 100.0).collect();
        StaircaseTable::new(xs.clone(), xs, 0.0, 1.0).unwrap()
    }

    fn plateau() -> StaircaseTable {
        StaircaseTable::new(vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 1.0, 1.0, 2.0], 0.0, 1.0).unwrap()
    }

    #[test]
    fn identity_eval_and_invert() {
        let t = identity();
        assert!((t.eval(0.25).unwrap() - 0.25).abs() < 1e-15);
        assert!((t.invert(0.25).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn invert_returns_left_edge_of_plateau() {
        let t = plateau();
        assert_eq!(t.invert(1.0).unwrap(), 1.0);
        assert_eq!(t.eval(1.5).unwrap(), 1.0);
        assert!((t.invert(1.5).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn out_of_range_queries_fail() {
        let t = plateau();
        assert!(matches!(t.eval(3.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(t.invert(-0.1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn rejects_decreasing_values() {
        assert!(StaircaseTable::new(vec![0.0, 1.0], vec![0.0, -1.0], 0.0, 1.0).is_err());
        assert!(StaircaseTable::new(vec![0.0, 0.0], vec![0.0, 1.0], 0.0, 1.0).is_err());
    }

    #[test]
    fn csv_columns() {
        let mut buf = Vec::new();
        plateau().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,S\n0,0\n1,1\n"));
    }
}
