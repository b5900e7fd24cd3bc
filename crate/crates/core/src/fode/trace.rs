use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::time_map::TimeMap;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub s: f64,
    pub y: f64,
    /// Finite-difference defect of the defining equation at this sample.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    pub solver: String,
    pub step: f64,
    pub error_estimate: f64,
}

/// Sampled solution, ordered by increasing `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionTrace {
    pub samples: Vec<Sample>,
    pub meta: TraceMeta,
}

/// `dy/ds` at every node of a (possibly non-uniform) grid, three-point formulas.
pub fn finite_difference(s: &[f64], y: &[f64]) -> Vec<f64> {
    let n = s.len();
    match n {
        0 => return vec![],
        1 => return vec![0.0],
        2 => {
            let d = (y[1] - y[0]) / (s[1] - s[0]);
            return vec![d, d];
        }
        _ => {}
    }
    let three = |i0: usize, at: usize| -> f64 {
        let (x0, x1, x2) = (s[i0], s[i0 + 1], s[i0 + 2]);
        let (y0, y1, y2) = (y[i0], y[i0 + 1], y[i0 + 2]);
        let x = s[at];
        // derivative of the quadratic through the three points
        let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
        let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
        let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
        y0 * l0 + y1 * l1 + y2 * l2
    };
    let mut out = Vec::with_capacity(n);
    out.push(three(0, 0));
    for i in 1..n - 1 {
        out.push(three(i - 1, i));
    }
    out.push(three(n - 3, n - 1));
    out
}

impl SolutionTrace {
    /// Builds a trace from solver output on an `s`-grid in either direction.
    pub(crate) fn assemble<F>(
        mut s: Vec<f64>,
        mut y: Vec<f64>,
        map: &TimeMap,
        rhs: F,
        meta: TraceMeta,
        exec: Exec,
    ) -> Result<SolutionTrace>
    where
        F: Fn(f64, f64) -> f64 + Sync,
    {
        if s.len() > 1 && s[0] > s[s.len() - 1] {
            s.reverse();
            y.reverse();
        }
        let dy = finite_difference(&s, &y);
        let idx: Vec<usize> = (0..s.len()).collect();
        let samples = exec
            .map(&idx, |&i| -> Result<Sample> {
                Ok(Sample {
                    t: map.to_t(s[i])?,
                    s: s[i],
                    y: y[i],
                    residual: dy[i] - rhs(s[i], y[i]),
                })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(SolutionTrace { samples, meta })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn ts(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.t).collect()
    }

    pub fn ss(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.s).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.samples.iter().map(|p| p.y).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(|p| p.residual.abs()).fold(0.0, f64::max)
    }

    /// Largest residual over samples with `s` in `[lo, hi]`.
    pub fn max_residual_on(&self, lo: f64, hi: f64) -> f64 {
        self.samples
            .iter()
            .filter(|p| lo <= p.s && p.s <= hi)
            .map(|p| p.residual.abs())
            .fold(0.0, f64::max)
    }

    /// Linear interpolation of `y` in `s`.
    pub fn y_at(&self, s: f64) -> Result<f64> {
        let first = self.samples.first().ok_or_else(|| Error::param("empty trace"))?;
        let last = self.samples.last().unwrap();
        if s < first.s || s > last.s {
            return Err(Error::OutOfRange {
                what: "trace coordinate",
                value: s,
                lo: first.s,
                hi: last.s,
            });
        }
        let i = self.samples.partition_point(|p| p.s < s);
        if i == 0 {
            return Ok(first.y);
        }
        let (a, b) = (self.samples[i - 1], self.samples[i]);
        Ok(a.y + (b.y - a.y) * (s - a.s) / (b.s - a.s))
    }

    /// `t,s,y,residual` rows.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "s", "y", "residual"])?;
        for p in &self.samples {
            w.serialize((p.t, p.s, p.y, p.residual))?;
        }
        w.flush()?;
        Ok(())
    }
}
