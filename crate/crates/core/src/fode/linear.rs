use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::interval::Interval;
use crate::quadrature::{cumulative_trapezoid, uniform_grid};
use crate::time_map::TimeMap;

use super::trace::{SolutionTrace, TraceMeta};
use super::{check_span, check_step, Coefficient, DEFAULT_QUADRATURE_STEP};

/// Largest |log μ| kept before the solve is declared out of range.
const LOG_LIMIT: f64 = 700.0;

/// `dy/ds + p(s)·y = g(s)`, `y(s0) = y0`, solved from `s0` to `s_end`.
#[derive(Clone)]
pub struct LinearFODEProblem {
    pub p: Coefficient,
    pub g: Coefficient,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    pub step: f64,
    pub time_map: TimeMap,
    pub exec: Exec,
}

impl LinearFODEProblem {
    pub fn new(p: Coefficient, g: Coefficient, y0: f64, s0: f64, s_end: f64) -> Self {
        LinearFODEProblem {
            p,
            g,
            y0,
            s0,
            s_end,
            step: DEFAULT_QUADRATURE_STEP,
            time_map: TimeMap::Identity,
            exec: Exec::default(),
        }
    }

    /// Member of the solution family `y = (∫μg + c)/μ` with `μ(s0) = 1`;
    /// the family constant is then the value at `s0`.
    pub fn family_member(p: Coefficient, g: Coefficient, c: f64, s0: f64, s_end: f64) -> Self {
        LinearFODEProblem::new(p, g, c, s0, s_end)
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_time_map(mut self, map: TimeMap) -> Self {
        self.time_map = map;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}

impl std::fmt::Debug for LinearFODEProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearFODEProblem")
            .field("y0", &self.y0)
            .field("s0", &self.s0)
            .field("s_end", &self.s_end)
            .field("step", &self.step)
            .field("time_map", &self.time_map)
            .finish_non_exhaustive()
    }
}

/// `μ(s) = exp(∫_{anchor}^s p)` tabulated on a uniform grid.
#[derive(Clone, Debug)]
pub struct IntegratingFactor {
    grid: Vec<f64>,
    log_mu: Vec<f64>,
}

impl IntegratingFactor {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn log_values(&self) -> &[f64] {
        &self.log_mu
    }

    /// `log μ(s)`, linear between grid nodes.
    pub fn log_eval(&self, s: f64) -> Result<f64> {
        let (a, b) = (self.grid[0], *self.grid.last().unwrap());
        let (lo, hi) = (a.min(b), a.max(b));
        if !(lo <= s && s <= hi) {
            return Err(Error::OutOfRange {
                what: "integrating factor argument",
                value: s,
                lo,
                hi,
            });
        }
        let n = self.grid.len() - 1;
        if n == 0 {
            return Ok(self.log_mu[0]);
        }
        let pos = ((s - a) / (b - a) * n as f64).clamp(0.0, n as f64);
        let i = (pos.floor() as usize).min(n - 1);
        let frac = pos - i as f64;
        Ok(self.log_mu[i] + frac * (self.log_mu[i + 1] - self.log_mu[i]))
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.log_eval(s).map(f64::exp)
    }
}

/// Tabulates `log μ` from `grid[0]` along `grid`; fails on non-finite `p`
/// or when `μ` would leave floating-point range.
fn log_factor(p: &Coefficient, grid: &[f64], exec: Exec) -> Result<Vec<f64>> {
    let values = exec.map(grid, |&s| p(s));
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("coefficient is not finite at s = {}", grid[i])));
    }
    let log_mu = cumulative_trapezoid(grid, &values);
    if let Some(i) = log_mu.iter().position(|l| l.abs() > LOG_LIMIT) {
        let split = log_mu
            .iter()
            .position(|l| l.abs() > 0.5 * LOG_LIMIT)
            .map(|j| grid[j])
            .unwrap_or(grid[0]);
        return Err(Error::Scaling {
            s: grid[i],
            log_mu: log_mu[i],
            suggested_split: split,
        });
    }
    Ok(log_mu)
}

/// Integrating factor on `s_range`, normalized to 1 at `s_range.lo`.
pub fn integrating_factor(p: Coefficient, s_range: Interval, quadrature_step: f64) -> Result<IntegratingFactor> {
    check_step(quadrature_step)?;
    let grid = uniform_grid(s_range.lo, s_range.hi, quadrature_step);
    let log_mu = log_factor(&p, &grid, Exec::default())?;
    Ok(IntegratingFactor { grid, log_mu })
}

/// `y = e^{-Λ}(y0 + ∫ e^{Λ} g)` by composite trapezoid on an even grid.
fn linear_values(problem: &LinearFODEProblem, grid: &[f64]) -> Result<Vec<f64>> {
    let log_mu = log_factor(&problem.p, grid, problem.exec)?;
    let idx: Vec<usize> = (0..grid.len()).collect();
    let weighted = problem.exec.map(&idx, |&i| log_mu[i].exp() * (problem.g)(grid[i]));
    if let Some(i) = weighted.iter().position(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("forcing is not finite at s = {}", grid[i])));
    }
    let integral = cumulative_trapezoid(grid, &weighted);
    Ok(idx
        .iter()
        .map(|&i| (-log_mu[i]).exp() * (problem.y0 + integral[i]))
        .collect())
}

/// Even-length grid from `a` to `b` with spacing at most `step`.
pub(crate) fn even_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let mut n = (((b - a).abs() / step).ceil() as usize).max(2);
    n += n % 2;
    let h = (b - a) / n as f64;
    (0..=n).map(|i| if i == n { b } else { a + h * i as f64 }).collect()
}

pub fn solve_linear(problem: &LinearFODEProblem) -> Result<SolutionTrace> {
    check_step(problem.step)?;
    check_span(problem.s0, problem.s_end)?;
    let grid = even_grid(problem.s0, problem.s_end, problem.step);
    let mut y = linear_values(problem, &grid)?;
    y[0] = problem.y0;
    let coarse_grid: Vec<f64> = grid.iter().step_by(2).copied().collect();
    let coarse = linear_values(problem, &coarse_grid)?;
    // trapezoid is second order: the fine error is a third of the difference
    let error_estimate = coarse
        .iter()
        .zip(y.iter().step_by(2))
        .map(|(c, f)| (c - f).abs() / 3.0)
        .fold(0.0, f64::max);
    let meta = TraceMeta {
        solver: "linear".into(),
        step: (grid[1] - grid[0]).abs(),
        error_estimate,
    };
    let (p, g) = (problem.p.clone(), problem.g.clone());
    SolutionTrace::assemble(
        grid,
        y,
        &problem.time_map,
        move |s, y| g(s) - p(s) * y,
        meta,
        problem.exec,
    )
}

#[cfg(test)]
mod tests {
    use super::super::{coefficient, constant};
    use super::*;

    #[test]
    fn factor_for_constant_and_zero() {
        let mu = integrating_factor(constant(0.5), Interval::new(0.0, 4.0).unwrap(), 1e-3).unwrap();
        assert!((mu.eval(4.0).unwrap() - 2f64.exp()).abs() < 1e-12);
        let one = integrating_factor(constant(0.0), Interval::new(-1.0, 1.0).unwrap(), 0.1).unwrap();
        assert_eq!(one.eval(0.3).unwrap(), 1.0);
    }

    #[test]
    fn scaling_error_suggests_split() {
        let err = integrating_factor(constant(10.0), Interval::new(0.0, 100.0).unwrap(), 0.01).unwrap_err();
        match err {
            Error::Scaling { s, suggested_split, .. } => {
                assert!((s - 70.0).abs() < 0.02);
                assert!((suggested_split - 35.0).abs() < 0.02);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_finite_coefficient() {
        let p = coefficient(|s| 1.0 / s);
        assert!(matches!(
            integrating_factor(p, Interval::new(0.0, 1.0).unwrap(), 0.1),
            Err(Error::Numeric(_))
        ));
    }

    #[test]
    fn zero_problem_keeps_initial_value() {
        let pr = LinearFODEProblem::new(constant(0.0), constant(0.0), 5.0, 0.0, 2.0).with_step(0.01);
        let tr = solve_linear(&pr).unwrap();
        assert!(tr.ys().iter().all(|&y| y == 5.0));
        assert_eq!(tr.meta.error_estimate, 0.0);
    }

    #[test]
    fn backward_solve() {
        let pr = LinearFODEProblem::new(constant(1.0), constant(0.0), 1.0, 1.0, 0.0).with_step(1e-3);
        let tr = solve_linear(&pr).unwrap();
        assert_eq!(tr.samples.last().unwrap().y, 1.0);
        assert!((tr.samples[0].y - 1f64.exp()).abs() < 1e-6);
    }
}
