use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::time_map::TimeMap;

use super::linear::even_grid;
use super::trace::{SolutionTrace, TraceMeta};
use super::{check_span, check_step, Rhs, DEFAULT_RK4_STEP};

/// `dy/ds = f(s, y)`, `y(s0) = y0`, integrated by classical RK4.
#[derive(Clone)]
pub struct NumericProblem {
    pub rhs: Rhs,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    pub step: f64,
    pub time_map: TimeMap,
    pub exec: Exec,
}

impl NumericProblem {
    pub fn new(rhs: Rhs, y0: f64, s0: f64, s_end: f64) -> Self {
        NumericProblem {
            rhs,
            y0,
            s0,
            s_end,
            step: DEFAULT_RK4_STEP,
            time_map: TimeMap::Identity,
            exec: Exec::default(),
        }
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

impl std::fmt::Debug for NumericProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NumericProblem")
            .field("y0", &self.y0)
            .field("s0", &self.s0)
            .field("s_end", &self.s_end)
            .field("step", &self.step)
            .finish_non_exhaustive()
    }
}

fn rk4(f: &Rhs, grid: &[f64], y0: f64) -> Result<Vec<f64>> {
    let mut ys = Vec::with_capacity(grid.len());
    let mut y = y0;
    ys.push(y);
    for w in grid.windows(2) {
        let (s, h) = (w[0], w[1] - w[0]);
        let k1 = f(s, y);
        let k2 = f(s + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(s + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(s + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !y.is_finite() {
            return Err(Error::Numeric(format!("right-hand side is not finite near s = {s}")));
        }
        ys.push(y);
    }
    Ok(ys)
}

pub fn solve_numeric_conjugate(problem: &NumericProblem) -> Result<SolutionTrace> {
    check_step(problem.step)?;
    check_span(problem.s0, problem.s_end)?;
    let grid = even_grid(problem.s0, problem.s_end, problem.step);
    let ys = rk4(&problem.rhs, &grid, problem.y0)?;
    let coarse_grid: Vec<f64> = grid.iter().step_by(2).copied().collect();
    let coarse = rk4(&problem.rhs, &coarse_grid, problem.y0)?;
    let error_estimate = coarse
        .iter()
        .zip(ys.iter().step_by(2))
        .map(|(c, f)| (c - f).abs() / 15.0)
        .fold(0.0, f64::max);
    let meta = TraceMeta {
        solver: "rk4".into(),
        step: (grid[1] - grid[0]).abs(),
        error_estimate,
    };
    let f = problem.rhs.clone();
    SolutionTrace::assemble(grid, ys, &problem.time_map, move |s, y| f(s, y), meta, problem.exec)
}

#[cfg(test)]
mod tests {
    use super::super::rhs;
    use super::*;

    #[test]
    fn exponential_growth() {
        let pr = NumericProblem::new(rhs(|_, y| 0.7 * y), 1.0, 0.0, 2.0).with_step(1e-2);
        let tr = solve_numeric_conjugate(&pr).unwrap();
        let last = tr.samples.last().unwrap();
        assert!((last.y - 1.4f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn fourth_order() {
        let err = |h: f64| {
            let pr = NumericProblem::new(rhs(|s, y| s.cos() * y), 1.0, 0.0, 3.0).with_step(h);
            let tr = solve_numeric_conjugate(&pr).unwrap();
            (tr.samples.last().unwrap().y - 3f64.sin().exp()).abs()
        };
        let ratio = err(0.02) / err(0.01);
        assert!((ratio - 16.0).abs() < 1.5, "{ratio}");
    }

    #[test]
    fn zero_rhs_and_bad_step() {
        let pr = NumericProblem::new(rhs(|_, _| 0.0), 3.0, 0.0, 1.0).with_step(0.1);
        assert!(solve_numeric_conjugate(&pr).unwrap().ys().iter().all(|&y| y == 3.0));
        assert!(solve_numeric_conjugate(&pr.clone().with_step(0.0)).is_err());
        let blow = NumericProblem::new(rhs(|_, y| y * y), 1.0, 0.0, 2.0).with_step(0.01);
        assert!(matches!(solve_numeric_conjugate(&blow), Err(Error::Numeric(_))));
    }
}
