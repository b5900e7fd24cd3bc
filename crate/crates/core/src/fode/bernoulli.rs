use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::time_map::TimeMap;

use super::linear::{solve_linear, LinearFODEProblem};
use super::trace::{SolutionTrace, TraceMeta};
use super::{coefficient, Coefficient, DEFAULT_QUADRATURE_STEP};

/// `dy/ds + q(s)·y = r(s)·y^β`, `y(s0) = y0`.
#[derive(Clone)]
pub struct BernoulliFODEProblem {
    pub q: Coefficient,
    pub r: Coefficient,
    pub beta: f64,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    pub step: f64,
    pub time_map: TimeMap,
    pub exec: Exec,
}

impl BernoulliFODEProblem {
    pub fn new(q: Coefficient, r: Coefficient, beta: f64, y0: f64, s0: f64, s_end: f64) -> Self {
        BernoulliFODEProblem {
            q,
            r,
            beta,
            y0,
            s0,
            s_end,
            step: DEFAULT_QUADRATURE_STEP,
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

impl std::fmt::Debug for BernoulliFODEProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BernoulliFODEProblem")
            .field("beta", &self.beta)
            .field("y0", &self.y0)
            .field("s0", &self.s0)
            .field("s_end", &self.s_end)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub struct BernoulliSolution {
    pub trace: SolutionTrace,
    /// `y ≡ 0` also solves the equation (true whenever `β > 0`).
    pub trivial_zero: bool,
}

fn integer(x: f64) -> Option<i32> {
    (x.fract() == 0.0 && x.abs() < i32::MAX as f64).then_some(x as i32)
}

/// `y^β` on the real line where defined.
fn power(y: f64, beta: f64) -> f64 {
    match integer(beta) {
        Some(k) => y.powi(k),
        None => y.powf(beta),
    }
}

/// Recovers `y` from `z = y^m`, `m = 1-β`; `sign` picks the branch of even roots.
fn unsubstitute(z: f64, m: f64, sign: f64, s: f64) -> Result<f64> {
    match integer(m) {
        Some(m) => {
            if m % 2 == 0 {
                if z < 0.0 {
                    return Err(Error::Domain {
                        s,
                        reason: format!("even root of negative z = {z}"),
                    });
                }
                Ok(sign * z.abs().powf(1.0 / m as f64))
            } else {
                Ok(z.signum() * z.abs().powf(1.0 / m as f64))
            }
        }
        None => {
            if z < 0.0 {
                return Err(Error::Domain {
                    s,
                    reason: format!("non-integer power {} of negative z = {z}", 1.0 / m),
                });
            }
            Ok(z.powf(1.0 / m))
        }
    }
}

pub fn solve_bernoulli(problem: &BernoulliFODEProblem) -> Result<BernoulliSolution> {
    let beta = problem.beta;
    if !beta.is_finite() {
        return Err(Error::param("beta must be finite"));
    }
    let trivial_zero = beta > 0.0;
    let (q, r) = (problem.q.clone(), problem.r.clone());
    let linear = |p: Coefficient, g: Coefficient| {
        LinearFODEProblem::new(p, g, problem.y0, problem.s0, problem.s_end)
            .with_step(problem.step)
            .with_time_map(problem.time_map.clone())
            .with_exec(problem.exec)
    };
    if beta == 0.0 {
        let trace = solve_linear(&linear(q, r))?;
        return Ok(BernoulliSolution { trace, trivial_zero });
    }
    if beta == 1.0 {
        let trace = solve_linear(&linear(coefficient(move |s| q(s) - r(s)), super::constant(0.0)))?;
        return Ok(BernoulliSolution { trace, trivial_zero });
    }

    let m = 1.0 - beta;
    let y0 = problem.y0;
    let rhs = {
        let (q, r) = (q.clone(), r.clone());
        move |s: f64, y: f64| r(s) * power(y, beta) - q(s) * y
    };
    if y0 == 0.0 {
        if integer(beta).is_some_and(|b| b >= 2) {
            let grid = super::linear::even_grid(problem.s0, problem.s_end, problem.step);
            let y = vec![0.0; grid.len()];
            let meta = TraceMeta {
                solver: "bernoulli".into(),
                step: (grid[1] - grid[0]).abs(),
                error_estimate: 0.0,
            };
            let trace = SolutionTrace::assemble(grid, y, &problem.time_map, rhs, meta, problem.exec)?;
            return Ok(BernoulliSolution { trace, trivial_zero });
        }
        return Err(Error::InvalidInitialCondition(format!(
            "y0 = 0 is singular for the substitution z = y^(1 - {beta})"
        )));
    }
    if y0 < 0.0 && integer(m).is_none() {
        return Err(Error::InvalidInitialCondition(format!(
            "negative y0 = {y0} has no real power 1 - beta = {m}"
        )));
    }
    let z0 = power(y0, m);
    let zq = coefficient(move |s| m * q(s));
    let zr = coefficient(move |s| m * r(s));
    let z_problem = LinearFODEProblem::new(zq, zr, z0, problem.s0, problem.s_end)
        .with_step(problem.step)
        .with_time_map(TimeMap::Identity)
        .with_exec(problem.exec);
    let z_trace = solve_linear(&z_problem)?;
    let sign = y0.signum();
    let ss = z_trace.ss();
    let mut ys = Vec::with_capacity(ss.len());
    let mut sensitivity: f64 = 0.0;
    // the inner trace's y column holds z
    for p in &z_trace.samples {
        let y = unsubstitute(p.y, m, sign, p.s)?;
        // |dy/dz| = |y / (m z)| turns the z error into a y error
        if p.y != 0.0 {
            sensitivity = sensitivity.max((y / (m * p.y)).abs());
        }
        ys.push(y);
    }
    let meta = TraceMeta {
        solver: "bernoulli".into(),
        step: z_trace.meta.step,
        error_estimate: z_trace.meta.error_estimate * sensitivity,
    };
    let trace = SolutionTrace::assemble(ss, ys, &problem.time_map, rhs, meta, problem.exec)?;
    Ok(BernoulliSolution { trace, trivial_zero })
}

#[cfg(test)]
mod tests {
    use super::super::constant;
    use super::*;

    #[test]
    fn zero_right_side_keeps_value() {
        let pr = BernoulliFODEProblem::new(constant(0.0), constant(0.0), 2.0, 1.0, 0.0, 1.0).with_step(0.01);
        let sol = solve_bernoulli(&pr).unwrap();
        assert!(sol.trace.ys().iter().all(|&y| (y - 1.0).abs() < 1e-15));
        assert!(sol.trivial_zero);
    }

    #[test]
    fn initial_condition_rules() {
        let sqrt = BernoulliFODEProblem::new(constant(0.0), constant(1.0), 0.5, 0.0, 0.0, 1.0);
        assert!(matches!(solve_bernoulli(&sqrt), Err(Error::InvalidInitialCondition(_))));
        let neg = BernoulliFODEProblem::new(constant(0.0), constant(1.0), 0.5, -1.0, 0.0, 1.0);
        assert!(matches!(solve_bernoulli(&neg), Err(Error::InvalidInitialCondition(_))));
        let square = BernoulliFODEProblem::new(constant(1.0), constant(1.0), 2.0, 0.0, 0.0, 1.0).with_step(0.1);
        assert!(solve_bernoulli(&square).unwrap().trace.ys().iter().all(|&y| y == 0.0));
    }

    #[test]
    fn negative_initial_value_on_even_root_keeps_sign() {
        // beta = -1: z = y^2, y = -sqrt(z)
        let pr = BernoulliFODEProblem::new(constant(0.0), constant(0.0), -1.0, -2.0, 0.0, 1.0).with_step(0.1);
        let sol = solve_bernoulli(&pr).unwrap();
        assert!(sol.trace.ys().iter().all(|&y| (y + 2.0).abs() < 1e-14));
        assert!(!sol.trivial_zero);
    }

    #[test]
    fn negative_z_is_a_domain_error() {
        // beta = 1/2 with r < 0 drives z = sqrt(y) through zero
        let pr = BernoulliFODEProblem::new(constant(0.0), constant(-2.0), 0.5, 1.0, 0.0, 3.0).with_step(1e-3);
        assert!(matches!(solve_bernoulli(&pr), Err(Error::Domain { .. })));
    }
}
