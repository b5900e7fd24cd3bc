use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::quadrature::{gauss_legendre, uniform_grid};
use crate::time_map::TimeMap;

use super::trace::{SolutionTrace, TraceMeta};
use super::{check_span, check_step, Coefficient, DEFAULT_QUADRATURE_STEP};

/// Panel width for the standalone antiderivative evaluations.
const PANEL: f64 = 0.05;
const MAX_EXPANSIONS: u32 = 60;
const MAX_BISECTIONS: u32 = 200;

/// `N(y)·dy/ds + M(s) = 0`, `y(s0) = y0`.
#[derive(Clone)]
pub struct SeparableFODEProblem {
    pub m: Coefficient,
    pub n: Coefficient,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    pub step: f64,
    /// Lower limits of the two antiderivatives.
    pub s_anchor: f64,
    pub y_anchor: f64,
    pub time_map: TimeMap,
    pub exec: Exec,
}

impl SeparableFODEProblem {
    pub fn new(m: Coefficient, n: Coefficient, y0: f64, s0: f64, s_end: f64) -> Self {
        SeparableFODEProblem {
            m,
            n,
            y0,
            s0,
            s_end,
            step: DEFAULT_QUADRATURE_STEP,
            s_anchor: 0.0,
            y_anchor: 0.0,
            time_map: TimeMap::Identity,
            exec: Exec::default(),
        }
    }

    /// From `dy/ds = f(s)/h(y)`: `M = -f`, `N = h`.
    pub fn from_quotient(f: Coefficient, h: Coefficient, y0: f64, s0: f64, s_end: f64) -> Self {
        let m: Coefficient = std::sync::Arc::new(move |s| -f(s));
        SeparableFODEProblem::new(m, h, y0, s0, s_end)
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_anchors(mut self, s_anchor: f64, y_anchor: f64) -> Self {
        self.s_anchor = s_anchor;
        self.y_anchor = y_anchor;
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

impl std::fmt::Debug for SeparableFODEProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SeparableFODEProblem")
            .field("y0", &self.y0)
            .field("s0", &self.s0)
            .field("s_end", &self.s_end)
            .finish_non_exhaustive()
    }
}

fn antiderivative(f: &Coefficient, from: f64, to: f64) -> f64 {
    let panels = ((to - from).abs() / PANEL).ceil() as usize;
    gauss_legendre(|x| f(x), from, to, panels.max(1))
}

/// The implicit solution `H1(s) + H2(y) = c`.
#[derive(Clone)]
pub struct ImplicitRelation {
    m: Coefficient,
    n: Coefficient,
    s_anchor: f64,
    y_anchor: f64,
    pub c: f64,
}

impl ImplicitRelation {
    /// `∫ M` from the `s` anchor.
    pub fn h1(&self, s: f64) -> f64 {
        antiderivative(&self.m, self.s_anchor, s)
    }

    /// `∫ N` from the `y` anchor.
    pub fn h2(&self, y: f64) -> f64 {
        antiderivative(&self.n, self.y_anchor, y)
    }

    pub fn residual(&self, s: f64, y: f64) -> f64 {
        self.h1(s) + self.h2(y) - self.c
    }
}

impl std::fmt::Debug for ImplicitRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ImplicitRelation")
            .field("s_anchor", &self.s_anchor)
            .field("y_anchor", &self.y_anchor)
            .field("c", &self.c)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Debug)]
pub struct SeparableSolution {
    pub relation: ImplicitRelation,
    pub trace: SolutionTrace,
}

/// Root of `∫_{y_prev}^{y} N + dh1 = 0` on the branch through `y_prev`.
fn next_value(n: &Coefficient, y_prev: f64, dh1: f64, s: f64) -> Result<f64> {
    if dh1 == 0.0 {
        return Ok(y_prev);
    }
    let n_prev = n(y_prev);
    let terminate = |reason: String| Error::BranchTerminated {
        last_s: s,
        last_y: y_prev,
        reason,
    };
    if !(n_prev.is_finite() && n_prev != 0.0) {
        return Err(terminate(format!("N(y) = {n_prev} at the last accepted value")));
    }
    let phi = |y: f64| gauss_legendre(|x| n(x), y_prev, y, 1) + dh1;
    let direction = -dh1 / n_prev;
    let mut b = y_prev + direction;
    let mut fb = phi(b);
    let mut expansions = 0;
    // φ(y_prev) = dh1, so the root lies where φ changes sign
    while fb.signum() == dh1.signum() {
        if n(b).signum() != n_prev.signum() || expansions >= MAX_EXPANSIONS {
            return Err(terminate("no root on this branch (N changes sign or fold)".into()));
        }
        b = y_prev + direction * 2f64.powi(expansions as i32 + 1);
        fb = phi(b);
        expansions += 1;
    }
    if !fb.is_finite() {
        return Err(terminate("N is not finite inside the bracket".into()));
    }
    let (mut lo, mut hi) = (y_prev, b);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if phi(mid).signum() == dh1.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    if n(root).signum() != n_prev.signum() {
        return Err(terminate("branch reaches N = 0".into()));
    }
    Ok(root)
}

pub fn solve_separable(problem: &SeparableFODEProblem) -> Result<SeparableSolution> {
    check_step(problem.step)?;
    check_span(problem.s0, problem.s_end)?;
    let n0 = (problem.n)(problem.y0);
    if !(n0.is_finite() && n0 != 0.0) {
        return Err(Error::InvalidInitialCondition(format!(
            "N(y0) = {n0} must be finite and nonzero"
        )));
    }
    let mut relation = ImplicitRelation {
        m: problem.m.clone(),
        n: problem.n.clone(),
        s_anchor: problem.s_anchor,
        y_anchor: problem.y_anchor,
        c: 0.0,
    };
    relation.c = relation.h1(problem.s0) + relation.h2(problem.y0);

    let grid = uniform_grid(problem.s0, problem.s_end, problem.step);
    let increments = problem.exec.map_range(grid.len() - 1, |i| {
        gauss_legendre(|x| (problem.m)(x), grid[i], grid[i + 1], 1)
    });
    let mut ys = Vec::with_capacity(grid.len());
    ys.push(problem.y0);
    for (i, dh1) in increments.iter().enumerate() {
        let y = next_value(&problem.n, ys[i], *dh1, grid[i])?;
        ys.push(y);
    }
    let error_estimate = problem
        .exec
        .map_range(grid.len(), |i| relation.residual(grid[i], ys[i]).abs() / n0.abs())
        .into_iter()
        .fold(0.0, f64::max);
    let meta = TraceMeta {
        solver: "separable".into(),
        step: (grid[1] - grid[0]).abs(),
        error_estimate,
    };
    let (m, n) = (problem.m.clone(), problem.n.clone());
    let trace = SolutionTrace::assemble(
        grid,
        ys,
        &problem.time_map,
        move |s, y| -m(s) / n(y),
        meta,
        problem.exec,
    )?;
    Ok(SeparableSolution { relation, trace })
}
