//! Fractal ODE solvers. Every solver works in the staircase coordinate `s`
//! and maps back to the ambient time `t` only when assembling the trace.

use std::sync::Arc;

pub mod bernoulli;
pub mod descriptor;
pub mod linear;
pub mod numeric;
pub mod separable;
pub mod trace;

pub use bernoulli::{solve_bernoulli, BernoulliFODEProblem, BernoulliSolution};
pub use descriptor::{BernoulliDescriptor, LinearDescriptor, NumericDescriptor, SeparableDescriptor};
pub use linear::{integrating_factor, solve_linear, IntegratingFactor, LinearFODEProblem};
pub use numeric::{solve_numeric_conjugate, NumericProblem};
pub use separable::{solve_separable, ImplicitRelation, SeparableFODEProblem, SeparableSolution};
pub use trace::{Sample, SolutionTrace, TraceMeta};

/// A coefficient in one variable.
pub type Coefficient = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A right-hand side `f(s, y)`.
pub type Rhs = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Trapezoid step used by the closed-form pipelines when none is given.
pub const DEFAULT_QUADRATURE_STEP: f64 = 1e-4;

/// RK4 step used when none is given.
pub const DEFAULT_RK4_STEP: f64 = 1e-3;

pub fn coefficient<F>(f: F) -> Coefficient
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

pub fn constant(c: f64) -> Coefficient {
    Arc::new(move |_| c)
}

pub fn rhs<F>(f: F) -> Rhs
where
    F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
{
    Arc::new(f)
}

fn check_step(step: f64) -> crate::Result<()> {
    if step > 0.0 && step.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::param(format!(
            "step must be positive and finite, got {step}"
        )))
    }
}

fn check_span(s0: f64, s_end: f64) -> crate::Result<()> {
    if s0.is_finite() && s_end.is_finite() {
        Ok(())
    } else {
        Err(crate::Error::param("solve range must be finite"))
    }
}
