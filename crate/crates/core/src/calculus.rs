//! Difference-quotient derivative, Stieltjes integral, and the conjugacy
//! between functions of `x` and functions of the staircase value `s`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curves::CurveApprox;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::interval::Interval;
use crate::sets::{flag, IntervalCover};
use crate::staircase::StaircaseTable;

const ON_SET_SLACK: f64 = 1e-13;

pub type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Where a function lives: a set cover, a curve's parameter range, or the
/// whole staircase domain.
#[derive(Clone, Debug)]
pub enum Support {
    Set(IntervalCover),
    Curve(CurveApprox),
    Domain,
}

/// A function on a fractal support together with its staircase coordinate.
#[derive(Clone)]
pub struct FractalFunction {
    evaluator: Evaluator,
    staircase: StaircaseTable,
    support: Support,
}

impl std::fmt::Debug for FractalFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FractalFunction")
            .field("staircase_domain", &self.staircase.domain())
            .field("support", &self.support)
            .finish_non_exhaustive()
    }
}

impl FractalFunction {
    pub fn new<F>(f: F, staircase: StaircaseTable, support: Support) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        FractalFunction {
            evaluator: Arc::new(f),
            staircase,
            support,
        }
    }

    /// The staircase itself as a function, `x ↦ S(x)`.
    pub fn staircase_function(staircase: StaircaseTable, support: Support) -> Self {
        let table = staircase.clone();
        FractalFunction::new(move |x| table.eval(x).unwrap_or(f64::NAN), staircase, support)
    }

    pub fn staircase(&self) -> &StaircaseTable {
        &self.staircase
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok((self.evaluator)(x))
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.staircase.domain();
        if lo <= x && x <= hi {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "function argument",
                value: x,
                lo,
                hi,
            })
        }
    }

    /// Whether `x` belongs to the support (at the cover's resolution).
    pub fn on_support(&self, x: f64) -> bool {
        match &self.support {
            Support::Set(cover) => {
                // absorb rounding in computed endpoints such as 2/9
                let slack = ON_SET_SLACK * cover.bounds().width();
                cover.bounds().contains(x)
                    && flag(
                        cover,
                        Interval {
                            lo: x - slack,
                            hi: x + slack,
                        },
                    )
            }
            Support::Curve(curve) => curve.param_range().contains(x),
            Support::Domain => {
                let (lo, hi) = self.staircase.domain();
                lo <= x && x <= hi
            }
        }
    }
}

/// Default derivative step: square root of the smallest positive staircase increment.
pub fn default_step(staircase: &StaircaseTable) -> Result<f64> {
    staircase
        .min_positive_increment()
        .map(f64::sqrt)
        .ok_or_else(|| Error::param("staircase is constant; no derivative step exists"))
}

/// Difference quotient in the staircase coordinate, 0 off the support.
pub fn f_alpha_derivative(f: &FractalFunction, x: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::param(format!("derivative step must be positive, got {h}")));
    }
    f.check_domain(x)?;
    if !f.on_support(x) {
        return Ok(0.0);
    }
    let table = &f.staircase;
    let s = table.eval(x)?;
    let fx = (f.evaluator)(x);
    let (smin, smax) = table.value_range();
    let quotient = |target: f64| -> Option<f64> {
        if target < smin || target > smax {
            return None;
        }
        let y = table.invert(target).ok()?;
        let sy = table.eval(y).ok()?;
        let ds = sy - s;
        (ds != 0.0).then(|| ((f.evaluator)(y) - fx) / ds)
    };
    match (quotient(s + h), quotient(s - h)) {
        (Some(r), Some(l)) => Ok(0.5 * (r + l)),
        (Some(q), None) | (None, Some(q)) => Ok(q),
        (None, None) => Err(Error::DerivativeUndefined { x }),
    }
}

/// Midpoint of the upper and lower Stieltjes sums, with their gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub upper: f64,
    pub lower: f64,
    pub gap: f64,
}

pub fn f_alpha_integral(f: &FractalFunction, range: impl Into<Interval>, tol: f64) -> Result<IntegralEstimate> {
    f_alpha_integral_with(f, range, tol, Exec::default())
}

/// Upper and lower sums over the staircase cells inside `range`; the
/// integrand is sampled at both cell ends and the midpoint.
pub fn f_alpha_integral_with(
    f: &FractalFunction,
    range: impl Into<Interval>,
    tol: f64,
    exec: Exec,
) -> Result<IntegralEstimate> {
    let range = range.into();
    f.check_domain(range.lo)?;
    f.check_domain(range.hi)?;
    let table = &f.staircase;
    let mut xs = vec![range.lo];
    xs.extend(
        table
            .breakpoints()
            .iter()
            .copied()
            .filter(|&b| range.lo < b && b < range.hi),
    );
    if range.hi > range.lo {
        xs.push(range.hi);
    }
    let ss: Vec<f64> = xs.iter().map(|&x| table.eval(x)).collect::<Result<_>>()?;
    let cells: Vec<usize> = (0..xs.len().saturating_sub(1)).filter(|&i| ss[i + 1] > ss[i]).collect();
    let sums = exec.map(&cells, |&i| {
        let ds = ss[i + 1] - ss[i];
        let samples = [
            (f.evaluator)(xs[i]),
            (f.evaluator)(0.5 * (xs[i] + xs[i + 1])),
            (f.evaluator)(xs[i + 1]),
        ];
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        (hi * ds, lo * ds)
    });
    let (upper, lower) = sums.iter().fold((0.0, 0.0), |(u, l), (a, b)| (u + a, l + b));
    if !(upper.is_finite() && lower.is_finite()) {
        return Err(Error::Numeric(
            "integrand is unbounded or undefined on the range".into(),
        ));
    }
    let gap = upper - lower;
    if gap > tol {
        return Err(Error::NonIntegrable { gap, tolerance: tol });
    }
    Ok(IntegralEstimate {
        value: 0.5 * (upper + lower),
        upper,
        lower,
        gap,
    })
}

/// `g = f ∘ S⁻¹`, an ordinary function of the staircase value.
#[derive(Clone)]
pub struct OrdinaryFunction {
    inner: FractalFunction,
}

impl OrdinaryFunction {
    pub fn eval(&self, s: f64) -> Result<f64> {
        let x = self.inner.staircase.invert(s)?;
        Ok((self.inner.evaluator)(x))
    }

    pub fn value_range(&self) -> (f64, f64) {
        self.inner.staircase.value_range()
    }
}

pub fn conjugate_to_ordinary(f: &FractalFunction) -> OrdinaryFunction {
    OrdinaryFunction { inner: f.clone() }
}

/// `f = g ∘ S` on the staircase's domain.
pub fn conjugate_from_ordinary<G>(g: G, staircase: StaircaseTable, support: Support) -> FractalFunction
where
    G: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let table = staircase.clone();
    FractalFunction::new(move |x| table.eval(x).map(&g).unwrap_or(f64::NAN), staircase, support)
}
