//! JSON problem descriptors with coefficients written as expressions.

use serde::{Deserialize, Serialize};

use crate::expr::Expr;
use crate::time_map::TimeMap;

use super::bernoulli::BernoulliFODEProblem;
use super::linear::LinearFODEProblem;
use super::numeric::NumericProblem;
use super::separable::SeparableFODEProblem;
use super::{DEFAULT_QUADRATURE_STEP, DEFAULT_RK4_STEP};

fn identity() -> TimeMap {
    TimeMap::Identity
}

fn quadrature_step() -> f64 {
    DEFAULT_QUADRATURE_STEP
}

fn rk4_step() -> f64 {
    DEFAULT_RK4_STEP
}

/// `dy/ds + p(s)·y = g(s)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearDescriptor {
    pub p: Expr,
    pub g: Expr,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    #[serde(default = "quadrature_step")]
    pub step: f64,
    #[serde(default = "identity")]
    pub time_map: TimeMap,
}

impl LinearDescriptor {
    pub fn to_problem(&self) -> LinearFODEProblem {
        LinearFODEProblem::new(self.p.in_s(), self.g.in_s(), self.y0, self.s0, self.s_end)
            .with_step(self.step)
            .with_time_map(self.time_map.clone())
    }
}

/// `dy/ds + q(s)·y = r(s)·y^beta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BernoulliDescriptor {
    pub q: Expr,
    pub r: Expr,
    pub beta: f64,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    #[serde(default = "quadrature_step")]
    pub step: f64,
    #[serde(default = "identity")]
    pub time_map: TimeMap,
}

impl BernoulliDescriptor {
    pub fn to_problem(&self) -> BernoulliFODEProblem {
        BernoulliFODEProblem::new(self.q.in_s(), self.r.in_s(), self.beta, self.y0, self.s0, self.s_end)
            .with_step(self.step)
            .with_time_map(self.time_map.clone())
    }
}

/// `N(y)·dy/ds + M(s) = 0`; `n` is written in `y`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparableDescriptor {
    pub m: Expr,
    pub n: Expr,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    #[serde(default = "quadrature_step")]
    pub step: f64,
    #[serde(default)]
    pub s_anchor: f64,
    #[serde(default)]
    pub y_anchor: f64,
    #[serde(default = "identity")]
    pub time_map: TimeMap,
}

impl SeparableDescriptor {
    pub fn to_problem(&self) -> SeparableFODEProblem {
        SeparableFODEProblem::new(self.m.in_s(), self.n.in_y(), self.y0, self.s0, self.s_end)
            .with_step(self.step)
            .with_anchors(self.s_anchor, self.y_anchor)
            .with_time_map(self.time_map.clone())
    }
}

/// `dy/ds = f(s, y)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericDescriptor {
    pub rhs: Expr,
    pub y0: f64,
    pub s0: f64,
    pub s_end: f64,
    #[serde(default = "rk4_step")]
    pub step: f64,
    #[serde(default = "identity")]
    pub time_map: TimeMap,
}

impl NumericDescriptor {
    pub fn to_problem(&self) -> NumericProblem {
        NumericProblem::new(self.rhs.in_sy(), self.y0, self.s0, self.s_end)
            .with_step(self.step)
            .with_time_map(self.time_map.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_round_trip() {
        let text = r#"{"p":"1/2","g":"10 + 5*sin(2*s)","y0":0.0,"s0":0.0,"s_end":1.0,"time_map":{"mode":"surrogate","alpha":0.8}}"#;
        let d: LinearDescriptor = serde_json::from_str(text).unwrap();
        assert_eq!(d.step, DEFAULT_QUADRATURE_STEP);
        let back: LinearDescriptor = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        assert_eq!(back, d);
        let pr = d.to_problem();
        assert_eq!((pr.p)(3.0), 0.5);
    }

    #[test]
    fn bad_expression_fails_to_load() {
        let text = r#"{"rhs":"z*2","y0":1.0,"s0":0.0,"s_end":1.0}"#;
        assert!(serde_json::from_str::<NumericDescriptor>(text).is_err());
    }
}
