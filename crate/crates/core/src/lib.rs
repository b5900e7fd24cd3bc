//! Numerical fractal calculus.
//!
//! The crate builds Cantor-like sets and self-similar curves, evaluates their
//! mass functions, γ-dimensions and integral staircases, differentiates and
//! integrates against those staircases, and solves α-order fractal
//! differential equations (linear, Bernoulli, separable, and a generic
//! conjugate RK4 route). Application models and the figure sweeps sit on top.
//!
//! All solvers work in the staircase coordinate `s = S(t)`, where fractal
//! calculus reduces to ordinary calculus; a [`time_map::TimeMap`] converts
//! between `t` and `s` for output.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha;
pub mod calculus;
pub mod cli;
pub mod curves;
pub mod error;
pub mod exec;
pub mod expr;
pub mod figures;
pub mod fode;
pub mod gamma;
pub mod interval;
pub mod models;
pub mod quadrature;
pub mod refinement;
pub mod sets;
pub mod staircase;
pub mod time_map;

pub use alpha::AlphaOrder;
pub use error::{Error, Result};
pub use exec::Exec;
pub use interval::Interval;
pub use staircase::StaircaseTable;
