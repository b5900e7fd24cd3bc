//! Compound interest, escape velocity, and cooling with time-of-death
//! estimation, all in fractal time.
//!
//! Rates are per unit of `time^α`. Each model takes an optional [`TimeMap`];
//! the default is the `t^α` surrogate.

use serde::{Deserialize, Serialize};

use crate::alpha::AlphaOrder;
use crate::error::{Error, Result};
use crate::fode::{constant, LinearFODEProblem};
use crate::time_map::TimeMap;

fn surrogate(alpha: f64) -> Result<TimeMap> {
    AlphaOrder::for_set(alpha)?;
    TimeMap::surrogate(alpha)
}

fn non_negative_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("time must be finite and non-negative, got {t}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterestParams {
    pub principal: f64,
    pub rate: f64,
    /// Continuous deposit (positive) or withdrawal (negative) rate.
    pub deposit_rate: f64,
    pub alpha: f64,
}

impl InterestParams {
    pub fn time_map(&self) -> Result<TimeMap> {
        surrogate(self.alpha)
    }

    /// The balance equation `dp/ds = r·p + k` from `p(0) = p0`.
    pub fn problem(&self, s_end: f64) -> LinearFODEProblem {
        LinearFODEProblem::new(
            constant(-self.rate),
            constant(self.deposit_rate),
            self.principal,
            0.0,
            s_end,
        )
    }
}

/// Balance at time `t`; `r = 0` uses the limit `p0 + k·s`.
pub fn interest_balance(params: &InterestParams, t: f64) -> Result<f64> {
    interest_balance_with(params, t, &params.time_map()?)
}

pub fn interest_balance_with(params: &InterestParams, t: f64, map: &TimeMap) -> Result<f64> {
    non_negative_time(t)?;
    let s = map.to_s(t)?;
    let InterestParams {
        principal: p0,
        rate: r,
        deposit_rate: k,
        ..
    } = *params;
    if r == 0.0 {
        return Ok(p0 + k * s);
    }
    let growth = (r * s).exp();
    Ok(p0 * growth + k / r * (growth - 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeParams {
    pub gravity: f64,
    pub radius: f64,
    pub launch_speed: f64,
    pub alpha: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EscapeProfile {
    /// Peak altitude; infinite when the launch reaches escape.
    pub max_altitude: f64,
    /// Launch speed needed to reach `max_altitude`.
    pub required_speed: f64,
    pub escape_speed: f64,
}

impl EscapeParams {
    fn validate(&self) -> Result<()> {
        if !(self.gravity > 0.0 && self.radius > 0.0) {
            return Err(Error::param("gravity and radius must be positive"));
        }
        if !(self.launch_speed >= 0.0) {
            return Err(Error::param("launch speed must be non-negative"));
        }
        AlphaOrder::for_set(self.alpha)?;
        Ok(())
    }

    fn two_gr(&self) -> f64 {
        2.0 * self.gravity * self.radius
    }

    /// Peak altitude for a mapped launch speed `w = S(v0)`.
    pub fn altitude_for(&self, w: f64) -> f64 {
        let w2 = w * w;
        if w2 >= self.two_gr() {
            f64::INFINITY
        } else {
            w2 * self.radius / (self.two_gr() - w2)
        }
    }

    /// Mapped launch speed `S(v0)` that peaks at `altitude`.
    pub fn mapped_speed_for(&self, altitude: f64) -> f64 {
        if altitude.is_infinite() {
            return self.two_gr().sqrt();
        }
        (self.two_gr() * altitude / (self.radius + altitude)).sqrt()
    }
}

pub fn escape_profile(params: &EscapeParams) -> Result<EscapeProfile> {
    escape_profile_with(params, &surrogate(params.alpha)?)
}

pub fn escape_profile_with(params: &EscapeParams, map: &TimeMap) -> Result<EscapeProfile> {
    params.validate()?;
    let max_altitude = params.altitude_for(map.to_s(params.launch_speed)?);
    let required_speed = map.to_t(params.mapped_speed_for(max_altitude))?;
    let escape_speed = map.to_t(params.two_gr().sqrt())?;
    Ok(EscapeProfile {
        max_altitude,
        required_speed,
        escape_speed,
    })
}

/// `(2gR)^{1/(2α)}`.
pub fn escape_speed(gravity: f64, radius: f64, alpha: f64) -> Result<f64> {
    let p = EscapeParams {
        gravity,
        radius,
        launch_speed: 0.0,
        alpha,
    };
    escape_profile(&p).map(|e| e.escape_speed)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoolingParams {
    pub ambient: f64,
    /// Temperature when the body is found (`t = 0`).
    pub at_discovery: f64,
    /// Second reading, taken `measured_after` time units later.
    pub measured: f64,
    pub measured_after: f64,
    pub at_death: f64,
    pub alpha: f64,
}

impl CoolingParams {
    pub fn time_map(&self) -> Result<TimeMap> {
        surrogate(self.alpha)
    }

    /// `dT/ds = -k·(T - Ts)` from `T(0) = T0`.
    pub fn problem(&self, k: f64, s_end: f64) -> LinearFODEProblem {
        LinearFODEProblem::new(constant(k), constant(k * self.ambient), self.at_discovery, 0.0, s_end)
    }

    /// Synthesizes both readings for a death `time_since_death` before
    /// discovery with rate `k`.
    pub fn simulate(
        ambient: f64,
        at_death: f64,
        k: f64,
        time_since_death: f64,
        measured_after: f64,
        alpha: f64,
    ) -> Result<CoolingParams> {
        let map = surrogate(alpha)?;
        let at_discovery = ambient + (at_death - ambient) * (-k * map.to_s(time_since_death)?).exp();
        let measured = ambient + (at_discovery - ambient) * (-k * map.to_s(measured_after)?).exp();
        Ok(CoolingParams {
            ambient,
            at_discovery,
            measured,
            measured_after,
            at_death,
            alpha,
        })
    }
}

/// `T(t) = Ts + (T0 - Ts)·e^{-k·S(t)}`.
pub fn cooling_temperature(params: &CoolingParams, k: f64, t: f64) -> Result<f64> {
    cooling_temperature_with(params, k, t, &params.time_map()?)
}

pub fn cooling_temperature_with(params: &CoolingParams, k: f64, t: f64, map: &TimeMap) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::param(format!("cooling rate must be positive, got {k}")));
    }
    non_negative_time(t)?;
    let s = map.to_s(t)?;
    Ok(params.ambient + (params.at_discovery - params.ambient) * (-k * s).exp())
}

/// Rate from the two readings.
pub fn estimate_k(params: &CoolingParams) -> Result<f64> {
    estimate_k_with(params, &params.time_map()?)
}

pub fn estimate_k_with(params: &CoolingParams, map: &TimeMap) -> Result<f64> {
    if !(params.measured_after > 0.0) {
        return Err(Error::param("the second reading must come after discovery"));
    }
    let ratio = (params.measured - params.ambient) / (params.at_discovery - params.ambient);
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InconsistentMeasurement { ratio });
    }
    Ok(-ratio.ln() / map.to_s(params.measured_after)?)
}

/// Time between death and discovery.
pub fn estimate_time_of_death(params: &CoolingParams) -> Result<f64> {
    estimate_time_of_death_with(params, &params.time_map()?)
}

pub fn estimate_time_of_death_with(params: &CoolingParams, map: &TimeMap) -> Result<f64> {
    let k = estimate_k_with(params, map)?;
    let ratio = (params.at_discovery - params.ambient) / (params.at_death - params.ambient);
    // the body cannot be farther from ambient at discovery than at death
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InconsistentMeasurement { ratio });
    }
    let s = (-(1.0 / k) * (1.0 / ratio).ln()).abs();
    map.to_t(s)
}
