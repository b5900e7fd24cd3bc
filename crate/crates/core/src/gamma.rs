//! Gamma function and the `Γ(α+1)` weight that scales every mass sum.

/// Euler's gamma function for real `x`.
pub fn gamma(x: f64) -> f64 {
    statrs::function::gamma::gamma(x)
}

/// `Γ(α + 1)`.
pub fn mass_weight(alpha: f64) -> f64 {
    gamma(alpha + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Stirling series for ln Γ at large argument, shifted down by recurrence.
    fn gamma_oracle(x: f64) -> f64 {
        let shift = 30usize;
        let z = x + shift as f64;
        let inv = 1.0 / z;
        let inv2 = inv * inv;
        let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0))));
        let ln_g = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
        let mut prod = 1.0;
        for k in 0..shift {
            prod *= x + k as f64;
        }
        ln_g.exp() / prod
    }

    #[test]
    fn matches_stirling_oracle_on_one_to_three() {
        for i in 0..=200 {
            let x = 1.0 + 2.0 * i as f64 / 200.0;
            let rel = (gamma(x) - gamma_oracle(x)).abs() / gamma_oracle(x);
            assert!(rel < 1e-12, "x = {x}: rel err {rel:e}");
        }
    }

    #[test]
    fn integer_and_half_integer_values() {
        assert_eq!(gamma(2.0), 1.0);
        assert!((gamma(1.5) - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-14);
        assert!((mass_weight(3.0) - 6.0).abs() < 1e-12);
    }
}
