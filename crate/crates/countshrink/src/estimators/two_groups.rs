//! Oracle shrinkage weight under a known two-component gamma mixture.
//!
//! When the means truly follow θ ~ (1−p)·Ga(α₀, β) + p·Ga(α₀, β+δ) with
//! gamma *scales* β and β+δ, the exact posterior mean of θ given a count is
//! ω*·(y+α₀), where ω* mixes the two conjugate shrinkage slopes by the
//! posterior probability of each component. This closed form serves as the
//! reference point the adaptive estimators are judged against in testing
//! experiments.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::log_nb_marginal_scale;

/// Mixture parameters: a concentrated null component Ga(α₀, scale β) and a
/// flatter alternative Ga(α₀, scale β+δ) holding weight `omega_prior`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoGroupsParams {
    /// Prior probability of the alternative component, in (0, 1).
    pub omega_prior: f64,
    /// Common gamma shape α₀ > 0.
    pub alpha0: f64,
    /// Null-component scale β > 0 (small: mass near zero).
    pub beta0: f64,
    /// Scale increment δ ≥ 0 of the alternative component.
    pub delta: f64,
}

impl TwoGroupsParams {
    pub fn new(omega_prior: f64, alpha0: f64, beta0: f64, delta: f64) -> Result<Self> {
        if !(omega_prior > 0.0 && omega_prior < 1.0) {
            return Err(Error::domain(
                "two_groups",
                format!("omega_prior must lie in (0,1), got {omega_prior}"),
            ));
        }
        if !(alpha0 > 0.0 && alpha0.is_finite()) || !(beta0 > 0.0 && beta0.is_finite()) {
            return Err(Error::domain(
                "two_groups",
                format!("shape and scale must be positive, got α₀={alpha0}, β={beta0}"),
            ));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::domain(
                "two_groups",
                format!("delta must be nonnegative, got {delta}"),
            ));
        }
        Ok(TwoGroupsParams { omega_prior, alpha0, beta0, delta })
    }

    /// Posterior probability that the count came from the alternative
    /// component, from the two gamma-mixed-Poisson marginals.
    fn posterior_alt_prob(&self, y: u64) -> f64 {
        let lw_alt = self.omega_prior.ln()
            + log_nb_marginal_scale(y, self.alpha0, self.beta0 + self.delta);
        let lw_null =
            (1.0 - self.omega_prior).ln() + log_nb_marginal_scale(y, self.alpha0, self.beta0);
        1.0 / (1.0 + (lw_null - lw_alt).exp())
    }
}

/// The observation-specific shrinkage weight
/// ω*(y) = (1−ω)·β/(1+β) + ω·(β+δ)/(1+β+δ),
/// with ω the posterior probability of the alternative component given y.
///
/// Each term is a conjugate slope: given the component scale s, the
/// posterior mean of θ is (y+α₀)·s/(1+s), so E(θ|y) = ω*(y)·(y+α₀) exactly.
pub fn two_groups_weight(y: u64, tg: &TwoGroupsParams) -> f64 {
    let omega = tg.posterior_alt_prob(y);
    let s0 = tg.beta0;
    let s1 = tg.beta0 + tg.delta;
    (1.0 - omega) * s0 / (1.0 + s0) + omega * s1 / (1.0 + s1)
}

/// Exact posterior mean E(θ|y) = ω*(y)·(y+α₀) under the mixture.
pub fn two_groups_posterior_mean(y: u64, tg: &TwoGroupsParams) -> f64 {
    two_groups_weight(y, tg) * (y as f64 + tg.alpha0)
}
