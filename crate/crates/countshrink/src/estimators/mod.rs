//! Comparator estimators for Poisson mean vectors.
//!
//! Everything here estimates the same quantity — the vector of Poisson
//! means behind an observed count vector — by a different route:
//!
//! - [`robbins`]: the frequency-ratio rule, purely empirical.
//! - [`kw_npmle`] / [`kw_posterior_mean`] / [`kw_weight`]: nonparametric
//!   maximum likelihood over the mixing distribution, fit by EM on a fixed
//!   grid, plus the plug-in Bayes rules it induces.
//! - [`global_gamma`]: a single conjugate gamma prior, hyperparameters by
//!   marginal maximum likelihood — global shrinkage with no local term.
//! - [`zip_bayes`]: a zero-inflated variant that adds a structural-zero
//!   component with its own mixing weight, fit by EM.
//! - [`horseshoe`]: the local-global shrinkage pipeline with the
//!   thresholding exponent pinned at one, the half-Cauchy special case.
//! - [`two_groups_weight`]: the oracle shrinkage weight under a known
//!   two-component gamma mixture, used as a reference point in testing
//!   experiments.
//!
//! All fitting procedures are deterministic: fixed grids, fixed iteration
//! schedules, no randomized initialization.

mod global;
mod horseshoe;
mod kw;
mod robbins;
mod two_groups;
mod zip;

pub use global::{global_gamma, GlobalGammaFit};
pub use horseshoe::horseshoe;
pub use kw::{kw_npmle, kw_posterior_mean, kw_weight, NPMLESolution};
pub use robbins::robbins;
pub use two_groups::{two_groups_posterior_mean, two_groups_weight, TwoGroupsParams};
pub use zip::{zip_bayes, ZipFit};

use crate::specfun::ln_gamma;

/// log Poi(y | θ) for θ > 0.
pub(crate) fn log_poisson_pmf(y: u64, theta: f64) -> f64 {
    let yf = y as f64;
    yf * theta.ln() - theta - ln_gamma(yf + 1.0)
}

/// log of the gamma-mixed Poisson (negative binomial) pmf with a
/// Ga(shape, rate) prior on the mean:
/// m(y) = Γ(y+shape)/(Γ(shape)·y!) · (rate/(1+rate))^shape · (1+rate)^{−y}.
pub(crate) fn log_nb_marginal_rate(y: u64, shape: f64, rate: f64) -> f64 {
    let yf = y as f64;
    ln_gamma(yf + shape) - ln_gamma(shape) - ln_gamma(yf + 1.0)
        + shape * (rate.ln() - (1.0 + rate).ln())
        - yf * (1.0 + rate).ln()
}

/// Same marginal under the Ga(shape, scale) parameterization, the natural
/// one when the posterior mean is written (y+shape)·scale/(1+scale).
pub(crate) fn log_nb_marginal_scale(y: u64, shape: f64, scale: f64) -> f64 {
    log_nb_marginal_rate(y, shape, 1.0 / scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poisson_pmf_matches_direct_formula() {
        // Poi(3 | 2) = e^{-2} 8/6.
        let direct = (-2.0_f64).exp() * 8.0 / 6.0;
        assert!((log_poisson_pmf(3, 2.0).exp() - direct).abs() < 1e-15);
    }

    #[test]
    fn nb_marginal_sums_to_one() {
        let total: f64 = (0..2000).map(|y| log_nb_marginal_rate(y, 1.3, 0.7).exp()).sum();
        assert!((total - 1.0).abs() < 1e-12, "total = {total}");
    }

    #[test]
    fn scale_and_rate_forms_agree() {
        let a = log_nb_marginal_scale(4, 0.8, 2.5);
        let b = log_nb_marginal_rate(4, 0.8, 0.4);
        assert!((a - b).abs() < 1e-14);
    }
}
