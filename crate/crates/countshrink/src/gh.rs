//! The Gauss-hypergeometric (GH) shrinkage prior and its exact posterior.
//!
//! Model: counts y_i ~ Poisson(θ_i) with θ_i ~ Ga(α, λ_i²τ²) (scale
//! parameterization) and a local scale hierarchy that, expressed through the
//! shrinkage factor κ_i = 1/(1 + λ_i²τ²), puts κ_i ~ GH(1/2, 1/2, τ²−1, γ).
//! Integrating θ_i out gives [y_i | κ_i] ~ NB(α, 1−κ_i), and the GH family
//! is conjugate to that likelihood: the posterior of κ_i is again GH with
//! parameters (α+1/2, y_i+1/2, τ²−1, γ). Every quantity in this module —
//! densities, posterior moments, the marginal pmf of y, tail bounds — is an
//! exact expression in log-beta and Gauss ₂F₁ values, evaluated in log space.
//!
//! The posterior mean of θ_i is (1 − E(κ_i|y_i))·(y_i + α), so E(κ|y) is the
//! entire story: κ near 1 files the observation as noise, κ near 0 leaves it
//! alone. The quantity 1 − E(κ|y) doubles as a pseudo posterior inclusion
//! probability for the multiple-testing rule in [`crate::multitest`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::{
    digamma, ln_gamma, log_beta, log_gauss_2f1_compl, scaled_upper_inc_gamma, EvalControl,
};

/// Hyperparameters of the GH shrinkage prior.
///
/// `z = τ²−1 ∈ (−1, 0]` is carried alongside τ because every posterior
/// formula consumes it; it is derived in the constructor and kept consistent
/// by construction. τ = 1 means no global shrinkage (z = 0, and all ₂F₁
/// factors collapse to 1); τ = 0 is degenerate and excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GHParams {
    /// Shape of the Ga(α, λ²τ²) layer; 1/2 is the recommended default.
    pub alpha: f64,
    /// Thresholding exponent γ ≥ 0; larger values push small counts harder
    /// toward full shrinkage.
    pub gamma: f64,
    /// Global shrinkage scale τ ∈ (0, 1].
    pub tau: f64,
    /// τ² − 1, the z-argument of the GH density.
    z: f64,
    /// τ² exactly as computed from τ — kept separately because recovering it
    /// as 1+z loses all precision once τ² is below ~1e-16.
    tau_sq: f64,
}

impl GHParams {
    /// Smallest admissible τ; below this the posterior is numerically
    /// indistinguishable from the τ → 0 degenerate limit.
    pub const MIN_TAU: f64 = 1e-6;

    /// Validates and builds the parameter set.
    pub fn new(alpha: f64, gamma: f64, tau: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::domain(
                "GHParams",
                format!("alpha must be positive and finite, got {alpha}"),
            ));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::domain(
                "GHParams",
                format!("gamma must be nonnegative and finite, got {gamma}"),
            ));
        }
        if !(tau > 0.0 && tau <= 1.0) {
            return Err(Error::domain(
                "GHParams",
                format!("tau must lie in (0, 1], got {tau}"),
            ));
        }
        let tau_sq = tau * tau;
        Ok(GHParams {
            alpha,
            gamma,
            tau,
            z: tau_sq - 1.0,
            tau_sq,
        })
    }

    /// Parameters with the recommended default α = 1/2.
    pub fn default_alpha(gamma: f64, tau: f64) -> Result<Self> {
        GHParams::new(0.5, gamma, tau)
    }

    /// z = τ² − 1.
    pub fn z(&self) -> f64 {
        self.z
    }

    /// τ², computed once from τ.
    pub fn tau_sq(&self) -> f64 {
        self.tau_sq
    }
}

/// A GH(a, b, z, γ) distribution on (0,1) with its log-normalizer.
///
/// Density: C · κ^{a−1} (1−κ)^{b−1} (1+zκ)^{−γ} with
/// C⁻¹ = β(a,b) · ₂F₁(γ, a; a+b; −z).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GHDistribution {
    pub a: f64,
    pub b: f64,
    pub z: f64,
    pub gamma: f64,
    /// log C⁻¹ = log β(a,b) + log ₂F₁(γ, a; a+b; −z).
    pub log_norm: f64,
    /// 1 + z, carried exactly (see [`GHParams::tau_sq`]).
    z_plus_one: f64,
}

impl GHDistribution {
    /// Builds the distribution from raw parameters, computing the normalizer.
    pub fn new(a: f64, b: f64, z: f64, gamma: f64) -> Result<Self> {
        GHDistribution::from_parts(a, b, z, 1.0 + z, gamma, &EvalControl::default())
    }

    fn from_parts(
        a: f64,
        b: f64,
        z: f64,
        z_plus_one: f64,
        gamma: f64,
        ctl: &EvalControl,
    ) -> Result<Self> {
        if !(a > 0.0) || !(b > 0.0) {
            return Err(Error::domain(
                "GHDistribution",
                format!("shape parameters must be positive, got a={a}, b={b}"),
            ));
        }
        if !(z > -1.0 && z <= 0.0) {
            return Err(Error::domain(
                "GHDistribution",
                format!("z must lie in (−1, 0], got {z}"),
            ));
        }
        if !(gamma >= 0.0) {
            return Err(Error::domain(
                "GHDistribution",
                format!("gamma must be nonnegative, got {gamma}"),
            ));
        }
        let log_norm = log_beta(a, b)? + log_gauss_2f1_compl(gamma, a, a + b, z_plus_one, ctl)?;
        Ok(GHDistribution {
            a,
            b,
            z,
            gamma,
            log_norm,
            z_plus_one,
        })
    }
}

/// Log density of a GH distribution at κ ∈ (0,1).
///
/// The factor 1+zκ is evaluated as (1−κ) + (1+z)·κ, which keeps full
/// relative precision as κ → 1 where the direct form cancels to the order of
/// τ².
pub fn gh_log_density(kappa: f64, dist: &GHDistribution) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::domain(
            "gh_log_density",
            format!("kappa must lie strictly inside (0,1), got {kappa}"),
        ));
    }
    let one_minus = 1.0 - kappa;
    let one_plus_zk = one_minus + dist.z_plus_one * kappa;
    Ok((dist.a - 1.0) * kappa.ln() + (dist.b - 1.0) * one_minus.ln()
        - dist.gamma * one_plus_zk.ln()
        - dist.log_norm)
}

/// Posterior of the shrinkage factor: κ | y ~ GH(α+1/2, y+1/2, τ²−1, γ).
pub fn posterior_kappa_dist(y: u64, p: &GHParams) -> Result<GHDistribution> {
    GHDistribution::from_parts(
        p.alpha + 0.5,
        y as f64 + 0.5,
        p.z,
        p.tau_sq,
        p.gamma,
        &EvalControl::default(),
    )
}

/// k-th posterior moment E(κ^k | y): a ratio of β·₂F₁ products where the
/// numerator shifts the first beta argument by k. Everything in log space.
pub fn posterior_kappa_moment(k: u32, y: u64, p: &GHParams) -> Result<f64> {
    posterior_kappa_moment_ctl(k, y, p, &EvalControl::default())
}

pub(crate) fn posterior_kappa_moment_ctl(
    k: u32,
    y: u64,
    p: &GHParams,
    ctl: &EvalControl,
) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let a = p.alpha + 0.5;
    let b = y as f64 + 0.5;
    let kf = k as f64;
    let log_num = log_beta(a + kf, b)? + log_gauss_2f1_compl(p.gamma, a + kf, a + kf + b, p.tau_sq, ctl)?;
    let log_den = log_beta(a, b)? + log_gauss_2f1_compl(p.gamma, a, a + b, p.tau_sq, ctl)?;
    Ok((log_num - log_den).exp())
}

/// E(1−κ | y), the pseudo posterior inclusion probability.
///
/// Computed by shifting the *second* beta argument instead of subtracting
/// E(κ|y) from 1: near-total shrinkage has E(κ|y) within 1e-6 of 1, and the
/// subtraction would surrender exactly the digits this quantity is about.
pub fn posterior_inclusion(y: u64, p: &GHParams) -> Result<f64> {
    posterior_inclusion_ctl(y, p, &EvalControl::default())
}

pub(crate) fn posterior_inclusion_ctl(y: u64, p: &GHParams, ctl: &EvalControl) -> Result<f64> {
    let a = p.alpha + 0.5;
    let b = y as f64 + 0.5;
    let log_num = log_beta(a, b + 1.0)? + log_gauss_2f1_compl(p.gamma, a, a + b + 1.0, p.tau_sq, ctl)?;
    let log_den = log_beta(a, b)? + log_gauss_2f1_compl(p.gamma, a, a + b, p.tau_sq, ctl)?;
    Ok((log_num - log_den).exp())
}

/// Posterior mean of the Poisson rate: E(θ | y) = (1 − E(κ|y))·(y + α).
pub fn posterior_theta_mean(y: u64, p: &GHParams) -> Result<f64> {
    posterior_theta_mean_ctl(y, p, &EvalControl::default())
}

pub(crate) fn posterior_theta_mean_ctl(y: u64, p: &GHParams, ctl: &EvalControl) -> Result<f64> {
    Ok(posterior_inclusion_ctl(y, p, ctl)? * (y as f64 + p.alpha))
}

/// Per-observation posterior summaries for a count vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkageResult {
    /// E(κ | y_i): the posterior shrinkage factor, in (0,1).
    pub kappa_mean: Vec<f64>,
    /// E(θ | y_i) = inclusion · (y_i + α).
    pub theta_mean: Vec<f64>,
    /// 1 − E(κ | y_i), the pseudo inclusion probability, in (0,1).
    pub inclusion: Vec<f64>,
}

/// Marginal pmf evaluator with the y-independent pieces precomputed.
///
/// m(y) = Γ(y+α)/(Γ(α)·y!) · β(α+1/2, y+1/2)·₂F₁(γ, α+1/2; y+α+1; 1−τ²)
///        / [β(1/2,1/2)·₂F₁(γ, 1/2; 1; 1−τ²)].
///
/// The denominator is the prior normalizer of κ ~ GH(1/2, 1/2, z, γ) and
/// costs one ₂F₁ evaluation shared across every y, which matters inside
/// likelihood sums.
pub(crate) struct MarginalEvaluator<'p> {
    p: &'p GHParams,
    ctl: EvalControl,
    log_prior_norm: f64,
    ln_gamma_alpha: f64,
}

impl<'p> MarginalEvaluator<'p> {
    pub(crate) fn new(p: &'p GHParams, ctl: EvalControl) -> Result<Self> {
        let log_prior_norm =
            log_beta(0.5, 0.5)? + log_gauss_2f1_compl(p.gamma, 0.5, 1.0, p.tau_sq, &ctl)?;
        Ok(MarginalEvaluator {
            p,
            ctl,
            log_prior_norm,
            ln_gamma_alpha: ln_gamma(p.alpha),
        })
    }

    /// log m(y) at integer y.
    pub(crate) fn log_pmf(&self, y: u64) -> Result<f64> {
        self.log_pmf_real(y as f64)
    }

    /// log m(y) analytically continued to real y > −1/2 (factorials become
    /// gamma functions); the continuation is what Tweedie's formula
    /// differentiates.
    pub(crate) fn log_pmf_real(&self, y: f64) -> Result<f64> {
        let p = self.p;
        let a = p.alpha + 0.5;
        let b = y + 0.5;
        if !(b > 0.0) {
            return Err(Error::domain(
                "marginal_log_pmf",
                format!("need y > −1/2 for the continued pmf, got {y}"),
            ));
        }
        let log_nb_coeff = ln_gamma(y + p.alpha) - self.ln_gamma_alpha - ln_gamma(y + 1.0);
        let log_kernel =
            log_beta(a, b)? + log_gauss_2f1_compl(p.gamma, a, a + b, p.tau_sq, &self.ctl)?;
        Ok(log_nb_coeff + log_kernel - self.log_prior_norm)
    }
}

/// Log marginal pmf of a count under the GH prior, log m(y).
pub fn marginal_log_pmf(y: u64, p: &GHParams) -> Result<f64> {
    MarginalEvaluator::new(p, EvalControl::default())?.log_pmf(y)
}

/// Marginal prior density of θ at τ = 1, in closed form:
///
/// p(θ) = [√π·β(1/2,α)]⁻¹ · e^θ · θ^{α−1} · Γ(1/2−α, θ).
///
/// The e^θ·Γ(1/2−α, θ) product is evaluated through the scaled incomplete
/// gamma (the exponentials cancel analytically), so the density is finite
/// for arbitrarily large θ. For α = 1/2 this reduces to
/// π^{−3/2}·e^θ·θ^{−1/2}·E₁(θ).
pub fn prior_theta_density(theta: f64, alpha: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::domain(
            "prior_theta_density",
            format!("theta must be positive, got {theta}"),
        ));
    }
    if !(alpha > 0.0) {
        return Err(Error::domain(
            "prior_theta_density",
            format!("alpha must be positive, got {alpha}"),
        ));
    }
    let log_coeff = -0.5 * std::f64::consts::PI.ln() - log_beta(0.5, alpha)?;
    let g = scaled_upper_inc_gamma(0.5 - alpha, theta)?;
    Ok((log_coeff - 0.5 * theta.ln() + g.ln()).exp())
}

/// Closed-form sandwich around [`prior_theta_density`] for α ∈ {1/2, 1}.
///
/// α = 1/2 case: π^{−3/2}·θ^{−1/2}·[½·log(1+2/θ), log(1+1/θ)], from the
/// exponential-integral envelope ½e^{−x}log(1+2/x) < E₁(x) < e^{−x}log(1+1/x).
///
/// α = 1 case: (1/√π)·[θ^{−1/2} − 2/(√θ+√(θ+c))] with c = 4/π for the lower
/// bound and c = 2 for the upper, from the continued-fraction envelope of
/// erfc.
pub fn prior_theta_bounds(theta: f64, alpha: f64) -> Result<(f64, f64)> {
    if !(theta > 0.0) {
        return Err(Error::domain(
            "prior_theta_bounds",
            format!("theta must be positive, got {theta}"),
        ));
    }
    let pi = std::f64::consts::PI;
    if alpha == 0.5 {
        let scale = pi.powf(-1.5) / theta.sqrt();
        let lower = scale * 0.5 * (2.0 / theta).ln_1p();
        let upper = scale * (1.0 / theta).ln_1p();
        Ok((lower, upper))
    } else if alpha == 1.0 {
        let scale = 1.0 / pi.sqrt();
        let rt = theta.sqrt();
        let lower = scale * (1.0 / rt - 2.0 / (rt + (theta + 4.0 / pi).sqrt()));
        let upper = scale * (1.0 / rt - 2.0 / (rt + (theta + 2.0).sqrt()));
        Ok((lower, upper))
    } else {
        Err(Error::domain(
            "prior_theta_bounds",
            format!("closed-form bounds exist only for alpha in {{1/2, 1}}, got {alpha}"),
        ))
    }
}

/// Upper bound on the posterior upper-tail mass pr(κ > η | y):
///
/// C(η) · (1−τ²)⁻¹ · (1 + τ²η/(1−η))^{−(y−1/2−γ)},  C(η) = (1−η^{3/2})/η^{3/2}.
///
/// Valid (and meaningful) when y > γ + 1/2 and τ < 1: large counts force the
/// posterior off the full-shrinkage end geometrically fast.
pub fn tail_bound_upper(eta: f64, y: u64, p: &GHParams) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::domain(
            "tail_bound_upper",
            format!("eta must lie in (0,1), got {eta}"),
        ));
    }
    if p.tau >= 1.0 {
        return Err(Error::domain(
            "tail_bound_upper",
            "tau must be < 1 (the bound divides by 1 − τ²)".to_string(),
        ));
    }
    let d = y as f64 - 0.5 - p.gamma;
    if !(d > 0.0) {
        return Err(Error::domain(
            "tail_bound_upper",
            format!(
                "need y > gamma + 1/2 for the decay direction, got y={y}, gamma={}",
                p.gamma
            ),
        ));
    }
    let c_eta = (1.0 - eta.powf(1.5)) / eta.powf(1.5);
    let w = 1.0 - p.tau_sq; // = −z > 0
    let log_decay = -d * (p.tau_sq * eta / (1.0 - eta)).ln_1p();
    Ok(c_eta / w * log_decay.exp())
}

/// Upper bound on the posterior lower-tail mass pr(κ < η | y):
///
/// (τ²/(1−η))^d with d = γ − 1/2 − y > 0.
///
/// Valid when γ > y + 1/2: small counts under a heavy thresholding exponent
/// concentrate at the full-shrinkage end, and the escape probability decays
/// as a power of τ².
pub fn concentration_bound_lower(eta: f64, y: u64, p: &GHParams) -> Result<f64> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::domain(
            "concentration_bound_lower",
            format!("eta must lie in (0,1), got {eta}"),
        ));
    }
    let d = p.gamma - 0.5 - y as f64;
    if !(d > 0.0) {
        return Err(Error::domain(
            "concentration_bound_lower",
            format!(
                "need gamma > y + 1/2 for a positive exponent, got y={y}, gamma={}",
                p.gamma
            ),
        ));
    }
    Ok((d * (2.0 * p.tau.ln() - (1.0 - eta).ln())).exp())
}

/// Upper bound on the type-I error of the induced test when nulls follow a
/// Ga(α, β) (scale) prior:
///
/// t₁ ≤ (β/(1+β))^{γ+1/2} · (1+β)^{−(α−1)} / [(γ+1/2)·β(γ+1/2, α)].
///
/// Strictly decreasing in γ — the thresholding exponent buys exponentially
/// fewer false rejections.
pub fn type1_bound(gamma: f64, alpha: f64, beta: f64) -> Result<f64> {
    if !(gamma >= 0.0) || !(alpha > 0.0) || !(beta > 0.0) {
        return Err(Error::domain(
            "type1_bound",
            format!("need gamma ≥ 0, alpha > 0, beta > 0; got ({gamma}, {alpha}, {beta})"),
        ));
    }
    let g = gamma + 0.5;
    let log_val = g * (beta.ln() - beta.ln_1p()) - (alpha - 1.0) * beta.ln_1p()
        - g.ln()
        - log_beta(g, alpha)?;
    Ok(log_val.exp())
}

/// Tweedie estimate of E(log θ | y) for y ≥ 1:
///
/// ψ(y+1) + l′(y), where l is the log marginal pmf continued to real
/// arguments and l′ is a central difference with step h = 1e-5·y.
///
/// As y grows this approaches log y — the posterior of log θ localizes at
/// the observed log count — and the approach is logarithmically slow, which
/// the tests check via gap ratios.
pub fn tweedie_log_theta_mean(y: u64, p: &GHParams) -> Result<f64> {
    if y < 1 {
        return Err(Error::domain(
            "tweedie_log_theta_mean",
            format!("needs y ≥ 1, got {y}"),
        ));
    }
    let eval = MarginalEvaluator::new(p, EvalControl::default())?;
    let yf = y as f64;
    let h = 1e-5 * yf.max(1.0);
    let deriv = (eval.log_pmf_real(yf + h)? - eval.log_pmf_real(yf - h)?) / (2.0 * h);
    Ok(digamma(yf + 1.0)? + deriv)
}

/// Prior density of θ at α = 1/2 computed through E₁ — an independent
/// route used to cross-check [`prior_theta_density`].
#[cfg(test)]
pub(crate) fn prior_theta_density_alpha_half(theta: f64) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(Error::domain(
            "prior_theta_density",
            format!("theta must be positive, got {theta}"),
        ));
    }
    // π^{−3/2}·e^θ·θ^{−1/2}·E₁(θ); for large θ pair E₁'s e^{−θ} against e^θ
    // through the scaled incomplete gamma at shape 0.
    let pi = std::f64::consts::PI;
    if theta > 500.0 {
        let g = scaled_upper_inc_gamma(0.0, theta)?;
        Ok(pi.powf(-1.5) / theta.sqrt() * g)
    } else {
        Ok(pi.powf(-1.5) * theta.exp() / theta.sqrt() * crate::specfun::exp_e1(theta)?)
    }
}
