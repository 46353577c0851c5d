//! Posterior and marginal computations against independent quadrature
//! oracles.
//!
//! The library evaluates every GH quantity through log-space ₂F₁ ratios fed
//! by Gauss–Kronrod panels; the oracles in `common` use tanh-sinh nodes and
//! a Stirling log-gamma instead. Agreement to near machine precision means
//! the two routes confirm each other.

mod common;

use common::{
    horseshoe_posterior_mean_oracle, log_marginal_oracle, posterior_inclusion_oracle,
    posterior_moment_oracle, posterior_upper_tail_oracle,
};
use countshrink::gh::{
    gh_log_density, marginal_log_pmf, posterior_inclusion, posterior_kappa_moment,
    posterior_theta_mean, tail_bound_upper, GHDistribution, GHParams,
};

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1e-300)
}

/// Pins the oracle itself to values confirmed with an arbitrary-precision
/// package outside this codebase. If these move, the oracle — not the
/// library — has drifted.
#[test]
fn oracle_reproduces_externally_verified_values() {
    let m = posterior_moment_oracle(1, 10, 0.5, 10.0, 0.05);
    assert!(
        rel_err(m, 0.58174017080883830) < 1e-10,
        "posterior mean oracle drifted: {m:.17e}"
    );
    let lm = log_marginal_oracle(40, 0.5, 20.0, 1e-6);
    assert!(
        (lm - -543.33883350005560).abs() < 1e-7,
        "log marginal oracle drifted: {lm:.17e}"
    );
}

#[test]
fn posterior_moments_match_quadrature_oracle() {
    let mut worst = 0.0_f64;
    for &tau in &[1.0, 0.3, 0.05] {
        for &gamma in &[0.0, 0.5, 1.0, 5.0, 10.0] {
            let p = GHParams::new(0.5, gamma, tau).unwrap();
            for &y in &[0_u64, 1, 2, 5, 10, 25, 50] {
                for k in 1..=3_u32 {
                    let got = posterior_kappa_moment(k, y, &p).unwrap();
                    let want = posterior_moment_oracle(k, y, 0.5, gamma, tau);
                    let err = rel_err(got, want);
                    assert!(
                        err < 1e-8,
                        "E(kappa^{k} | y={y}) at gamma={gamma}, tau={tau}: \
                         got {got:.17e}, oracle {want:.17e}, rel err {err:.3e}"
                    );
                    worst = worst.max(err);
                }
            }
        }
    }
    println!("posterior moment grid: worst relative error {worst:.3e}");
}

#[test]
fn posterior_inclusion_matches_oracle() {
    for &tau in &[0.3, 0.05] {
        for &gamma in &[0.0, 1.0, 10.0] {
            let p = GHParams::new(0.5, gamma, tau).unwrap();
            for &y in &[0_u64, 1, 4, 15, 60] {
                let got = posterior_inclusion(y, &p).unwrap();
                let want = posterior_inclusion_oracle(y, 0.5, gamma, tau);
                assert!(
                    rel_err(got, want) < 1e-8,
                    "E(1-kappa | y={y}) at gamma={gamma}, tau={tau}: \
                     got {got:.17e}, oracle {want:.17e}"
                );
            }
        }
    }
}

#[test]
fn marginal_log_pmf_matches_oracle() {
    for &tau in &[0.3, 0.05] {
        for &gamma in &[0.0, 1.0, 10.0] {
            let p = GHParams::new(0.5, gamma, tau).unwrap();
            for &y in &[0_u64, 1, 3, 10, 40] {
                let got = marginal_log_pmf(y, &p).unwrap();
                let want = log_marginal_oracle(y, 0.5, gamma, tau);
                assert!(
                    (got - want).abs() < 1e-8,
                    "log m({y}) at gamma={gamma}, tau={tau}: \
                     got {got:.17e}, oracle {want:.17e}"
                );
            }
        }
    }
}

/// m(y+1)/m(y) = (y+α)/(y+1) · E(1−κ | y): an exact identity linking the
/// marginal and the inclusion probability through different ₂F₁ calls, so
/// it fails if either is off.
#[test]
fn marginal_ratio_recurrence_holds() {
    let alpha = 0.5;
    for &(gamma, tau) in &[(0.0, 0.7), (1.0, 0.3), (5.0, 0.1), (15.0, 0.01)] {
        let p = GHParams::new(alpha, gamma, tau).unwrap();
        for y in 0..60_u64 {
            let lhs = (marginal_log_pmf(y + 1, &p).unwrap() - marginal_log_pmf(y, &p).unwrap()).exp();
            let rhs =
                (y as f64 + alpha) / (y as f64 + 1.0) * posterior_inclusion(y, &p).unwrap();
            assert!(
                rel_err(lhs, rhs) < 1e-11,
                "pmf ratio at y={y}, gamma={gamma}, tau={tau}: {lhs:.17e} vs {rhs:.17e}"
            );
        }
    }
}

/// The γ = 1 prior on κ is exactly the half-Cauchy scale mixture, so the
/// posterior mean of θ must match a mixture-representation computation that
/// never touches the GH normalizer.
#[test]
fn gamma_one_posterior_mean_matches_half_cauchy_mixture() {
    for &tau in &[0.05, 0.3, 1.0] {
        let p = GHParams::new(0.5, 1.0, tau).unwrap();
        for &y in &[0_u64, 1, 5, 20, 100] {
            let got = posterior_theta_mean(y, &p).unwrap();
            let want = horseshoe_posterior_mean_oracle(y, 0.5, tau);
            let tol = if y == 0 { 1e-6 } else { 1e-6 * want };
            assert!(
                (got - want).abs() < tol,
                "E(theta | y={y}) at tau={tau}: GH route {got:.12e}, \
                 half-Cauchy route {want:.12e}"
            );
        }
    }
}

/// The κ-density is the kernel κ^(a−1)(1−κ)^(b−1)(1+zκ)^(−γ) divided by a
/// constant, and that constant is the kernel's integral — i.e. the density
/// integrates to one. Checked in two pieces that avoid evaluating the
/// density where 1−κ falls below f64 resolution: the log density minus the
/// log kernel must be flat across the interior, and that flat offset must
/// equal the oracle's log integral of the kernel.
#[test]
fn kappa_density_is_normalized_kernel() {
    for &(a, b, tau, gamma) in &[
        (0.5, 0.5, 0.3, 1.0),
        (1.0, 10.5, 0.05, 10.0),
        (1.5, 3.5, 0.9, 0.0),
        (0.5, 40.5, 0.01, 5.0),
    ] {
        let tau_sq: f64 = tau * tau;
        let z = tau_sq - 1.0;
        let d = GHDistribution::new(a, b, z, gamma).unwrap();
        let log_kernel = |kappa: f64| {
            (a - 1.0) * kappa.ln() + (b - 1.0) * (1.0 - kappa).ln()
                - gamma * (tau_sq + (1.0 - tau_sq) * (1.0 - kappa)).ln()
        };
        let offset = log_kernel(0.5) - gh_log_density(0.5, &d).unwrap();
        for &kappa in &[0.01, 0.1, 0.37, 0.63, 0.9, 0.99] {
            let here = log_kernel(kappa) - gh_log_density(kappa, &d).unwrap();
            assert!(
                (here - offset).abs() < 1e-11,
                "density shape deviates from the kernel at kappa={kappa} \
                 (a={a}, b={b}, tau={tau}, gamma={gamma})"
            );
        }
        let oracle = common::log_gh_integral(a, b, gamma, tau);
        assert!(
            (offset - oracle).abs() < 1e-10,
            "normalizer at (a={a}, b={b}, tau={tau}, gamma={gamma}): \
             library {offset:.17e}, oracle {oracle:.17e}"
        );
    }
}

/// Spot check that the closed-form upper-tail bound really sits above the
/// exact tail mass (the bulk sweep lives in the acceptance tests).
#[test]
fn upper_tail_bound_dominates_exact_tail() {
    for &(gamma, tau, y) in &[(1.0, 0.1, 5_u64), (5.0, 0.05, 20), (0.0, 0.3, 3)] {
        let p = GHParams::new(0.5, gamma, tau).unwrap();
        for &eta in &[0.2, 0.5, 0.8, 0.95] {
            let bound = tail_bound_upper(eta, y, &p).unwrap();
            let exact = posterior_upper_tail_oracle(eta, y, 0.5, gamma, tau);
            assert!(
                exact <= bound * (1.0 + 1e-10),
                "tail mass above eta={eta} at (gamma={gamma}, tau={tau}, y={y}): \
                 exact {exact:.6e} exceeds bound {bound:.6e}"
            );
        }
    }
}

/// Shape of the shrinkage curve under a strong thresholding exponent: small
/// counts stay almost fully shrunk, the curve relaxes monotonically, and by
/// y = 11 the posterior has crossed to the keep side; at γ = 1 the crossing
/// happens much earlier.
#[test]
fn shrinkage_curve_releases_large_counts() {
    let heavy = GHParams::new(0.5, 10.0, 0.05).unwrap();
    let mut prev = posterior_kappa_moment(1, 1, &heavy).unwrap();
    assert!(prev > 0.9, "E(kappa | y=1) = {prev} should stay near 1");
    for y in 2..=11_u64 {
        let cur = posterior_kappa_moment(1, y, &heavy).unwrap();
        assert!(cur < prev, "shrinkage must relax with y: E(kappa|{y}) = {cur}");
        prev = cur;
    }
    assert!(prev < 0.5, "E(kappa | y=11) = {prev} should favor keeping");

    let light = GHParams::new(0.5, 1.0, 0.05).unwrap();
    let at_ten = posterior_kappa_moment(1, 10, &light).unwrap();
    assert!(
        at_ten < 0.5,
        "at gamma=1 a count of 10 should already be kept: E(kappa|10) = {at_ten}"
    );
}
