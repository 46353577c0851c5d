//! Empirical-Bayes fitting against the generating process and against its
//! own components.

mod common;

use countshrink::fit::{fit, shrink, FitConfig};
use countshrink::gh::{posterior_inclusion, posterior_kappa_moment};
use countshrink::CountDataset;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Counts drawn from the exact γ = 1 hierarchy should give back the
/// generating τ. The sampler goes through the half-Cauchy representation,
/// so it shares no code with the marginal the fitter maximizes.
#[test]
fn tau_is_recovered_on_data_from_the_prior() {
    let true_tau = 0.2;
    let cfg = FitConfig {
        gamma_range: (1.0, 1.0),
        ..FitConfig::default()
    };
    let mut estimates = Vec::new();
    for seed in 0..20_u64 {
        let mut rng = StdRng::seed_from_u64(7700 + seed);
        let counts = common::sample_counts_gamma1(&mut rng, 5000, 0.5, true_tau);
        let fitted = fit(&CountDataset::new(counts), &cfg).unwrap();
        estimates.push(fitted.params.tau);
    }
    estimates.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = estimates[estimates.len() / 2];
    assert!(
        (median - true_tau).abs() < 0.1,
        "median fitted tau {median} strays from the generating {true_tau}"
    );
}

/// The fitted maximum beats every corner of the search box — the optimizer
/// cannot have wandered below its own boundary candidates.
#[test]
fn fitted_marginal_beats_the_box_corners() {
    let counts = CountDataset::new(vec![0, 0, 0, 0, 0, 0, 1, 0, 0, 3, 0, 0, 0, 9, 0, 0, 2, 0]);
    let cfg = FitConfig {
        grid_points: 12,
        refine_iters: 80,
        ..FitConfig::default()
    };
    let fitted = fit(&counts, &cfg).unwrap();
    for &tau in &[cfg.tau_range.0, cfg.tau_range.1] {
        for &gamma in &[cfg.gamma_range.0, cfg.gamma_range.1] {
            let corner = countshrink::GHParams::new(cfg.alpha, gamma, tau).unwrap();
            let ll: f64 = counts
                .distinct_counts()
                .iter()
                .map(|&(y, c)| {
                    c as f64 * countshrink::gh::marginal_log_pmf(y, &corner).unwrap()
                })
                .sum();
            assert!(
                fitted.log_marginal >= ll - 1e-9,
                "corner (gamma={gamma}, tau={tau}) scores {ll}, above the fit {}",
                fitted.log_marginal
            );
        }
    }
}

/// shrink() computes each distinct count once and fans the values out; the
/// result must equal direct per-observation posterior calls.
#[test]
fn shrink_matches_direct_posterior_calls() {
    let counts = CountDataset::new(vec![4, 0, 0, 11, 0, 4, 2, 0, 0, 0, 30, 2]);
    let p = countshrink::GHParams::new(0.5, 3.0, 0.07).unwrap();
    let s = shrink(&counts, &p).unwrap();
    for (i, &y) in counts.counts().iter().enumerate() {
        let kappa = posterior_kappa_moment(1, y, &p).unwrap();
        let incl = posterior_inclusion(y, &p).unwrap();
        assert_eq!(s.kappa_mean[i], kappa, "kappa fan-out differs at index {i}");
        assert_eq!(s.inclusion[i], incl, "inclusion fan-out differs at index {i}");
        assert_eq!(
            s.theta_mean[i],
            incl * (y as f64 + p.alpha),
            "theta fan-out differs at index {i}"
        );
    }
}

/// Pinning γ through a degenerate range must agree with the dedicated
/// horseshoe entry point on the same data.
#[test]
fn horseshoe_is_the_gamma_pinned_fit() {
    let counts = CountDataset::new(vec![0, 0, 0, 0, 12, 0, 0, 3, 0, 1, 0, 0, 0, 0, 7]);
    let hs = countshrink::estimators::horseshoe(&counts).unwrap();
    let cfg = FitConfig {
        gamma_range: (1.0, 1.0),
        ..FitConfig::default()
    };
    let fitted = fit(&counts, &cfg).unwrap();
    let direct = shrink(&counts, &fitted.params).unwrap();
    assert_eq!(hs.theta_mean, direct.theta_mean);
    assert_eq!(hs.kappa_mean, direct.kappa_mean);
}
