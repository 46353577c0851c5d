//! Zero-inflated gamma-Poisson estimation by EM.
//!
//! Model: each count is a structural zero with probability π, otherwise a
//! draw from the gamma-mixed Poisson with a Ga(shape, rate) prior on its
//! mean. EM alternates the structural-zero responsibility at y = 0 with a
//! weighted marginal-likelihood refit of (shape, rate); the refit reuses
//! the previous optimum as its starting point and can only improve the
//! weighted objective, so the observed-data log-likelihood ascends.

use crate::data::CountDataset;
use crate::error::{Error, Result};
use crate::estimators::global::nb_ml_weighted;
use crate::estimators::log_nb_marginal_rate;
use crate::optim::maximize_in_box;

const PI_MIN: f64 = 1e-6;
const PI_MAX: f64 = 1.0 - 1e-6;
const MAX_OUTER_ITERS: usize = 300;
const OUTER_TOL: f64 = 1e-10;
const INNER_ITERS: usize = 60;
const LOG_BOX_LO: f64 = -6.907755278982137; // ln 1e-3
const LOG_BOX_HI: f64 = 6.907755278982137; // ln 1e3

/// Result of the zero-inflated fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ZipFit {
    /// Posterior-mean estimate per observation. Positive counts get the
    /// conjugate mean (y + shape)/(1 + rate); zeros get it discounted by
    /// the posterior probability of *not* being a structural zero.
    pub estimates: Vec<f64>,
    /// Fitted structural-zero probability π̂, clamped to [1e-6, 1−1e-6].
    pub zero_inflation: f64,
    /// Fitted prior shape.
    pub shape: f64,
    /// Fitted prior rate.
    pub rate: f64,
    /// True when π̂ sits on a clamp bound (no zeros in the data, or nothing
    /// but zeros) — the mixture weight was not identified interior.
    pub pi_at_bound: bool,
}

/// Observed-data log-likelihood of the zero-inflated mixture.
fn loglik(distinct: &[(u64, usize)], pi: f64, shape: f64, rate: f64) -> f64 {
    distinct
        .iter()
        .map(|&(y, n)| {
            let lm = log_nb_marginal_rate(y, shape, rate);
            let term = if y == 0 {
                (pi + (1.0 - pi) * lm.exp()).ln()
            } else {
                (1.0 - pi).ln() + lm
            };
            n as f64 * term
        })
        .sum()
}

/// Fit (π, shape, rate) by EM and return per-observation posterior means.
///
/// Data with no zeros cannot identify π, which is pinned at its lower
/// clamp; all-zero data symmetrically pins it at the upper clamp and sends
/// every estimate to zero. Both cases are reported via `pi_at_bound`.
pub fn zip_bayes(counts: &CountDataset) -> Result<ZipFit> {
    if counts.is_empty() {
        return Err(Error::EmptyData { op: "zip_bayes" });
    }
    let distinct = counts.distinct_counts();
    let n = counts.len() as f64;
    let n0 = distinct.first().filter(|&&(y, _)| y == 0).map_or(0, |&(_, c)| c) as f64;

    let cells_all: Vec<(u64, f64)> = distinct.iter().map(|&(y, c)| (y, c as f64)).collect();

    // No zeros: π is unidentified below the data; fit the plain mixture.
    if n0 == 0.0 {
        let (shape, rate) = nb_ml_weighted(&cells_all);
        let estimates = counts
            .counts()
            .iter()
            .map(|&y| (y as f64 + shape) / (1.0 + rate))
            .collect();
        return Ok(ZipFit { estimates, zero_inflation: PI_MIN, shape, rate, pi_at_bound: true });
    }

    // All zeros: the likelihood is maximized by pure structural zeros.
    if n0 == n {
        let (pi, shape, rate) = (PI_MAX, 1e-12, 1e6);
        let r0 = structural_responsibility(pi, shape, rate);
        let est = (1.0 - r0) * shape / (1.0 + rate);
        return Ok(ZipFit {
            estimates: vec![est; counts.len()],
            zero_inflation: pi,
            shape,
            rate,
            pi_at_bound: true,
        });
    }

    // EM. Start (shape, rate) from the unweighted fit and π from half the
    // zero fraction, both clamped into their boxes.
    let (mut shape, mut rate) = nb_ml_weighted(&cells_all);
    let mut pi = (0.5 * n0 / n).clamp(PI_MIN, PI_MAX);
    let mut prev_ll = loglik(&distinct, pi, shape, rate);

    for _ in 0..MAX_OUTER_ITERS {
        // E-step: responsibility that an observed zero is structural.
        let r0 = structural_responsibility(pi, shape, rate);

        // M-step, mixing weight: average responsibility over all counts.
        pi = (n0 * r0 / n).clamp(PI_MIN, PI_MAX);

        // M-step, prior: weighted refit with the zero cell discounted,
        // warm-started so the weighted objective can only improve.
        let cells: Vec<(u64, f64)> = distinct
            .iter()
            .map(|&(y, c)| (y, if y == 0 { c as f64 * (1.0 - r0) } else { c as f64 }))
            .collect();
        let objective = |u: &[f64]| -> f64 {
            let (a, b) = (u[0].exp(), u[1].exp());
            cells.iter().map(|&(y, w)| w * log_nb_marginal_rate(y, a, b)).sum()
        };
        let start = [shape.ln(), rate.ln()];
        let (u, _) = maximize_in_box(
            objective,
            &[LOG_BOX_LO, LOG_BOX_LO],
            &[LOG_BOX_HI, LOG_BOX_HI],
            &start,
            INNER_ITERS,
        );
        shape = u[0].exp();
        rate = u[1].exp();

        let ll = loglik(&distinct, pi, shape, rate);
        if (ll - prev_ll).abs() < OUTER_TOL * (1.0 + prev_ll.abs()) {
            prev_ll = ll;
            break;
        }
        prev_ll = ll;
    }
    let _ = prev_ll;

    let r0 = structural_responsibility(pi, shape, rate);
    let conjugate = |y: u64| (y as f64 + shape) / (1.0 + rate);
    let estimates = counts
        .counts()
        .iter()
        .map(|&y| if y == 0 { (1.0 - r0) * conjugate(0) } else { conjugate(y) })
        .collect();
    let pi_at_bound = pi <= PI_MIN || pi >= PI_MAX;
    Ok(ZipFit { estimates, zero_inflation: pi, shape, rate, pi_at_bound })
}

/// P(structural | y = 0) = π / (π + (1−π)·m(0)).
fn structural_responsibility(pi: f64, shape: f64, rate: f64) -> f64 {
    let m0 = log_nb_marginal_rate(0, shape, rate).exp();
    pi / (pi + (1.0 - pi) * m0)
}
