//! Global-only gamma shrinkage: one conjugate prior for every mean.

use crate::data::CountDataset;
use crate::error::{Error, Result};
use crate::estimators::log_nb_marginal_rate;
use crate::optim::maximize_in_box;

/// Search box for the (shape, rate) maximum-likelihood fit, in log space.
const LOG_BOX_LO: f64 = -6.907755278982137; // ln 1e-3
const LOG_BOX_HI: f64 = 6.907755278982137; // ln 1e3
const GRID_NODES: usize = 25;
const REFINE_ITERS: usize = 150;

/// Result of fitting a single Ga(shape, rate) prior across all means.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalGammaFit {
    /// Posterior mean (yᵢ + shape)/(1 + rate) per observation.
    pub estimates: Vec<f64>,
    /// Fitted prior shape a₀.
    pub shape: f64,
    /// Fitted prior rate b₀.
    pub rate: f64,
    /// True when the marginal likelihood had no interior optimum (counts
    /// not overdispersed) and the fit fell back to method-of-moments with
    /// a dispersion floor.
    pub moment_fallback: bool,
}

/// Maximize the weighted gamma-mixed-Poisson log-likelihood
/// Σ w·log m(y | shape, rate) over the log-space box, by coarse grid plus
/// simplex refinement; deterministic. Weights need not be integers.
pub(super) fn nb_ml_weighted(cells: &[(u64, f64)]) -> (f64, f64) {
    let objective = |u: &[f64]| -> f64 {
        let (a, b) = (u[0].exp(), u[1].exp());
        cells
            .iter()
            .map(|&(y, w)| w * log_nb_marginal_rate(y, a, b))
            .sum()
    };
    let node = |k: usize| LOG_BOX_LO + (LOG_BOX_HI - LOG_BOX_LO) * k as f64 / (GRID_NODES - 1) as f64;
    let mut start = [0.0_f64; 2];
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..GRID_NODES {
        for j in 0..GRID_NODES {
            let u = [node(i), node(j)];
            let v = objective(&u);
            if v > best_v {
                best_v = v;
                start = u;
            }
        }
    }
    let (u, _) = maximize_in_box(
        objective,
        &[LOG_BOX_LO, LOG_BOX_LO],
        &[LOG_BOX_HI, LOG_BOX_HI],
        &start,
        REFINE_ITERS,
    );
    (u[0].exp(), u[1].exp())
}

/// Fit Ga(a₀, b₀) to all counts by marginal maximum likelihood and return
/// the conjugate posterior means (yᵢ + a₀)/(1 + b₀).
///
/// The marginal has an interior maximum only when the counts are
/// overdispersed relative to Poisson (sample variance exceeding the mean);
/// otherwise the likelihood pushes the prior toward a point mass, and the
/// fit falls back to method-of-moments with the variance floored just above
/// the mean — which shrinks every estimate hard toward the sample mean —
/// and says so through `moment_fallback`.
pub fn global_gamma(counts: &CountDataset) -> Result<GlobalGammaFit> {
    if counts.is_empty() {
        return Err(Error::EmptyData { op: "global_gamma" });
    }
    let mean = counts.mean();
    let var = counts.variance();

    let (shape, rate, moment_fallback) = if var > mean {
        let cells: Vec<(u64, f64)> = counts
            .distinct_counts()
            .into_iter()
            .map(|(y, n)| (y, n as f64))
            .collect();
        let (a, b) = nb_ml_weighted(&cells);
        (a, b, false)
    } else if mean > 0.0 {
        // Dispersion floor: var = mean·(1 + 1e-6) makes the moment equations
        // a = mean²/(var−mean), b = mean/(var−mean) finite and enormous.
        let excess = mean * 1e-6;
        (mean * mean / excess, mean / excess, true)
    } else {
        // All zeros: the degenerate prior at 0, expressed at the box scale.
        (1e-12, 1e6, true)
    };

    let estimates = counts
        .counts()
        .iter()
        .map(|&y| (y as f64 + shape) / (1.0 + rate))
        .collect();
    Ok(GlobalGammaFit { estimates, shape, rate, moment_fallback })
}
