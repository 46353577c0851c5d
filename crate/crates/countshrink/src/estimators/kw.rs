//! Nonparametric maximum likelihood over the Poisson mixing distribution.
//!
//! The mixing distribution G is approximated by a probability vector over a
//! fixed grid of θ-atoms and fit by EM, which for this problem is the
//! classical fixed-point iteration on the atom masses. The likelihood is
//! linear in G, so the EM objective is concave over the simplex and each
//! iteration provably does not decrease it — the implementation records the
//! whole objective sequence so callers can check that property directly.

use crate::data::CountDataset;
use crate::error::{Error, Result};
use crate::estimators::log_poisson_pmf;

/// Masses below this are snapped to exactly zero. At this magnitude the
/// atom's contribution is below resolution in every mixture sum, so the
/// snap cannot change any recorded objective value; it only keeps
/// subnormal arithmetic out of later iterations.
const MASS_FLOOR: f64 = 1e-280;

/// A fitted discrete mixing distribution over Poisson means.
#[derive(Debug, Clone, PartialEq)]
pub struct NPMLESolution {
    /// Grid atoms, strictly increasing, all positive.
    pub support: Vec<f64>,
    /// Probability mass per atom; nonnegative, sums to 1.
    pub mass: Vec<f64>,
    /// Mixture log-likelihood of the data at `mass`.
    pub loglik: f64,
    /// EM iterations actually run; equal to the configured maximum when
    /// the tolerance was never reached (the non-convergence signal).
    pub iters: usize,
    /// Log-likelihood after each iteration, starting with the value at the
    /// uniform initializer; nondecreasing.
    pub loglik_trace: Vec<f64>,
}

/// Geometric-plus-linear atom grid on [1e-3, hi]: half the atoms spaced
/// geometrically (resolution near zero, where sparse-data mass lives), half
/// linearly (even coverage of the signal range), merged and deduplicated.
fn atom_grid(grid_size: usize, hi: f64) -> Vec<f64> {
    let lo = 1e-3_f64;
    let hi = hi.max(1.0);
    let n_geo = grid_size / 2;
    let n_lin = grid_size - n_geo;
    let mut atoms = Vec::with_capacity(grid_size);
    for i in 0..n_geo {
        let t = i as f64 / (n_geo - 1).max(1) as f64;
        atoms.push((lo.ln() + t * (hi.ln() - lo.ln())).exp());
    }
    for i in 0..n_lin {
        let t = i as f64 / (n_lin - 1).max(1) as f64;
        atoms.push(lo + t * (hi - lo));
    }
    atoms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    atoms.dedup();
    atoms
}

/// Fit the mixing distribution by EM on a fixed grid.
///
/// The grid spans [10⁻³, max(y) + 3√max(y)] (at least [10⁻³, 1]) with
/// `grid_size` atoms. Iteration stops when the relative log-likelihood
/// change drops below `tol` or after `max_iters` sweeps; hitting the cap is
/// reported through `iters == max_iters` rather than as an error. The
/// computation works on the distinct-count table, so cost scales with the
/// number of distinct values, not n.
pub fn kw_npmle(
    counts: &CountDataset,
    grid_size: usize,
    tol: f64,
    max_iters: usize,
) -> Result<NPMLESolution> {
    if counts.is_empty() {
        return Err(Error::EmptyData { op: "kw_npmle" });
    }
    if grid_size < 2 {
        return Err(Error::domain("kw_npmle", format!("grid_size must be ≥ 2, got {grid_size}")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain("kw_npmle", format!("tol must be positive, got {tol}")));
    }

    let distinct = counts.distinct_counts();
    let n = counts.len() as f64;
    let max_y = counts.max_count().unwrap_or(0) as f64;
    let support = atom_grid(grid_size, max_y + 3.0 * max_y.sqrt());
    let g = support.len();

    // Row-rescaled likelihood matrix: like[d][j] = Poi(y_d | θ_j) / exp(row_max[d]).
    // Each row's maximum is 1, so mixture sums never underflow; the constants
    // are added back when the log-likelihood is reported. EM itself is
    // invariant to per-row scaling.
    let mut like = vec![vec![0.0_f64; g]; distinct.len()];
    let mut row_max = vec![0.0_f64; distinct.len()];
    for (d, &(y, _)) in distinct.iter().enumerate() {
        let logs: Vec<f64> = support.iter().map(|&th| log_poisson_pmf(y, th)).collect();
        let m = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        row_max[d] = m;
        for j in 0..g {
            like[d][j] = (logs[j] - m).exp();
        }
    }
    let const_term: f64 = distinct
        .iter()
        .zip(&row_max)
        .map(|(&(_, c), &m)| c as f64 * m)
        .sum();

    let loglik_at = |mass: &[f64]| -> f64 {
        let mut total = const_term;
        for (d, &(_, c)) in distinct.iter().enumerate() {
            let mix: f64 = like[d].iter().zip(mass).map(|(l, m)| l * m).sum();
            total += c as f64 * mix.ln();
        }
        total
    };

    let mut mass = vec![1.0 / g as f64; g];
    let mut trace = vec![loglik_at(&mass)];
    let mut iters = 0;

    for it in 1..=max_iters {
        iters = it;
        // One EM sweep: new mass_j ∝ mass_j · Σ_d (c_d/n) · like[d][j]/mix_d.
        let mut next = vec![0.0_f64; g];
        for (d, &(_, c)) in distinct.iter().enumerate() {
            let mix: f64 = like[d].iter().zip(&mass).map(|(l, m)| l * m).sum();
            let w = c as f64 / (n * mix);
            for j in 0..g {
                next[j] += w * like[d][j] * mass[j];
            }
        }
        let total: f64 = next.iter().sum();
        for m in &mut next {
            *m /= total;
            if *m < MASS_FLOOR {
                *m = 0.0;
            }
        }
        mass = next;

        let ll = loglik_at(&mass);
        let prev = *trace.last().expect("trace starts nonempty");
        trace.push(ll);
        if (ll - prev).abs() < tol * (1.0 + prev.abs()) {
            break;
        }
    }

    let loglik = *trace.last().expect("trace is nonempty");
    Ok(NPMLESolution { support, mass, loglik, iters, loglik_trace: trace })
}

/// Plug-in Bayes posterior mean at a count:
/// Σ_j θ_j · Poi(y|θ_j) · mass_j / Σ_j Poi(y|θ_j) · mass_j.
///
/// Evaluated in log space with the largest term factored out, so the ratio
/// stays well-defined even for counts far outside the fitted support.
pub fn kw_posterior_mean(sol: &NPMLESolution, y: u64) -> f64 {
    let logs: Vec<f64> = sol
        .support
        .iter()
        .zip(&sol.mass)
        .map(|(&th, &m)| if m > 0.0 { log_poisson_pmf(y, th) + m.ln() } else { f64::NEG_INFINITY })
        .collect();
    let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if peak == f64::NEG_INFINITY {
        return 0.0;
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, &l) in logs.iter().enumerate() {
        let w = (l - peak).exp();
        num += sol.support[j] * w;
        den += w;
    }
    num / den
}

/// The pmf-ratio shrinkage weight P̂(y+1)/P̂(y) under the fitted mixture,
/// where P̂(y) = Σ_j Poi(y|θ_j)·mass_j.
///
/// Note this is the raw pmf ratio, which differs from the posterior-mean
/// ratio by a factor of (y+1); it is the quantity thresholded by the
/// testing rule, not an estimate of θ.
pub fn kw_weight(sol: &NPMLESolution, y: u64) -> f64 {
    let log_pmf = |y: u64| -> f64 {
        let logs: Vec<f64> = sol
            .support
            .iter()
            .zip(&sol.mass)
            .map(
                |(&th, &m)| {
                    if m > 0.0 {
                        log_poisson_pmf(y, th) + m.ln()
                    } else {
                        f64::NEG_INFINITY
                    }
                },
            )
            .collect();
        let peak = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if peak == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        peak + logs.iter().map(|&l| (l - peak).exp()).sum::<f64>().ln()
    };
    let lp0 = log_pmf(y);
    if lp0 == f64::NEG_INFINITY {
        return 0.0;
    }
    (log_pmf(y + 1) - lp0).exp()
}
