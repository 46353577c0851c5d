//! Empirical-Bayes hyperparameter estimation.
//!
//! The global scale τ and the thresholding exponent γ (and optionally the
//! gamma-shape α) are chosen to maximize the marginal log-likelihood of the
//! observed counts, Σᵢ log m(yᵢ). The objective collapses to a sum over
//! *distinct* count values weighted by their multiplicities, which makes it
//! cheap on the sparse datasets this model targets: a handful of distinct
//! values regardless of n.
//!
//! The search runs in two deterministic stages: a coarse grid (log-spaced in
//! τ, linear in γ and α), evaluated in parallel, followed by a sequential
//! simplex refinement clamped to the same box. Pinning a parameter is
//! expressed by a degenerate range, e.g. `gamma_range: (1.0, 1.0)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::CountDataset;
use crate::error::{Error, Result};
use crate::gh::{GHParams, MarginalEvaluator, ShrinkageResult};
use crate::gh::{posterior_inclusion, posterior_kappa_moment};
use crate::optim::maximize_in_box;
use crate::specfun::EvalControl;

/// Search space and effort knobs for [`fit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Gamma-shape parameter of the θ prior; held at this value unless
    /// `fit_alpha` is set.
    pub alpha: f64,
    /// Inclusive search interval for the global scale τ; log-spaced on the
    /// grid. A degenerate interval pins τ.
    pub tau_range: (f64, f64),
    /// Inclusive search interval for γ; linear on the grid. A degenerate
    /// interval pins γ (how horseshoe-type fits fix γ = 1).
    pub gamma_range: (f64, f64),
    /// Search interval for α, used only when `fit_alpha` is set.
    pub alpha_range: (f64, f64),
    /// Grid nodes per non-degenerate axis in the coarse stage.
    pub grid_points: usize,
    /// Maximum simplex iterations in the refinement stage.
    pub refine_iters: usize,
    /// Estimate α along with (τ, γ) instead of holding it fixed.
    pub fit_alpha: bool,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            alpha: 0.5,
            tau_range: (1e-6, 1.0),
            gamma_range: (0.0, 20.0),
            alpha_range: (0.05, 2.0),
            grid_points: 40,
            refine_iters: 200,
            fit_alpha: false,
        }
    }
}

impl FitConfig {
    /// Checks the ranges and effort knobs; [`fit`] calls this itself, but
    /// front ends can run it early to report bad settings before reading
    /// any data.
    pub fn validate(&self) -> Result<()> {
        let ok_range = |r: (f64, f64)| r.0.is_finite() && r.1.is_finite() && r.0 <= r.1;
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(Error::domain("fit", format!("alpha must be positive, got {}", self.alpha)));
        }
        if !ok_range(self.tau_range) || self.tau_range.0 < GHParams::MIN_TAU || self.tau_range.1 > 1.0 {
            return Err(Error::domain(
                "fit",
                format!(
                    "tau_range must satisfy {} <= lo <= hi <= 1, got {:?}",
                    GHParams::MIN_TAU,
                    self.tau_range
                ),
            ));
        }
        if !ok_range(self.gamma_range) || self.gamma_range.0 < 0.0 {
            return Err(Error::domain(
                "fit",
                format!("gamma_range must satisfy 0 <= lo <= hi, got {:?}", self.gamma_range),
            ));
        }
        if self.fit_alpha && (!ok_range(self.alpha_range) || self.alpha_range.0 <= 0.0) {
            return Err(Error::domain(
                "fit",
                format!("alpha_range must satisfy 0 < lo <= hi, got {:?}", self.alpha_range),
            ));
        }
        if self.grid_points < 2 {
            return Err(Error::domain(
                "fit",
                format!("grid_points must be at least 2, got {}", self.grid_points),
            ));
        }
        Ok(())
    }
}

/// Outcome of a hyperparameter fit.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    /// The maximizing parameters.
    pub params: GHParams,
    /// Marginal log-likelihood at `params`; the maximum over `trace`.
    pub log_marginal: f64,
    /// Every (parameters, objective) pair evaluated, grid and refinement.
    pub trace: Vec<(GHParams, f64)>,
    /// True when γ̂ landed on the upper end of a non-degenerate
    /// `gamma_range` — a sign the cap should be raised.
    pub gamma_at_cap: bool,
}

/// Marginal log-likelihood of the distinct-count table at fixed parameters;
/// `NEG_INFINITY` for parameter points where the evaluation fails.
fn log_marginal_at(distinct: &[(u64, usize)], p: &GHParams) -> f64 {
    let ev = match MarginalEvaluator::new(p, EvalControl::default()) {
        Ok(ev) => ev,
        Err(_) => return f64::NEG_INFINITY,
    };
    let mut total = 0.0;
    for &(y, n) in distinct {
        match ev.log_pmf(y) {
            Ok(lp) => total += n as f64 * lp,
            Err(_) => return f64::NEG_INFINITY,
        }
    }
    total
}

/// `count`-node grid over `[lo, hi]`; a single node when the interval is
/// degenerate. `log` switches to geometric spacing.
fn axis_grid(lo: f64, hi: f64, count: usize, log: bool) -> Vec<f64> {
    if lo == hi {
        return vec![lo];
    }
    let (a, b) = if log { (lo.ln(), hi.ln()) } else { (lo, hi) };
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            let u = a + t * (b - a);
            if log { u.exp() } else { u }
        })
        .collect()
}

/// Coarse grid for the τ axis: the union of geometric and linear spacing,
/// sorted and deduplicated. Geometric nodes resolve the small-τ decades;
/// linear nodes cover the upper range. A purely geometric grid spanning
/// several decades puts all but one node below hi/4 — e.g. ten nodes over
/// [1e-6, 1] leave the entire (0.22, 1) stretch empty — and likelihood
/// maxima for weakly sparse data sit exactly there, so a coarse stage
/// without linear nodes can hand refinement a start in the wrong basin.
fn tau_axis(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let mut nodes = axis_grid(lo, hi, count, true);
    nodes.extend(axis_grid(lo, hi, count, false));
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();
    nodes
}

/// Maximize Σᵢ log m(yᵢ) over (τ, γ[, α]) inside the configured box.
///
/// Deterministic for fixed inputs and config: the grid stage evaluates in
/// parallel but reduces by index, and the refinement is a fixed-coefficient
/// simplex search. All-zero data is valid and drives τ̂ to the lower end of
/// `tau_range` (maximum shrinkage); only empty data is an error.
pub fn fit(counts: &CountDataset, cfg: &FitConfig) -> Result<FitResult> {
    cfg.validate()?;
    if counts.is_empty() {
        return Err(Error::EmptyData { op: "fit" });
    }
    let distinct = counts.distinct_counts();

    // Parameter vector layout: [ln τ, γ] plus [α] when α is being fit.
    let to_params = |u: &[f64]| -> Result<GHParams> {
        let alpha = if cfg.fit_alpha { u[2] } else { cfg.alpha };
        GHParams::new(alpha, u[1], u[0].exp())
    };

    let tau_grid = tau_axis(cfg.tau_range.0, cfg.tau_range.1, cfg.grid_points);
    let gamma_grid = axis_grid(cfg.gamma_range.0, cfg.gamma_range.1, cfg.grid_points, false);
    let alpha_grid = if cfg.fit_alpha {
        axis_grid(cfg.alpha_range.0, cfg.alpha_range.1, cfg.grid_points, false)
    } else {
        vec![cfg.alpha]
    };

    let mut nodes: Vec<Vec<f64>> = Vec::with_capacity(tau_grid.len() * gamma_grid.len() * alpha_grid.len());
    for &tau in &tau_grid {
        for &gamma in &gamma_grid {
            for &alpha in &alpha_grid {
                let mut u = vec![tau.ln(), gamma];
                if cfg.fit_alpha {
                    u.push(alpha);
                }
                nodes.push(u);
            }
        }
    }

    // Coarse stage: independent evaluations, order restored by collect.
    let grid_evals: Vec<(GHParams, f64)> = nodes
        .par_iter()
        .map(|u| {
            let p = to_params(u).expect("grid nodes lie inside the validated box");
            let val = log_marginal_at(&distinct, &p);
            (p, val)
        })
        .collect();

    let mut trace = grid_evals.clone();
    let best_node = grid_evals
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| {
            a.1.partial_cmp(&b.1)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(j.cmp(i)) // first index wins exact ties
        })
        .map(|(i, _)| i)
        .expect("grid is nonempty");

    // Refinement stage in the same [ln τ, γ(, α)] coordinates.
    let mut lo = vec![cfg.tau_range.0.ln(), cfg.gamma_range.0];
    let mut hi = vec![cfg.tau_range.1.ln(), cfg.gamma_range.1];
    if cfg.fit_alpha {
        lo.push(cfg.alpha_range.0);
        hi.push(cfg.alpha_range.1);
    }
    let start = nodes[best_node].clone();

    let (u_best, f_best) = {
        let trace = &mut trace;
        maximize_in_box(
            |u: &[f64]| match to_params(u) {
                Ok(p) => {
                    let val = log_marginal_at(&distinct, &p);
                    trace.push((p, val));
                    val
                }
                Err(_) => f64::NEG_INFINITY,
            },
            &lo,
            &hi,
            &start,
            cfg.refine_iters,
        )
    };

    let params = to_params(&u_best)?;
    let gamma_at_cap = cfg.gamma_range.1 > cfg.gamma_range.0
        && params.gamma >= cfg.gamma_range.1 - 1e-9 * (cfg.gamma_range.1 - cfg.gamma_range.0);
    Ok(FitResult { params, log_marginal: f_best, trace, gamma_at_cap })
}

/// Posterior summaries for every observation at fixed parameters.
///
/// Equal counts get bit-identical summaries: the posterior depends on an
/// observation only through its count, so each distinct value is computed
/// once and fanned back out in input order.
pub fn shrink(counts: &CountDataset, params: &GHParams) -> Result<ShrinkageResult> {
    use std::collections::HashMap;

    let mut per_y: HashMap<u64, (f64, f64, f64)> = HashMap::new();
    for (y, _) in counts.distinct_counts() {
        let kappa = posterior_kappa_moment(1, y, params)?;
        let incl = posterior_inclusion(y, params)?;
        let theta = incl * (y as f64 + params.alpha);
        per_y.insert(y, (kappa, theta, incl));
    }

    let n = counts.len();
    let mut kappa_mean = Vec::with_capacity(n);
    let mut theta_mean = Vec::with_capacity(n);
    let mut inclusion = Vec::with_capacity(n);
    for &y in counts.counts() {
        let &(k, t, i) = per_y.get(&y).expect("every count has a cached summary");
        kappa_mean.push(k);
        theta_mean.push(t);
        inclusion.push(i);
    }
    Ok(ShrinkageResult { kappa_mean, theta_mean, inclusion })
}
