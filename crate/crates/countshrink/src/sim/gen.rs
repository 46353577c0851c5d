//! Dataset generators.
//!
//! Each generator draws a fixed number of random variates per coordinate in
//! a fixed order, so a dataset is a pure function of (seed, cell, rep).

use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use super::{cell_id, stream, SimConfig, SUITE_CONTAMINATED_ZIP, SUITE_SPARSE_T3};

/// One |t₃| draw: z / √(v/3) with v a sum of three squared standard
/// normals — the ratio-of-normals construction, four normal variates in a
/// fixed order per call.
fn folded_t3<R: Rng>(rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    let mut v = 0.0;
    for _ in 0..3 {
        let w: f64 = StandardNormal.sample(rng);
        v += w * w;
    }
    (z / (v / 3.0).sqrt()).abs()
}

/// y ~ Poi(θ), with Poi(0) degenerate at 0.
pub(super) fn poisson_draw<R: Rng>(rng: &mut R, theta: f64) -> u64 {
    if theta <= 0.0 {
        return 0;
    }
    let d = Poisson::new(theta).expect("positive finite mean");
    d.sample(rng) as u64
}

/// Sparse folded-t means: θᵢ is 0 with probability 1−ω and an |t₃| draw
/// otherwise; yᵢ ~ Poi(θᵢ). Returns (θ, y).
pub fn gen_sparse_t3(cfg: &SimConfig, rep: usize) -> (Vec<f64>, Vec<u64>) {
    let mut rng = stream(cfg.seed, SUITE_SPARSE_T3, cell_id(cfg.n, cfg.omega), rep as u64);
    let mut theta = Vec::with_capacity(cfg.n);
    let mut y = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let is_signal = rng.random::<f64>() < cfg.omega;
        let t = if is_signal { folded_t3(&mut rng) } else { 0.0 };
        theta.push(t);
        y.push(poisson_draw(&mut rng, t));
    }
    (theta, y)
}

/// Contaminated zero-inflated counts: with probability ω the coordinate is
/// non-null and y ~ Poi(4); otherwise y = 0, then flipped to 1 with
/// probability `contamination_p`. Returns (truth, y) where truth marks the
/// non-null coordinates — contamination never relabels.
pub fn gen_contaminated_zip(cfg: &SimConfig, rep: usize) -> (Vec<bool>, Vec<u64>) {
    let mut rng = stream(
        cfg.seed,
        SUITE_CONTAMINATED_ZIP,
        cell_id(cfg.n, cfg.omega),
        rep as u64,
    );
    let mut truth = Vec::with_capacity(cfg.n);
    let mut y = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        let is_signal = rng.random::<f64>() < cfg.omega;
        truth.push(is_signal);
        if is_signal {
            y.push(poisson_draw(&mut rng, 4.0));
        } else {
            let contaminate = rng.random::<f64>() < cfg.contamination_p;
            y.push(if contaminate { 1 } else { 0 });
        }
    }
    (truth, y)
}
