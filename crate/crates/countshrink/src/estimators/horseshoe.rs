//! Horseshoe shrinkage: the local-global pipeline with the thresholding
//! exponent pinned at one.
//!
//! With γ = 1 the shrinkage-weight prior reduces to the half-Cauchy
//! local-scale hierarchy, so this estimator is exactly the horseshoe
//! applied to counts. Only τ is estimated.

use crate::data::CountDataset;
use crate::error::Result;
use crate::fit::{fit, shrink, FitConfig};
use crate::gh::ShrinkageResult;

/// Fit τ with γ held at 1 and return the per-observation posterior
/// summaries. Equivalent to [`fit`] with a degenerate `gamma_range`
/// followed by [`shrink`].
pub fn horseshoe(counts: &CountDataset) -> Result<ShrinkageResult> {
    let cfg = FitConfig { gamma_range: (1.0, 1.0), ..FitConfig::default() };
    let r = fit(counts, &cfg)?;
    shrink(counts, &r.params)
}
