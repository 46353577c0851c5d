//! The frequency-ratio estimator.

use std::collections::HashMap;

use crate::data::CountDataset;
use crate::error::{Error, Result};

/// Estimate each Poisson mean by the frequency ratio
/// δ(y) = (y+1) · #{yⱼ = y+1} / #{yⱼ = y}.
///
/// The denominator is the multiplicity of the observation's own value, so
/// it is never zero at an observed count. When no counts of value y+1
/// exist the raw formula gives 0, and that is what is returned — no
/// smoothing is applied.
pub fn robbins(counts: &CountDataset) -> Result<Vec<f64>> {
    if counts.is_empty() {
        return Err(Error::EmptyData { op: "robbins" });
    }
    let mut freq: HashMap<u64, usize> = HashMap::new();
    for &y in counts.counts() {
        *freq.entry(y).or_insert(0) += 1;
    }
    let estimates = counts
        .counts()
        .iter()
        .map(|&y| {
            let above = freq.get(&(y + 1)).copied().unwrap_or(0) as f64;
            let at = freq[&y] as f64;
            (y as f64 + 1.0) * above / at
        })
        .collect();
    Ok(estimates)
}
