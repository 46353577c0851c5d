//! The induced multiple-testing rule: threshold shrinkage weights at the
//! midpoint of their two cluster centers.
//!
//! The rule rejects the i-th null when the pseudo inclusion probability
//! 1 − E(κ|yᵢ) exceeds ξ, with ξ derived from the data itself: cluster the
//! weights into two groups and take the midpoint of the cluster means.
//! In one dimension the optimal two-cluster SSE partition is found exactly
//! by scanning the n−1 split points of the sorted weights — no iterative
//! clustering, no random initialization, bit-reproducible.

use crate::data::CountDataset;
use crate::error::{Error, Result};
use crate::estimators::{kw_weight, NPMLESolution};
use crate::gh::ShrinkageResult;

/// Outcome of thresholding a weight vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TestDecision {
    /// The threshold: midpoint of the two cluster centers.
    pub xi: f64,
    /// reject[i] ⇔ weight[i] > xi.
    pub reject: Vec<bool>,
    /// The two cluster means, (low, high).
    pub centers: (f64, f64),
    /// Number of rejections; always equals the count of `reject`.
    pub n_rejected: usize,
    /// True when input weights had to be clipped into [0,1] before
    /// clustering (only the pmf-ratio weights of `kw_decide` can exceed 1).
    pub weights_clipped: bool,
}

/// Standard 2×2 classification counts against a known truth vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub true_pos: usize,
    pub false_pos: usize,
    pub true_neg: usize,
    pub false_neg: usize,
}

impl ConfusionCounts {
    /// Total classifications; equals the input length.
    pub fn total(&self) -> usize {
        self.true_pos + self.false_pos + self.true_neg + self.false_neg
    }

    /// Number of wrong calls, fp + fn.
    pub fn misclassified(&self) -> usize {
        self.false_pos + self.false_neg
    }
}

/// Exact optimal two-cluster split of a weight vector; returns the
/// threshold ξ and the pair of cluster means (low, high).
///
/// Sorting reduces optimal 1-D SSE clustering to choosing one of the n−1
/// contiguous splits, scanned with prefix sums: minimizing within-cluster
/// SSE is the same as maximizing S₁²/k + S₂²/(n−k). Ties take the smallest
/// left-cluster size. All-equal weights admit no two-cluster structure and
/// are reported as [`Error::DegenerateClustering`]; callers that need a
/// decision anyway conventionally fall back to ξ = 0.5 and flag it.
pub fn two_means_threshold(weights: &[f64]) -> Result<(f64, (f64, f64))> {
    let n = weights.len();
    if n < 2 {
        return Err(Error::domain(
            "two_means_threshold",
            format!("need at least two weights, got {n}"),
        ));
    }
    if weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::domain("two_means_threshold", "weights must be finite".to_string()));
    }
    let mut sorted = weights.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite weights compare"));
    if sorted[0] == sorted[n - 1] {
        return Err(Error::DegenerateClustering { n });
    }

    let total: f64 = sorted.iter().sum();
    let mut best_k = 0usize;
    let mut best_score = f64::NEG_INFINITY;
    let mut s1 = 0.0;
    for k in 1..n {
        s1 += sorted[k - 1];
        let s2 = total - s1;
        let score = s1 * s1 / k as f64 + s2 * s2 / (n - k) as f64;
        if score > best_score {
            best_score = score;
            best_k = k;
        }
    }
    let s1: f64 = sorted[..best_k].iter().sum();
    let s2 = total - s1;
    let c_lo = s1 / best_k as f64;
    let c_hi = s2 / (n - best_k) as f64;
    Ok(((c_lo + c_hi) / 2.0, (c_lo, c_hi)))
}

/// Threshold a weight vector at its two-cluster midpoint.
fn decide_on_weights(weights: &[f64], weights_clipped: bool) -> Result<TestDecision> {
    let (xi, centers) = two_means_threshold(weights)?;
    let reject: Vec<bool> = weights.iter().map(|&w| w > xi).collect();
    let n_rejected = reject.iter().filter(|&&r| r).count();
    Ok(TestDecision { xi, reject, centers, n_rejected, weights_clipped })
}

/// Apply the testing rule to posterior inclusion probabilities:
/// reject H₀ᵢ when 1 − E(κ|yᵢ) > ξ.
///
/// Identical counts produce identical weights, so a dataset with a single
/// distinct value has no two-cluster structure and surfaces the degenerate
/// error from the threshold scan.
pub fn decide(shrinkage: &ShrinkageResult) -> Result<TestDecision> {
    decide_on_weights(&shrinkage.inclusion, false)
}

/// Apply the same rule to the pmf-ratio weights P̂(y+1)/P̂(y) of a fitted
/// mixing distribution. Those ratios can exceed 1 (they are not
/// probabilities), so they are clipped into [0,1] before clustering; the
/// decision reports whether any clipping actually happened.
pub fn kw_decide(sol: &NPMLESolution, counts: &CountDataset) -> Result<TestDecision> {
    let raw: Vec<f64> = counts.counts().iter().map(|&y| kw_weight(sol, y)).collect();
    let clipped = raw.iter().any(|&w| w > 1.0);
    let weights: Vec<f64> = raw.into_iter().map(|w| w.clamp(0.0, 1.0)).collect();
    decide_on_weights(&weights, clipped)
}

/// Tally a decision vector against the truth (true = truly non-null).
pub fn confusion(decision: &TestDecision, truth: &[bool]) -> Result<ConfusionCounts> {
    if decision.reject.len() != truth.len() {
        return Err(Error::LengthMismatch {
            op: "confusion",
            left: decision.reject.len(),
            right: truth.len(),
        });
    }
    let mut c = ConfusionCounts { true_pos: 0, false_pos: 0, true_neg: 0, false_neg: 0 };
    for (&r, &t) in decision.reject.iter().zip(truth) {
        match (r, t) {
            (true, true) => c.true_pos += 1,
            (true, false) => c.false_pos += 1,
            (false, false) => c.true_neg += 1,
            (false, true) => c.false_neg += 1,
        }
    }
    Ok(c)
}
