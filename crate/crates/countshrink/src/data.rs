//! Count-vector container shared by fitting, estimation, and simulation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A vector of observed counts with optional metadata.
///
/// `exposure` is a single positive value shared by every entry (e.g. a common
/// observation window or read depth). A constant exposure rescales reported
/// *rates* (`θ̂ / exposure`) but never enters the count-level model itself, so
/// it is carried as metadata rather than folded into the counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountDataset {
    y: Vec<u64>,
    exposure: Option<f64>,
    labels: Option<Vec<String>>,
}

impl CountDataset {
    /// Builds a dataset from raw counts.
    pub fn new(y: Vec<u64>) -> Self {
        CountDataset {
            y,
            exposure: None,
            labels: None,
        }
    }

    /// Attaches a constant positive exposure to every entry.
    pub fn with_exposure(mut self, exposure: f64) -> Result<Self> {
        if !(exposure.is_finite() && exposure > 0.0) {
            return Err(Error::InvalidData {
                msg: format!("exposure must be finite and positive, got {exposure}"),
            });
        }
        self.exposure = Some(exposure);
        Ok(self)
    }

    /// Attaches one label per entry.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.y.len() {
            return Err(Error::LengthMismatch {
                op: "CountDataset::with_labels",
                left: labels.len(),
                right: self.y.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// The observed counts.
    pub fn counts(&self) -> &[u64] {
        &self.y
    }

    /// Shared exposure, if any.
    pub fn exposure(&self) -> Option<f64> {
        self.exposure
    }

    /// Per-entry labels, if any.
    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Number of entries.
    pub fn len(&self) -> usize {
        self.y.len()
    }

    /// Whether the dataset has no entries.
    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// Largest count, or `None` on an empty dataset.
    pub fn max_count(&self) -> Option<u64> {
        self.y.iter().copied().max()
    }

    /// Sample mean of the counts (0 for an empty dataset).
    pub fn mean(&self) -> f64 {
        if self.y.is_empty() {
            return 0.0;
        }
        self.y.iter().map(|&v| v as f64).sum::<f64>() / self.y.len() as f64
    }

    /// Unbiased sample variance of the counts (0 when fewer than 2 entries).
    pub fn variance(&self) -> f64 {
        let n = self.y.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        self.y
            .iter()
            .map(|&v| {
                let d = v as f64 - m;
                d * d
            })
            .sum::<f64>()
            / (n - 1) as f64
    }

    /// Distinct counts with multiplicities, ascending in the count value.
    ///
    /// Likelihood sums and per-count caches iterate this instead of the raw
    /// vector: large sparse datasets have very few distinct values, and the
    /// sorted order keeps floating-point accumulation deterministic.
    pub fn distinct_counts(&self) -> Vec<(u64, usize)> {
        let mut sorted = self.y.clone();
        sorted.sort_unstable();
        let mut out: Vec<(u64, usize)> = Vec::new();
        for v in sorted {
            match out.last_mut() {
                Some((value, mult)) if *value == v => *mult += 1,
                _ => out.push((v, 1)),
            }
        }
        out
    }
}

impl From<Vec<u64>> for CountDataset {
    fn from(y: Vec<u64>) -> Self {
        CountDataset::new(y)
    }
}
