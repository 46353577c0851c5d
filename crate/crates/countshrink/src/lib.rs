//! Shrinkage estimation and multiple testing for sparse Poisson count vectors.
//!
//! Observed counts `y_i ~ Poisson(θ_i)` with most `θ_i` at or near zero are
//! modeled through a local–global shrinkage prior built from the
//! Gauss-hypergeometric (GH) distribution on the shrinkage factor
//! `κ_i ∈ (0,1)`: posterior means take the form
//! `E(θ_i | y_i) = (1 − E(κ_i | y_i)) · (y_i + α)`, so `κ` near 1 collapses a
//! coordinate to zero while `κ` near 0 leaves large counts essentially
//! untouched. The GH family is conjugate here, which keeps every posterior
//! quantity in closed form up to one-dimensional Gauss ₂F₁ evaluations — no
//! MCMC anywhere in this crate.
//!
//! What lives where:
//!
//! - [`specfun`]: the special-function kernel (log-gamma, log-beta, digamma,
//!   Gauss ₂F₁, upper incomplete gamma, exponential integral) tuned for the
//!   parameter ranges the GH posterior produces.
//! - [`gh`]: the GH prior/posterior itself — densities, posterior moments,
//!   marginal pmf, the prior density on `θ` with its closed-form envelopes,
//!   tail and concentration bounds, and a Tweedie-formula cross-check.
//! - [`fit`]: empirical-Bayes estimation of the global parameters `(τ, γ)` by
//!   maximizing the exact marginal likelihood, plus vectorized shrinkage.
//! - [`estimators`]: comparison methods — Robbins' frequency-ratio rule, the
//!   Kiefer–Wolfowitz nonparametric mixture MLE, a global gamma prior, a
//!   zero-inflated Poisson EM, the horseshoe special case, and the two-groups
//!   posterior weight.
//! - [`multitest`]: the induced multiple-testing rule (2-means split of
//!   posterior inclusion weights) and confusion counting.
//! - [`sim`]: seeded, replicable simulation suites measuring estimation risk
//!   and testing error, with counter-based RNG streams per replication.
//! - [`data`]: the count-vector container shared by all of the above.
//!
//! Everything is deterministic given a seed: fits use grid + Nelder–Mead
//! refinement (no stochastic optimizer), and simulation randomness comes from
//! per-replication ChaCha streams keyed by `(seed, suite, cell, rep)`.

pub mod data;
pub mod error;
pub mod estimators;
pub mod fit;
pub mod gh;
pub mod multitest;
pub mod sim;
pub mod specfun;

mod optim;

pub use data::CountDataset;
pub use error::{Error, Result};
pub use fit::{fit, shrink, FitConfig, FitResult};
pub use gh::{GHDistribution, GHParams, ShrinkageResult};
