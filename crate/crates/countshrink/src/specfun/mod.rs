//! Special functions underlying every posterior formula in the crate:
//! log-gamma and log-beta, digamma, the Gauss hypergeometric function ₂F₁,
//! the upper incomplete gamma function down to negative shapes, and the
//! exponential integral E₁.
//!
//! All functions are pure and thread-safe; tolerances for the iterative
//! evaluations are carried by [`EvalControl`].

mod gamma;
mod hyp2f1;
mod incgamma;
pub(crate) mod quad;

pub use gamma::{digamma, ln_gamma, log_beta};
pub use hyp2f1::{gauss_2f1, log_gauss_2f1, EvalControl};
pub use incgamma::{exp_e1, scaled_upper_inc_gamma, upper_inc_gamma};

pub(crate) use hyp2f1::log_gauss_2f1_compl;
