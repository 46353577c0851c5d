//! Gauss hypergeometric function ₂F₁(a,b;c;w) for the parameter ranges the
//! GH posterior produces: a ≥ 0, c > b > 0, w ∈ [0,1).
//!
//! Two regimes:
//!
//! - `w ≤ 0.5`: the defining Pochhammer series. Every term is nonnegative
//!   here, so the sum has no cancellation; partial sums are rescaled if they
//!   grow past 1e250 and the result is returned as a log.
//! - `w > 0.5`: adaptive Gauss–Kronrod quadrature of the Euler integral
//!   ₂F₁(a,b;c;w)·β(b,c−b) = ∫₀¹ t^{b−1}(1−t)^{c−b−1}(1−wt)^{−a} dt,
//!   evaluated in log space. The series is useless in this regime (millions
//!   of terms as w → 1), and the usual w → w/(w−1) transformation has poles
//!   whenever c−a−b is an integer, which happens for every integer a here;
//!   quadrature has no such restriction.
//!
//! The integral is split at t = 1/2 and each half is substituted with
//! t = sin²φ (respectively 1−t = sin²ψ) measured from its own endpoint.
//! That removes the half-order endpoint singularities analytically and —
//! more importantly — keeps full relative accuracy in the region t → 1,
//! where the factor (1−wt) collapses to (1−w) + w·(1−t) and the interesting
//! scale is 1−t ≈ 1−w, far below the absolute resolution of points near 1.
//! For the same reason the quadrature path works with `1−w` directly: the
//! complement-form entry point lets posterior code pass τ² exactly instead
//! of the catastrophically rounded `1 − (1−τ²)`.

use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};

use super::gamma::log_beta;
use super::quad::integrate_log;

/// Tolerances and budgets for ₂F₁ evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalControl {
    /// Relative tolerance of the returned value.
    pub rel_tol: f64,
    /// Series term cap (and, scaled, the quadrature panel budget).
    pub max_terms: usize,
}

impl Default for EvalControl {
    fn default() -> Self {
        EvalControl {
            rel_tol: 1e-12,
            max_terms: 10_000,
        }
    }
}

impl EvalControl {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::domain(
                "EvalControl",
                format!("rel_tol must be positive, got {}", self.rel_tol),
            ));
        }
        if self.max_terms == 0 {
            return Err(Error::domain(
                "EvalControl",
                "max_terms must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

/// ₂F₁(a,b;c;w) on the linear scale.
///
/// Thin wrapper over [`log_gauss_2f1`]; the value can legitimately overflow
/// `f64` for w very close to 1 with large a — callers in that regime should
/// use the log form.
///
/// # Example
///
/// ```
/// use countshrink::specfun::{gauss_2f1, EvalControl};
///
/// // ₂F₁(1,1;2;w) = −ln(1−w)/w
/// let v = gauss_2f1(1.0, 1.0, 2.0, 0.5, &EvalControl::default()).unwrap();
/// assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
/// ```
pub fn gauss_2f1(a: f64, b: f64, c: f64, w: f64, ctl: &EvalControl) -> Result<f64> {
    Ok(log_gauss_2f1(a, b, c, w, ctl)?.exp())
}

/// log ₂F₁(a,b;c;w).
pub fn log_gauss_2f1(a: f64, b: f64, c: f64, w: f64, ctl: &EvalControl) -> Result<f64> {
    if !(0.0..1.0).contains(&w) {
        return Err(Error::domain(
            "gauss_2f1",
            format!("w must lie in [0,1), got {w}"),
        ));
    }
    log_gauss_2f1_compl(a, b, c, 1.0 - w, ctl)
}

/// log ₂F₁(a,b;c;1−w̄) given the *complement* w̄ = 1−w directly.
///
/// This is the form posterior code calls: with w = 1−τ² the complement is
/// τ², known exactly, whereas recovering it from w loses all precision once
/// τ² ≤ 1e-16·w.
pub(crate) fn log_gauss_2f1_compl(
    a: f64,
    b: f64,
    c: f64,
    w_compl: f64,
    ctl: &EvalControl,
) -> Result<f64> {
    ctl.validate()?;
    if !a.is_finite() || a < 0.0 {
        return Err(Error::domain(
            "gauss_2f1",
            format!("first parameter must be finite and ≥ 0, got {a}"),
        ));
    }
    if !(b > 0.0) || !(c > b) {
        return Err(Error::domain(
            "gauss_2f1",
            format!("need c > b > 0 for the Euler representation, got b={b}, c={c}"),
        ));
    }
    if !(w_compl > 0.0 && w_compl <= 1.0) {
        return Err(Error::domain(
            "gauss_2f1",
            format!("complement 1−w must lie in (0,1], got {w_compl}"),
        ));
    }
    let w = 1.0 - w_compl;
    if a == 0.0 || w == 0.0 {
        return Ok(0.0);
    }
    if w <= 0.5 {
        log_series(a, b, c, w, ctl)
    } else {
        log_euler_quadrature(a, b, c, w, w_compl, ctl)
    }
}

/// Direct Pochhammer series Σ_k (a)_k(b)_k/((c)_k k!) w^k; terms are all
/// nonnegative on this domain.
fn log_series(a: f64, b: f64, c: f64, w: f64, ctl: &EvalControl) -> Result<f64> {
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut log_scale = 0.0f64;
    for k in 0..ctl.max_terms {
        let kf = k as f64;
        let ratio = (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * w;
        term *= ratio;
        sum += term;
        // Once the term ratio is safely below 1 the tail is geometric, so a
        // term below tol·sum bounds the truncation error by ~tol·sum·10.
        if ratio < 0.9 && term <= 0.1 * ctl.rel_tol * sum {
            return Ok(sum.ln() + log_scale);
        }
        if sum > 1e250 {
            log_scale += sum.ln();
            term /= sum;
            sum = 1.0;
        }
    }
    Err(Error::NoConvergence {
        op: "gauss_2f1",
        limit: ctl.max_terms,
    })
}

/// Builds a geometric ladder of panel edges on (0, π/4], clustered around a
/// characteristic angle `s0` so that the initial panels already resolve the
/// scale where the integrand turns over.
fn angle_ladder(s0: f64) -> Vec<f64> {
    let mut edges = vec![0.0];
    let mut s = (s0 * 0.1).max(1e-9);
    while s < FRAC_PI_4 * 0.9 {
        edges.push(s);
        s *= 3.0;
    }
    edges.push(FRAC_PI_4);
    edges
}

/// Quadrature of the Euler integral in log space, split at t = 1/2 with a
/// sin² substitution on each half.
fn log_euler_quadrature(
    a: f64,
    b: f64,
    c: f64,
    w: f64,
    w_compl: f64,
    ctl: &EvalControl,
) -> Result<f64> {
    let sin_exp_left = 2.0 * b - 1.0; // exponent of sin φ on the t→0 half
    let cos_exp_left = 2.0 * (c - b) - 1.0; // exponent of cos φ on the t→0 half
    let max_panels = (ctl.max_terms / 2).max(256);

    // Left half: t = sin²φ, φ ∈ (0, π/4]; 1−wt = w̄ + w·cos²φ.
    let left = integrate_log(
        |phi: f64| {
            let (s, co) = phi.sin_cos();
            let mut v = std::f64::consts::LN_2;
            if sin_exp_left != 0.0 {
                v += sin_exp_left * s.ln();
            }
            if cos_exp_left != 0.0 {
                v += cos_exp_left * co.ln();
            }
            v - a * (w_compl + w * (co * co)).ln()
        },
        &angle_ladder(((b / (c + 1.0)).sqrt()).min(0.3)),
        0.5 * ctl.rel_tol,
        max_panels,
    )?;

    // Right half: 1−t = sin²ψ, ψ ∈ (0, π/4]; 1−wt = w̄ + w·sin²ψ. The sin
    // and cos exponents swap relative to the left half.
    let right = integrate_log(
        |psi: f64| {
            let (s, co) = psi.sin_cos();
            let mut v = std::f64::consts::LN_2;
            if cos_exp_left != 0.0 {
                v += cos_exp_left * s.ln();
            }
            if sin_exp_left != 0.0 {
                v += sin_exp_left * co.ln();
            }
            v - a * (w_compl + w * (s * s)).ln()
        },
        &angle_ladder(w_compl.sqrt()),
        0.5 * ctl.rel_tol,
        max_panels,
    )?;

    let log_integral = log_add(left, right);
    Ok(log_integral - log_beta(b, c - b)?)
}

/// log(eˣ + eʸ) without overflow.
fn log_add(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}
