//! Shared test oracles.
//!
//! Everything here recomputes quantities through routes the library does not
//! use: tanh-sinh quadrature in log space instead of Gauss–Kronrod panels,
//! a Stirling-series log-gamma instead of the Lanczos one, and the
//! half-Cauchy mixture representation instead of the ₂F₁ closed forms. When
//! a test compares the library against these functions, agreement is
//! evidence of correctness rather than of shared bugs.

#![allow(dead_code)]

use rand::Rng;

/// ln Γ(x) by upward recursion into the Stirling regime.
///
/// For x ≥ 12 the asymptotic series with six Bernoulli terms is accurate to
/// well below 1e-13; smaller arguments are lifted with ln Γ(x) =
/// ln Γ(x+1) − ln x.
pub fn lgamma_oracle(x: f64) -> f64 {
    assert!(x > 0.0, "lgamma_oracle needs x > 0, got {x}");
    // B_{2n} / (2n(2n−1)) for n = 1..6.
    const STIRLING: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
    ];
    let mut shift = 0.0;
    let mut z = x;
    while z < 12.0 {
        shift -= z.ln();
        z += 1.0;
    }
    let mut tail = 0.0;
    let zz = z * z;
    let mut pow = z;
    for c in STIRLING {
        tail += c / pow;
        pow *= zz;
    }
    shift + (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + tail
}

/// log Σ exp(xs) without overflow; −∞ for an empty or all-−∞ input.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY || m.is_nan() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// One tanh-sinh node: κ described in logs so integrands stay exact into
/// both corners of (0, 1).
struct Node {
    /// ln κ.
    ln_kappa: f64,
    /// ln (1 − κ).
    ln_one_m: f64,
    /// 1 − κ as a value (may underflow to 0 deep in the κ → 1 corner).
    one_m: f64,
    /// ln of the quadrature weight dκ/dt at this node.
    ln_weight: f64,
}

impl Node {
    /// Node at abscissa t under κ = 1/(1 + e^(−2u)), u = (π/2)·sinh t.
    fn at(t: f64) -> Node {
        use std::f64::consts::FRAC_PI_2;
        let u = FRAC_PI_2 * t.sinh();
        // Sigmoid pieces by the sign of u, all in the safe exponent range.
        let (ln_kappa, ln_one_m) = if u >= 0.0 {
            let em = (-2.0 * u).exp();
            (-em.ln_1p(), -2.0 * u - em.ln_1p())
        } else {
            let ep = (2.0 * u).exp();
            (2.0 * u - ep.ln_1p(), -ep.ln_1p())
        };
        // ln cosh v = |v| + ln(1 + e^(−2|v|)) − ln 2, stable for any v.
        let ln_cosh = |v: f64| v.abs() + (-2.0 * v.abs()).exp().ln_1p() - std::f64::consts::LN_2;
        // dκ/dt = (π/4)·cosh t / cosh² u.
        let ln_weight = (FRAC_PI_2 / 2.0).ln() + ln_cosh(t) - 2.0 * ln_cosh(u);
        Node {
            ln_kappa,
            ln_one_m,
            one_m: ln_one_m.exp(),
            ln_weight,
        }
    }
}

/// log ∫₀¹ f(κ) dκ by tanh-sinh quadrature, with the integrand supplied in
/// log form as `log_f(ln κ, ln(1−κ), 1−κ)`.
///
/// Node spacing is halved until the log-integral moves by less than 1e-12;
/// the abscissa range |t| ≤ 6 puts the outermost nodes at weights far below
/// every integrable singularity this crate produces.
pub fn log_tanh_sinh<F: Fn(f64, f64, f64) -> f64>(log_f: F) -> f64 {
    const T_MAX: f64 = 6.0;
    const MAX_LEVEL: u32 = 12;

    let term = |t: f64| -> f64 {
        let node = Node::at(t);
        let lf = log_f(node.ln_kappa, node.ln_one_m, node.one_m);
        lf + node.ln_weight
    };
    // Terms at multiples of h; only odd multiples when refining a previous
    // level (the even ones are already in the running sum).
    let terms_at = |h: f64, only_odd: bool, out: &mut Vec<f64>| {
        let mut j: i64 = 0;
        loop {
            let t = j as f64 * h;
            if t > T_MAX {
                break;
            }
            if !only_odd || j % 2 != 0 {
                out.push(term(t));
                if j != 0 {
                    out.push(term(-t));
                }
            }
            j += 1;
        }
    };

    let mut h = 0.5;
    let mut terms = Vec::new();
    terms_at(h, false, &mut terms);
    let mut value = logsumexp(&terms) + h.ln();
    for _ in 0..MAX_LEVEL {
        h *= 0.5;
        terms_at(h, true, &mut terms);
        let next = logsumexp(&terms) + h.ln();
        let done = (next - value).abs() < 1e-12;
        value = next;
        if done {
            break;
        }
    }
    value
}

/// log ∫₀¹ κ^(a−1) (1−κ)^(b−1) (1 + (τ²−1)κ)^(−γ) dκ — the integral shape
/// shared by the GH prior normalizer, the posterior, and every posterior
/// moment. The awkward factor is rewritten 1 + (τ²−1)κ = τ² + (1−τ²)(1−κ),
/// which stays exact as κ → 1 for any τ ≥ 1e-6.
pub fn log_gh_integral(a: f64, b: f64, gamma: f64, tau: f64) -> f64 {
    let tau_sq = tau * tau;
    log_tanh_sinh(|ln_k, ln_one_m, one_m| {
        (a - 1.0) * ln_k + (b - 1.0) * ln_one_m
            - gamma * (tau_sq + (1.0 - tau_sq) * one_m).ln()
    })
}

/// E(κ^k | y) for the posterior GH(α + 1/2, y + 1/2, τ²−1, γ), by two
/// independent quadratures.
pub fn posterior_moment_oracle(k: u32, y: u64, alpha: f64, gamma: f64, tau: f64) -> f64 {
    let a = alpha + 0.5;
    let b = y as f64 + 0.5;
    (log_gh_integral(a + k as f64, b, gamma, tau) - log_gh_integral(a, b, gamma, tau)).exp()
}

/// E(1 − κ | y), integrated directly (not as 1 − E(κ|y)) so the oracle keeps
/// full relative accuracy when the posterior piles up near κ = 1.
pub fn posterior_inclusion_oracle(y: u64, alpha: f64, gamma: f64, tau: f64) -> f64 {
    let a = alpha + 0.5;
    let b = y as f64 + 0.5;
    (log_gh_integral(a, b + 1.0, gamma, tau) - log_gh_integral(a, b, gamma, tau)).exp()
}

/// log m(y): the prior-predictive pmf of y under the GH(1/2, 1/2, τ²−1, γ)
/// prior on κ and y | κ ~ NB(α, 1−κ), all through the oracle quadrature.
pub fn log_marginal_oracle(y: u64, alpha: f64, gamma: f64, tau: f64) -> f64 {
    let yf = y as f64;
    let log_nb_const = lgamma_oracle(yf + alpha) - lgamma_oracle(alpha) - lgamma_oracle(yf + 1.0);
    let numer = log_gh_integral(alpha + 0.5, yf + 0.5, gamma, tau);
    let denom = log_gh_integral(0.5, 0.5, gamma, tau);
    log_nb_const + numer - denom
}

/// Posterior P(κ > cutoff | y) by restricting the oracle quadrature to the
/// upper piece through the substitution κ = cutoff + (1−cutoff)·s, s∈(0,1).
pub fn posterior_upper_tail_oracle(
    cutoff: f64,
    y: u64,
    alpha: f64,
    gamma: f64,
    tau: f64,
) -> f64 {
    assert!((0.0..1.0).contains(&cutoff));
    let a = alpha + 0.5;
    let b = y as f64 + 0.5;
    let tau_sq = tau * tau;
    let width = 1.0 - cutoff;
    let log_piece = log_tanh_sinh(|_, ln_one_m_s, one_m_s| {
        // κ = 1 − width·(1−s): ln κ by ln1p, 1−κ = width·(1−s) exactly.
        let one_m_kappa = width * one_m_s;
        let ln_kappa = (-one_m_kappa).ln_1p();
        (a - 1.0) * ln_kappa + (b - 1.0) * (width.ln() + ln_one_m_s)
            - gamma * (tau_sq + (1.0 - tau_sq) * one_m_kappa).ln()
    }) + width.ln();
    (log_piece - log_gh_integral(a, b, gamma, tau)).exp()
}

/// ψ(x) by upward recursion into the asymptotic regime, mirroring
/// [`lgamma_oracle`] but with the derivative series.
pub fn digamma_oracle(x: f64) -> f64 {
    assert!(x > 0.0, "digamma_oracle needs x > 0, got {x}");
    // B_{2n} / 2n for n = 1..6.
    const COEFFS: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32_760.0,
    ];
    let mut shift = 0.0;
    let mut z = x;
    while z < 12.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv_sq = 1.0 / (z * z);
    let mut tail = 0.0;
    let mut pow = inv_sq;
    for c in COEFFS {
        tail -= c * pow;
        pow *= inv_sq;
    }
    shift + z.ln() - 0.5 / z + tail
}

/// E(ln(1−κ) | y) under the GH posterior. The integrand −ln(1−κ) is
/// nonnegative on (0,1), so the signed expectation is minus a ratio of two
/// log-space quadratures.
pub fn posterior_log_one_minus_kappa_oracle(y: u64, alpha: f64, gamma: f64, tau: f64) -> f64 {
    let a = alpha + 0.5;
    let b = y as f64 + 0.5;
    let tau_sq = tau * tau;
    let log_num = log_tanh_sinh(|ln_k, ln_one_m, one_m| {
        let weight = if ln_one_m < 0.0 {
            (-ln_one_m).ln()
        } else {
            f64::NEG_INFINITY
        };
        weight + (a - 1.0) * ln_k + (b - 1.0) * ln_one_m
            - gamma * (tau_sq + (1.0 - tau_sq) * one_m).ln()
    });
    -(log_num - log_gh_integral(a, b, gamma, tau)).exp()
}

/// E(log θ | y) assembled from the conditional Ga(y+α, scale 1−κ) posterior
/// of θ given κ: ψ(y+α) + E(ln(1−κ) | y).
pub fn log_theta_mean_oracle(y: u64, alpha: f64, gamma: f64, tau: f64) -> f64 {
    digamma_oracle(y as f64 + alpha) + posterior_log_one_minus_kappa_oracle(y, alpha, gamma, tau)
}

/// Posterior mean of θ under the half-Cauchy mixture representation:
/// κ = 1/(1 + τ²λ²) with λ ~ C⁺(0,1). Equals the GH posterior mean at
/// γ = 1 exactly; computed here with a λ = tan ψ substitution and composite
/// Simpson quadrature over ψ ∈ (0, π/2) — no GH machinery at all.
pub fn horseshoe_posterior_mean_oracle(y: u64, alpha: f64, tau: f64) -> f64 {
    let yf = y as f64;
    // For fixed λ: y | κ ~ NB(α, 1−κ) with log pmf
    // log C + α ln κ + y ln(1−κ), and E(θ | y, κ) = (1−κ)(y+α). The
    // half-Cauchy density and the tan-substitution Jacobian cancel to the
    // constant 2/π, which drops out of the posterior-mean ratio.
    let n = 20_001;
    let h = std::f64::consts::FRAC_PI_2 / (n - 1) as f64;
    let mut num = Vec::with_capacity(n);
    let mut den = Vec::with_capacity(n);
    for i in 0..n {
        let psi = i as f64 * h;
        let lambda = psi.tan();
        let t2l2 = (tau * lambda) * (tau * lambda);
        let kappa = 1.0 / (1.0 + t2l2);
        let one_m = t2l2 / (1.0 + t2l2);
        let log_like = if one_m == 0.0 && yf > 0.0 {
            f64::NEG_INFINITY
        } else if yf > 0.0 {
            alpha * kappa.ln() + yf * one_m.ln()
        } else {
            alpha * kappa.ln()
        };
        let simpson = if i == 0 || i == n - 1 {
            0.0
        } else if i % 2 == 1 {
            4.0_f64.ln()
        } else {
            2.0_f64.ln()
        };
        den.push(log_like + simpson);
        num.push(log_like + simpson + (one_m * (yf + alpha)).ln());
    }
    (logsumexp(&num) - logsumexp(&den)).exp()
}

/// Draws one shrinkage weight from the *prior* GH(1/2, 1/2, τ²−1, 1): by the
/// half-Cauchy representation, κ = 1/(1 + (τ tan(πU/2))²) with U uniform.
pub fn sample_prior_kappa_gamma1<R: Rng>(rng: &mut R, tau: f64) -> f64 {
    let u: f64 = rng.random();
    let lambda = (std::f64::consts::FRAC_PI_2 * u).tan();
    1.0 / (1.0 + (tau * lambda) * (tau * lambda))
}

/// Draws a count vector from the full γ = 1 hierarchy: κ from the prior,
/// θ | κ ~ Ga(α, rate κ/(1−κ)), y | θ ~ Poisson(θ).
pub fn sample_counts_gamma1<R: Rng>(rng: &mut R, n: usize, alpha: f64, tau: f64) -> Vec<u64> {
    use rand_distr::{Distribution, Gamma, Poisson};
    (0..n)
        .map(|_| {
            let kappa = sample_prior_kappa_gamma1(rng, tau);
            let scale = (1.0 - kappa) / kappa;
            let theta = if scale <= 0.0 {
                0.0
            } else {
                Gamma::new(alpha, scale).unwrap().sample(rng)
            };
            if theta <= 0.0 {
                0
            } else {
                Poisson::new(theta).unwrap().sample(rng) as u64
            }
        })
        .collect()
}
