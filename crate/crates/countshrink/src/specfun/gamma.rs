//! Log-gamma, log-beta, and digamma.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};

/// Lanczos shift parameter for the log-gamma approximation below.
const LANCZOS_R: f64 = 10.900511;

/// Lanczos partial-fraction coefficients `d_k` paired with `LANCZOS_R`.
/// With these, Γ(x) = 2√(e/π) · (x − 1/2 + r)^{x−1/2} e^{−(x−1/2+r)} · Σ_k d_k/(x−1+k)
/// holds to near machine precision for x ≥ 1/2.
const LANCZOS_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

/// ln(2·√(e/π)), the constant factor of the Lanczos form.
const LN_2_SQRT_E_OVER_PI: f64 = 0.620_782_237_635_245_2;

/// Natural log of Γ(x) for x > 0.
///
/// Lanczos approximation with the reflection formula for x < 1/2; accurate to
/// roughly 1e-14 relative across the range used here (arguments up to ~10⁶
/// appear in log-beta calls for large counts).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: ln Γ(x) = ln π − ln sin(πx) − ln Γ(1−x).
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |acc, (k, dk)| acc + dk / (k as f64 - x));
        PI.ln()
            - (PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + LANCZOS_R) / E).ln()
    } else {
        let s = LANCZOS_DK
            .iter()
            .enumerate()
            .skip(1)
            .fold(LANCZOS_DK[0], |acc, (k, dk)| acc + dk / (x + k as f64 - 1.0));
        s.ln() + LN_2_SQRT_E_OVER_PI + (x - 0.5) * ((x - 0.5 + LANCZOS_R) / E).ln()
    }
}

/// Natural log of the beta function, log β(a,b) = ln Γ(a) + ln Γ(b) − ln Γ(a+b).
///
/// Stays finite for arguments up to at least 10⁶ (everything is computed in
/// log space; β itself underflows already for moderate arguments).
///
/// # Example
///
/// ```
/// use countshrink::specfun::log_beta;
///
/// // β(1/2, 1/2) = π
/// let v = log_beta(0.5, 0.5).unwrap();
/// assert!((v - std::f64::consts::PI.ln()).abs() < 1e-14);
/// ```
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(Error::domain(
            "log_beta",
            format!("arguments must be positive, got a={a}, b={b}"),
        ));
    }
    Ok(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

/// Coefficients of the asymptotic expansion
/// ψ(x) ≍ ln x − 1/(2x) − Σ_k B_{2k}/(2k·x^{2k}); these are B_{2k}/(2k) for
/// k = 1..6 (1/12, −1/120, 1/252, −1/240, 1/132, −691/32760).
const DIGAMMA_TAIL: [f64; 6] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
];

/// Digamma function ψ(x) = d/dx ln Γ(x) for x > 0.
///
/// Shifts the argument above 10 with ψ(x) = ψ(x+1) − 1/x, then applies the
/// asymptotic expansion; the first omitted term at x = 10 is below 1e-15.
///
/// # Example
///
/// ```
/// use countshrink::specfun::digamma;
///
/// // ψ(1) = −γ (Euler–Mascheroni)
/// assert!((digamma(1.0).unwrap() + 0.5772156649015329).abs() < 1e-13);
/// ```
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "digamma",
            format!("argument must be positive, got {x}"),
        ));
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < 10.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let inv2 = 1.0 / (z * z);
    // Horner evaluation of the 1/z² tail.
    let mut tail = 0.0;
    for &c in DIGAMMA_TAIL.iter().rev() {
        tail = (tail + c) * inv2;
    }
    Ok(shift + z.ln() - 0.5 / z - tail)
}
