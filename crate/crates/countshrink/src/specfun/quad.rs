//! Adaptive Gauss–Kronrod quadrature of log-scale integrands.
//!
//! The ₂F₁ evaluations behind the posterior need integrals whose integrands
//! span hundreds of orders of magnitude (e.g. (1−wt)^{−γ} with 1−w = τ² down
//! to 1e-12). The integrator below therefore takes `log f` rather than `f`,
//! tracks one global scale `M = max log f` seen so far, accumulates
//! contributions of `exp(log f − M)`, and returns `log ∫ f`. When refinement
//! discovers a larger `M`, previously accumulated segment results are
//! rescaled — multiplication by a constant, exact in the algebra and cheap in
//! practice.

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae on [0,1] side of the symmetric rule (the G7
/// points are every other entry starting at index 1).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_47,
    0.0,
];

/// Kronrod weights paired with `XGK`.
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// Gauss-7 weights for the embedded rule (paired with XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_69,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];

/// One evaluated panel: scaled Kronrod integral, scaled error estimate, and
/// the largest log-integrand value seen on the panel.
#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    integral: f64,
    error: f64,
    log_peak: f64,
}

/// Evaluates the GK15 rule for `exp(log_f − scale)` on `[lo, hi]`.
fn gk15<F: Fn(f64) -> f64>(log_f: &F, lo: f64, hi: f64, scale: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut logs = [f64::NEG_INFINITY; 15];
    let mut peak = f64::NEG_INFINITY;
    for (i, &x) in XGK.iter().enumerate() {
        if i == 7 {
            logs[7] = log_f(center);
            peak = peak.max(logs[7]);
        } else {
            let lo_val = log_f(center - half * x);
            let hi_val = log_f(center + half * x);
            logs[i] = lo_val;
            logs[14 - i] = hi_val;
            peak = peak.max(lo_val).max(hi_val);
        }
    }
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    for i in 0..8 {
        let pair = if i == 7 {
            (logs[7] - scale).exp()
        } else {
            (logs[i] - scale).exp() + (logs[14 - i] - scale).exp()
        };
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    Panel {
        lo,
        hi,
        integral: half * kronrod,
        error: half * (kronrod - gauss).abs(),
        log_peak: peak,
    }
}

/// Adaptively integrates `exp(log_f(x))` over the union of the intervals
/// between consecutive `breakpoints`, returning `log ∫ f`.
///
/// `breakpoints` must be nondecreasing; degenerate intervals are skipped.
/// The target is a relative tolerance on the linear-scale value. Returns
/// `NEG_INFINITY` when the integrand underflows to zero everywhere.
pub(crate) fn integrate_log<F: Fn(f64) -> f64>(
    log_f: F,
    breakpoints: &[f64],
    rel_tol: f64,
    max_panels: usize,
) -> Result<f64> {
    let mut panels: Vec<Panel> = Vec::with_capacity(breakpoints.len().max(8) * 2);
    let mut scale = f64::NEG_INFINITY;

    let push = |panels: &mut Vec<Panel>, scale: &mut f64, lo: f64, hi: f64| {
        // Probe pass: its integral may overflow if the integrand is huge, but
        // only its log_peak is consulted before the properly scaled pass.
        let probe = gk15(&log_f, lo, hi, if scale.is_finite() { *scale } else { 0.0 });
        if probe.log_peak > *scale {
            // A new global maximum: bring every stored panel onto the new scale.
            let factor = if scale.is_finite() {
                (*scale - probe.log_peak).exp()
            } else {
                0.0
            };
            for q in panels.iter_mut() {
                q.integral *= factor;
                q.error *= factor;
            }
            *scale = probe.log_peak;
            panels.push(gk15(&log_f, lo, hi, *scale));
        } else if scale.is_finite() {
            // The probe already ran on the current scale.
            panels.push(probe);
        } else {
            // Both the scale and this panel's peak are −∞: the integrand has
            // underflowed to zero everywhere seen so far.
            panels.push(Panel {
                lo,
                hi,
                integral: 0.0,
                error: 0.0,
                log_peak: f64::NEG_INFINITY,
            });
        }
    };

    for pair in breakpoints.windows(2) {
        if pair[1] > pair[0] {
            push(&mut panels, &mut scale, pair[0], pair[1]);
        }
    }
    if panels.is_empty() {
        return Err(Error::domain(
            "integrate_log",
            "no non-degenerate integration interval".to_string(),
        ));
    }

    // Roundoff-floor bailout: the GK15 error estimate of a scaled panel sum
    // cannot fall below the f64 summation noise, roughly `panels · ε · total`.
    // Integrands with very sharp features (e.g. c − b in the hundreds of
    // thousands) reach that floor slightly above a demanded tolerance of
    // ~5e-13, after which further splitting only churns noise. Every
    // CHECK_EVERY splits, if the error estimate is at the noise floor and the
    // accumulated value has stopped moving (compared in log space, immune to
    // rescaling), accept the value instead of exhausting the panel budget.
    const CHECK_EVERY: usize = 64;
    let mut splits = 0usize;
    let mut log_at_check = f64::NAN;

    loop {
        let total: f64 = panels.iter().map(|p| p.integral).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if total == 0.0 && !scale.is_finite() {
            return Ok(f64::NEG_INFINITY);
        }
        if err <= rel_tol * total.abs() {
            return Ok(total.ln() + scale);
        }
        if splits % CHECK_EVERY == 0 {
            let log_total = total.ln() + scale;
            let noise_floor = 32.0 * panels.len() as f64 * f64::EPSILON * total;
            if err <= noise_floor && (log_total - log_at_check).abs() <= rel_tol {
                return Ok(log_total);
            }
            log_at_check = log_total;
        }
        splits += 1;
        if panels.len() >= max_panels {
            return Err(Error::NoConvergence {
                op: "integrate_log",
                limit: max_panels,
            });
        }
        // Split the panel with the largest error estimate.
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .expect("non-empty panel list");
        let Panel { lo, hi, .. } = panels[worst];
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // Interval no longer splittable in f64; accept what we have.
            return Ok(total.ln() + scale);
        }
        panels.swap_remove(worst);
        push(&mut panels, &mut scale, lo, mid);
        push(&mut panels, &mut scale, mid, hi);
    }
}
