//! Derivative-free maximization over an axis-aligned box.
//!
//! A small Nelder–Mead simplex search, specialized for the low-dimensional
//! (2–3 parameter) smooth objectives used by the hyperparameter fit. Points
//! are projected onto the box before every evaluation, so the objective is
//! never called outside its domain; axes with zero width are pinned and the
//! simplex never leaves them. The search is fully deterministic: no
//! randomized restarts, fixed coefficients, and ties broken by index.

/// Standard simplex coefficients: reflection, expansion, contraction, shrink.
const RHO: f64 = 1.0;
const CHI: f64 = 2.0;
const PSI: f64 = 0.5;
const SIGMA: f64 = 0.5;

/// Relative simplex-size and objective-spread thresholds for early stopping.
const X_TOL: f64 = 1e-10;
const F_TOL: f64 = 1e-12;

/// Maximize `f` over the box `[lo, hi]`, starting from `start`.
///
/// Runs at most `max_iters` simplex iterations (each costs one to `dim`
/// objective evaluations) and returns the best point *ever evaluated*
/// together with its objective value — not merely the final simplex vertex,
/// so the result can never be worse than the starting point.
///
/// Axes with `lo[i] == hi[i]` are held fixed at that value. If every axis is
/// pinned, `start` is evaluated once and returned.
pub(crate) fn maximize_in_box<F>(
    mut f: F,
    lo: &[f64],
    hi: &[f64],
    start: &[f64],
    max_iters: usize,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = lo.len();
    assert_eq!(hi.len(), dim);
    assert_eq!(start.len(), dim);

    let clamp = |x: &mut Vec<f64>| {
        for i in 0..dim {
            x[i] = x[i].clamp(lo[i], hi[i]);
        }
    };

    let mut best_x: Vec<f64> = start.to_vec();
    clamp(&mut best_x);
    let mut best_f = f(&best_x);

    // Only axes with positive width take part in the simplex geometry.
    let active: Vec<usize> = (0..dim).filter(|&i| hi[i] > lo[i]).collect();
    if active.is_empty() || max_iters == 0 {
        return (best_x, best_f);
    }
    let k = active.len();

    // Initial simplex: the start plus one vertex per active axis, stepped by
    // 5% of the axis width (flipped inward when the step would leave the box).
    let mut verts: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    let mut fvals: Vec<f64> = Vec::with_capacity(k + 1);
    verts.push(best_x.clone());
    fvals.push(best_f);
    for &i in &active {
        let step = 0.05 * (hi[i] - lo[i]);
        let mut v = best_x.clone();
        v[i] = if v[i] + step <= hi[i] { v[i] + step } else { v[i] - step };
        let fv = f(&v);
        if fv > best_f {
            best_f = fv;
            best_x = v.clone();
        }
        verts.push(v);
        fvals.push(fv);
    }

    fn record(x: &[f64], fx: f64, best_x: &mut Vec<f64>, best_f: &mut f64) {
        if fx > *best_f {
            *best_f = fx;
            *best_x = x.to_vec();
        }
    }

    for _ in 0..max_iters {
        // Order vertices best-first (descending objective; stable on ties).
        let mut idx: Vec<usize> = (0..=k).collect();
        idx.sort_by(|&p, &q| fvals[q].partial_cmp(&fvals[p]).unwrap_or(std::cmp::Ordering::Equal));
        let ordered: Vec<Vec<f64>> = idx.iter().map(|&p| verts[p].clone()).collect();
        let ordered_f: Vec<f64> = idx.iter().map(|&p| fvals[p]).collect();
        verts = ordered;
        fvals = ordered_f;

        // Convergence: simplex collapsed in space and objective.
        let f_spread = fvals[0] - fvals[k];
        let x_spread = active
            .iter()
            .map(|&i| {
                let width = hi[i] - lo[i];
                verts
                    .iter()
                    .map(|v| (v[i] - verts[0][i]).abs() / width)
                    .fold(0.0_f64, f64::max)
            })
            .fold(0.0_f64, f64::max);
        if x_spread < X_TOL && f_spread.abs() < F_TOL * (1.0 + fvals[0].abs()) {
            break;
        }

        // Centroid of all vertices except the worst.
        let mut centroid = vec![0.0; dim];
        for v in verts.iter().take(k) {
            for i in 0..dim {
                centroid[i] += v[i] / k as f64;
            }
        }

        let worst = verts[k].clone();
        let mut reflected: Vec<f64> = (0..dim)
            .map(|i| centroid[i] + RHO * (centroid[i] - worst[i]))
            .collect();
        clamp(&mut reflected);
        let f_r = f(&reflected);
        record(&reflected, f_r, &mut best_x, &mut best_f);

        if f_r > fvals[0] {
            // Reflection beat the best vertex: try stretching further.
            let mut expanded: Vec<f64> = (0..dim)
                .map(|i| centroid[i] + CHI * (centroid[i] - worst[i]))
                .collect();
            clamp(&mut expanded);
            let f_e = f(&expanded);
            record(&expanded, f_e, &mut best_x, &mut best_f);
            if f_e > f_r {
                verts[k] = expanded;
                fvals[k] = f_e;
            } else {
                verts[k] = reflected;
                fvals[k] = f_r;
            }
            continue;
        }
        if f_r > fvals[k - 1] {
            // Better than the second-worst: plain acceptance.
            verts[k] = reflected;
            fvals[k] = f_r;
            continue;
        }

        // Contract toward the centroid, outside or inside depending on
        // whether the reflection at least improved on the worst vertex.
        let (mut contracted, accept_min): (Vec<f64>, f64) = if f_r > fvals[k] {
            let c: Vec<f64> = (0..dim)
                .map(|i| centroid[i] + PSI * (centroid[i] - worst[i]))
                .collect();
            (c, f_r)
        } else {
            let c: Vec<f64> = (0..dim)
                .map(|i| centroid[i] - PSI * (centroid[i] - worst[i]))
                .collect();
            (c, fvals[k])
        };
        clamp(&mut contracted);
        let f_c = f(&contracted);
        record(&contracted, f_c, &mut best_x, &mut best_f);
        if f_c >= accept_min {
            verts[k] = contracted;
            fvals[k] = f_c;
            continue;
        }

        // Contraction failed: shrink everything toward the best vertex.
        for j in 1..=k {
            let mut v: Vec<f64> = (0..dim)
                .map(|i| verts[0][i] + SIGMA * (verts[j][i] - verts[0][i]))
                .collect();
            clamp(&mut v);
            let fv = f(&v);
            record(&v, fv, &mut best_x, &mut best_f);
            verts[j] = v;
            fvals[j] = fv;
        }
    }

    (best_x, best_f)
}
